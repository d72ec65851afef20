/*
 Copyright 2026 The FastSLQ Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

#include "fastslq/ode/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace fastslq::ode {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0, a64 = 49.0 / 176.0,
                 a65 = -5103.0 / 18656.0;
constexpr double a71 = 35.0 / 384.0, a73 = 500.0 / 1113.0, a74 = 125.0 / 192.0, a75 = -2187.0 / 6784.0,
                 a76 = 11.0 / 84.0;
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0, e5 = -17253.0 / 339200.0,
                 e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;

// PI controller constants.
constexpr double kBeta = 0.04;
constexpr double kExpo = 0.2 - 0.75 * kBeta;
constexpr double kSafety = 0.9;
constexpr double kFacMin = 0.2;
constexpr double kFacMax = 10.0;

double errorNorm(const Vector& err, const Vector& y0, const Vector& y1, const IntegratorSettings& s) {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < err.size(); ++i) {
    const double scale = s.abs_tol + s.rel_tol * std::max(std::abs(y0[i]), std::abs(y1[i]));
    const double r = err[i] / scale;
    sum += r * r;
  }
  return err.size() == 0 ? 0.0 : std::sqrt(sum / static_cast<double>(err.size()));
}

double scaledNorm(const Vector& v, const Vector& y, const IntegratorSettings& s) {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double r = v[i] / (s.abs_tol + s.rel_tol * std::abs(y[i]));
    sum += r * r;
  }
  return v.size() == 0 ? 0.0 : std::sqrt(sum / static_cast<double>(v.size()));
}

}  // namespace

void IntegratorSettings::validate() const {
  if (!(abs_tol > 0.0 && rel_tol > 0.0 && max_step > 0.0 && min_step > 0.0 && max_num_steps > 0)) {
    fail(ErrorCode::InvalidArgument, "integrator settings must all be positive");
  }
  if (min_step > max_step) fail(ErrorCode::InvalidArgument, "integrator min_step exceeds max_step");
}

DenseTrajectory integrateAdaptive(const Rhs& rhs, double t_start, double t_end, const Vector& y0,
                                  const IntegratorSettings& settings) {
  settings.validate();
  if (!y0.allFinite()) fail(ErrorCode::NonFiniteRhs, "initial state is not finite");
  if (t_start == t_end) {
    Vector dy(y0.size());
    rhs(t_start, y0, dy);
    return DenseTrajectory(Direction::Forward, {t_start}, {y0}, {dy});
  }

  const double dir = t_end > t_start ? 1.0 : -1.0;
  const double length = std::abs(t_end - t_start);
  const Eigen::Index n = y0.size();

  // Time-reversed system in s = |t - t_start|.
  auto eval = [&](double s, const Vector& y, Vector& dy) {
    const double t = s >= length ? t_end : t_start + dir * s;
    rhs(t, y, dy);
    if (!dy.allFinite()) {
      std::ostringstream msg;
      msg << "right-hand side not finite at t = " << t;
      fail(ErrorCode::NonFiniteRhs, msg.str());
    }
    if (dir < 0.0) dy = -dy;
  };

  Vector k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), ytmp(n), y1(n), err(n);
  Vector y = y0;
  double s = 0.0;
  eval(s, y, k1);

  std::vector<double> times{t_start};
  std::vector<Vector> values{y};
  std::vector<Vector> derivs{dir * k1};

  // Initial step guess (Hairer & Wanner, II.4).
  double h;
  {
    const double d0 = scaledNorm(y, y, settings);
    const double d1 = scaledNorm(k1, y, settings);
    double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    h0 = std::min({h0, settings.max_step, length});
    ytmp = y + h0 * k1;
    eval(s + h0, ytmp, k2);
    const double d2 = scaledNorm(k2 - k1, y, settings) / h0;
    const double dmax = std::max(d1, d2);
    const double h1 = dmax <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dmax, 0.2);
    h = std::min({100.0 * h0, h1, settings.max_step, length});
    h = std::max(h, settings.min_step);
  }

  double fac_old = 1e-4;
  bool last_rejected = false;
  long steps = 0;
  while (s < length) {
    if (++steps > settings.max_num_steps) {
      fail(ErrorCode::MaxStepsExceeded, "exceeded max_num_steps");
    }
    bool final_step = false;
    if (s + 1.01 * h >= length) {
      h = length - s;
      final_step = true;
    } else if (h < settings.min_step) {
      std::ostringstream msg;
      msg << "step " << h << " below min_step at t = " << t_start + dir * s;
      fail(ErrorCode::StepSizeUnderflow, msg.str());
    }

    ytmp = y + h * a21 * k1;
    eval(s + c2 * h, ytmp, k2);
    ytmp = y + h * (a31 * k1 + a32 * k2);
    eval(s + c3 * h, ytmp, k3);
    ytmp = y + h * (a41 * k1 + a42 * k2 + a43 * k3);
    eval(s + c4 * h, ytmp, k4);
    ytmp = y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
    eval(s + c5 * h, ytmp, k5);
    ytmp = y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
    eval(final_step ? length : s + h, ytmp, k6);
    y1 = y + h * (a71 * k1 + a73 * k3 + a74 * k4 + a75 * k5 + a76 * k6);
    eval(final_step ? length : s + h, y1, k7);
    err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

    const double en = errorNorm(err, y, y1, settings);
    const double fac11 = std::pow(std::max(en, 1e-300), kExpo);
    if (en <= 1.0) {
      double fac = fac11 / std::pow(fac_old, kBeta);
      fac = std::clamp(fac / kSafety, 1.0 / kFacMax, 1.0 / kFacMin);
      double h_new = h / fac;
      if (last_rejected) h_new = std::min(h_new, h);
      fac_old = std::max(en, 1e-4);
      last_rejected = false;

      s = final_step ? length : s + h;
      y = y1;
      k1 = k7;
      const double t_node = final_step ? t_end : t_start + dir * s;
      if (dir * (t_node - times.back()) > 0.0) {
        times.push_back(t_node);
        values.push_back(y);
        derivs.push_back(dir * k1);
      } else {
        values.back() = y;
        derivs.back() = dir * k1;
      }
      h = std::min(h_new, settings.max_step);
    } else {
      h = h / std::min(1.0 / kFacMin, fac11 / kSafety);
      last_rejected = true;
      if (h < settings.min_step) {
        std::ostringstream msg;
        msg << "step " << h << " below min_step at t = " << t_start + dir * s;
        fail(ErrorCode::StepSizeUnderflow, msg.str());
      }
    }
  }

  return DenseTrajectory(dir > 0.0 ? Direction::Forward : Direction::Backward, std::move(times), std::move(values),
                         std::move(derivs));
}

}  // namespace fastslq::ode
