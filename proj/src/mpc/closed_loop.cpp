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

#include "fastslq/mpc/closed_loop.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <utility>

#include "fastslq/common.hpp"

namespace fastslq::mpc {

std::vector<Disturbance> parseDisturbances(const std::string& text) {
  std::vector<Disturbance> out;
  std::stringstream items(text);
  std::string item;
  while (std::getline(items, item, ',')) {
    if (item.empty()) continue;
    Disturbance d;
    char c1 = 0, c2 = 0;
    std::stringstream fields(item);
    if (!(fields >> d.time >> c1 >> d.state_index >> c2 >> d.delta) || c1 != ':' || c2 != ':') {
      fail(ErrorCode::ConfigError, "malformed disturbance '" + item + "', expected time:index:delta");
    }
    out.push_back(d);
  }
  std::sort(out.begin(), out.end(), [](const Disturbance& a, const Disturbance& b) { return a.time < b.time; });
  return out;
}

void ClosedLoopSettings::validate() const {
  if (!(duration > 0.0)) fail(ErrorCode::InvalidArgument, "closed-loop duration must be positive");
  if (!(mpc_rate >= 0.0)) fail(ErrorCode::InvalidArgument, "MPC rate must be non-negative");
  if (!(control_dt > 0.0)) fail(ErrorCode::InvalidArgument, "control period must be positive");
  plant_integrator.validate();
}

double ClosedLoopLog::meanLatency() const {
  if (steps.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& s : steps) sum += s.latency;
  return sum / static_cast<double>(steps.size());
}

double ClosedLoopLog::achievableRate() const {
  const double mean = meanLatency();
  return mean > 0.0 ? 1.0 / mean : 0.0;
}

namespace {

// Plant over [t0, t1], split at the switching times of the timeline.
Vector simulatePlant(const MpcController& controller, const Vector& x0, double t0, double t1,
                     const ClosedLoopSettings& settings) {
  Vector x = x0;
  double t = t0;
  while (t < t1 - 1e-12) {
    const std::size_t idx = controller.modeIndexAt(t);
    const auto& mode = controller.timeline()[idx];
    const double end = std::min(t1, mode.end);
    auto rhs = [&](double tau, const Vector& y, Vector& dy) {
      // Evaluate the policy of this mode even at its end point.
      const double tc = std::min(tau, std::nextafter(mode.end, mode.start));
      const Vector u = controller.control(y, std::max(tc, mode.start));
      dy = mode.subsystem->dynamics(y, u, tau);
    };
    const ode::DenseTrajectory traj = ode::integrateAdaptive(rhs, t, end, x, settings.plant_integrator);
    x = traj.values().back();
    t = end;
  }
  return x;
}

}  // namespace

ClosedLoopSimulator::ClosedLoopSimulator(MpcController& controller, ClosedLoopSettings settings)
    : controller_(controller), settings_(std::move(settings)) {
  settings_.validate();
  x_ = controller_.startState();
  next_replan_ = controller_.startTime();
  period_ = settings_.mpc_rate > 0.0 ? 1.0 / settings_.mpc_rate : 0.0;
  num_periods_ = std::lround(settings_.duration / settings_.control_dt);
}

bool ClosedLoopSimulator::advance() {
  if (finished_) return false;
  try {
    const double t = controller_.startTime() + static_cast<double>(k_) * settings_.control_dt;
    const auto& disturbances = settings_.disturbances;
    while (next_disturbance_ < disturbances.size() && disturbances[next_disturbance_].time <= t + 1e-12) {
      const auto& d = disturbances[next_disturbance_++];
      if (d.state_index < 0 || d.state_index >= x_.size()) {
        fail(ErrorCode::ConfigError, "disturbance state index out of range");
      }
      x_[d.state_index] += d.delta;
    }
    double latency_ms = 0.0;
    if (period_ > 0.0 && t >= next_replan_ - 1e-9) {
      const MpcStepStats stats = controller_.step(t, x_);
      log_.steps.push_back(stats);
      latency_ms = 1e3 * stats.latency;
      while (next_replan_ <= t + 1e-9) next_replan_ += period_;
    } else {
      controller_.extendHorizon(t);
    }
    log_.times.push_back(t);
    log_.states.push_back(x_);
    log_.inputs.push_back(controller_.control(x_, t));
    log_.plan_ids.push_back(controller_.planId());
    log_.latencies_ms.push_back(latency_ms);
    if (k_ >= num_periods_) {
      finished_ = true;
      return false;
    }
    x_ = simulatePlant(controller_, x_, t, t + settings_.control_dt, settings_);
    if (!x_.allFinite() || x_.norm() > settings_.divergence_threshold) {
      fail(ErrorCode::DivergentRollout, "plant state diverged");
    }
    ++k_;
  } catch (const SolverError& e) {
    log_.diverged = true;
    log_.error = e.what();
    finished_ = true;
    return false;
  }
  return true;
}

bool ClosedLoopSimulator::advanceToNextStep() {
  const std::size_t before = log_.steps.size();
  while (log_.steps.size() == before) {
    if (!advance()) return log_.steps.size() > before;
  }
  return true;
}

ClosedLoopLog runClosedLoop(MpcController& controller, const ClosedLoopSettings& settings) {
  ClosedLoopSimulator sim(controller, settings);
  while (sim.advance()) {
  }
  return sim.takeLog();
}

void writeClosedLoopCsv(const ClosedLoopLog& log, std::ostream& out) {
  out << "# fastslq-csv v1\n";
  const Eigen::Index n = log.states.empty() ? 0 : log.states.front().size();
  const Eigen::Index m = log.inputs.empty() ? 0 : log.inputs.front().size();
  out << "time";
  for (Eigen::Index i = 0; i < n; ++i) out << ",x" << i;
  for (Eigen::Index i = 0; i < m; ++i) out << ",u" << i;
  out << ",plan_id,latency_ms\n";
  out << std::setprecision(10);
  for (std::size_t k = 0; k < log.times.size(); ++k) {
    out << log.times[k];
    for (Eigen::Index i = 0; i < n; ++i) out << ',' << log.states[k][i];
    for (Eigen::Index i = 0; i < m; ++i) out << ',' << log.inputs[k][i];
    out << ',' << log.plan_ids[k] << ',' << log.latencies_ms[k] << '\n';
  }
}

}  // namespace fastslq::mpc
