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

#include "fastslq/riccati/riccati.hpp"

#include <sstream>

namespace fastslq::riccati {

RiccatiState RiccatiState::zero(int n) {
  return {Matrix::Zero(n, n), Vector::Zero(n), Vector::Zero(n), 0.0};
}

Vector packRiccatiState(const RiccatiState& state) {
  const int n = static_cast<int>(state.S.rows());
  Vector y(packedRiccatiSize(n));
  y.head(n * n) = Eigen::Map<const Vector>(state.S.data(), n * n);
  y.segment(n * n, n) = state.sv;
  y.segment(n * n + n, n) = state.se;
  y[n * n + 2 * n] = state.s;
  return y;
}

RiccatiState unpackRiccatiState(const Vector& y, int n) {
  if (y.size() != packedRiccatiSize(n)) fail(ErrorCode::DimensionMismatch, "packed Riccati state has wrong size");
  RiccatiState out;
  out.S = Eigen::Map<const Matrix>(y.data(), n, n);
  out.sv = y.segment(n * n, n);
  out.se = y.segment(n * n + n, n);
  out.s = y[n * n + 2 * n];
  return out;
}

FeedbackTerms feedbackTerms(const ProjectedLqCoefficients& c, const RiccatiState& state) {
  FeedbackTerms out;
  out.Ltilde.noalias() = c.Rinv * (c.P.transpose() + c.B.transpose() * state.S);
  out.ltilde.noalias() = c.Rinv * (c.r + c.B.transpose() * state.sv);
  out.letilde.noalias() = c.Rinv * (c.B.transpose() * state.se);
  return out;
}

RiccatiState riccatiRhs(const ProjectedLqCoefficients& c, const RiccatiState& state) {
  const FeedbackTerms fb = feedbackTerms(c, state);
  const Matrix RL = c.Rtilde * fb.Ltilde;
  RiccatiState d;
  d.S.noalias() = -(c.Atilde.transpose() * state.S + state.S.transpose() * c.Atilde - fb.Ltilde.transpose() * RL +
                    c.Qtilde);
  symmetrize(d.S);
  d.sv.noalias() = -(c.Atilde.transpose() * state.sv - RL.transpose() * fb.ltilde + c.qtilde);
  d.se.noalias() = -(c.Atilde.transpose() * state.se - RL.transpose() * fb.letilde +
                     (c.Ctilde - fb.Ltilde).transpose() * (c.R * c.etilde));
  d.s = -(c.q - 0.5 * fb.ltilde.dot(c.Rtilde * fb.ltilde));
  if (!d.S.allFinite() || !d.sv.allFinite() || !d.se.allFinite() || !std::isfinite(d.s)) {
    std::ostringstream msg;
    msg << "Riccati derivative not finite at t = " << c.t;
    fail(ErrorCode::NonFinite, msg.str());
  }
  return d;
}

ValueFunction::ValueFunction(std::size_t mode, int state_dim, ode::DenseTrajectory riccati,
                             std::shared_ptr<const ocp::TrajectorySegment> nominal)
    : mode_(mode),
      state_dim_(state_dim),
      riccati_(std::make_shared<const ode::DenseTrajectory>(std::move(riccati))),
      nominal_(std::move(nominal)) {
  if (!nominal_ || nominal_->times.empty()) fail(ErrorCode::InvalidArgument, "value function needs a nominal");
}

double ValueFunction::startTime() const { return riccati_->spanMin(); }
double ValueFunction::endTime() const { return riccati_->spanMax(); }

RiccatiState ValueFunction::stateAt(double t) const {
  if (empty()) fail(ErrorCode::OutOfSpan, "empty value function");
  return unpackRiccatiState(riccati_->interpolate(t), state_dim_);
}

Vector ValueFunction::nominalStateAt(double t) const { return nominal_->stateAt(t); }

ValueEvaluation ValueFunction::evaluate(const Vector& x, double t) const {
  const RiccatiState st = stateAt(t);
  const Vector dx = x - nominalStateAt(t);
  ValueEvaluation out;
  const Vector Sdx = st.S * dx;
  out.quadratic_value = st.s + dx.dot(st.sv) + 0.5 * dx.dot(Sdx);
  out.constraint_value = dx.dot(st.se);
  out.value = out.quadratic_value + out.constraint_value;
  out.quadratic_gradient = st.sv + Sdx;
  out.constraint_gradient = st.se;
  out.gradient = out.quadratic_gradient + out.constraint_gradient;
  out.hessian = st.S;
  return out;
}

RiccatiState finalValues(const lq::TerminalLqNode& terminal, const ValueFunction* next_vf,
                         const Vector& x_nominal_end, double t_end,
                         const std::optional<ocp::QuadraticValue>& heuristic) {
  const int n = static_cast<int>(x_nominal_end.size());
  RiccatiState out = RiccatiState::zero(n);
  if (next_vf != nullptr) {
    const ValueEvaluation v = next_vf->evaluate(x_nominal_end, t_end);
    out.S = v.hessian;
    out.sv = v.quadratic_gradient;
    out.se = v.constraint_gradient;
    out.s = v.value;
  } else if (heuristic) {
    out.s = heuristic->evaluate(x_nominal_end);
    out.sv = heuristic->gradientAt(x_nominal_end);
    out.S = heuristic->hessian;
  }
  if (terminal.Q.size() > 0) out.S += terminal.Q;
  if (terminal.qv.size() > 0) out.sv += terminal.qv;
  out.s += terminal.q;
  symmetrize(out.S);
  return out;
}

std::vector<ProjectedLqCoefficients> projectMode(const lq::ModeLq& mode, double rho) {
  std::vector<ProjectedLqCoefficients> out;
  out.reserve(mode.nodes.size());
  for (const auto& node : mode.nodes) {
    try {
      out.push_back(projectConstraints(node, rho));
    } catch (const SolverError& e) {
      std::ostringstream msg;
      msg << e.what() << " (mode " << mode.mode << ")";
      throw SolverError(e.code(), msg.str());
    }
  }
  return out;
}

ValueFunction solvePartitionBackward(const std::vector<ProjectedLqCoefficients>& coeffs, std::size_t mode,
                                     const RiccatiState& finals,
                                     std::shared_ptr<const ocp::TrajectorySegment> nominal,
                                     const BackwardSettings& settings) {
  if (coeffs.size() < 2) fail(ErrorCode::InvalidArgument, "partition needs at least two LQ nodes");
  const int n = static_cast<int>(finals.S.rows());
  const Vector y_final = packRiccatiState(finals);
  if (!y_final.allFinite()) fail(ErrorCode::NonFinite, "Riccati final values are not finite");

  ProjectedLqCoefficients work = coeffs.front();
  const double threshold = settings.blowup_threshold;
  auto rhs = [&](double t, const Vector& y, Vector& dy) {
    interpolateProjected(coeffs, t, work);
    const RiccatiState st = unpackRiccatiState(y, n);
    if (st.S.norm() > threshold) {
      std::ostringstream msg;
      msg << "|S| exceeded " << threshold << " at t = " << t << " in mode " << mode;
      fail(ErrorCode::RiccatiBlowup, msg.str());
    }
    dy = packRiccatiState(riccatiRhs(work, st));
  };
  ode::DenseTrajectory traj;
  try {
    traj = ode::integrateAdaptive(rhs, coeffs.back().t, coeffs.front().t, y_final, settings.integrator);
  } catch (const SolverError& e) {
    // A finite escape time shows up as step collapse before |S| reaches the threshold.
    if (e.code() != ErrorCode::StepSizeUnderflow && e.code() != ErrorCode::NonFiniteRhs) throw;
    std::ostringstream msg;
    msg << "Riccati integration broke down in mode " << mode << ": " << e.what();
    fail(ErrorCode::RiccatiBlowup, msg.str());
  }
  return ValueFunction(mode, n, std::move(traj), std::move(nominal));
}

ValueFunction solvePartitionBackward(const lq::ModeLq& mode, const RiccatiState& finals,
                                     std::shared_ptr<const ocp::TrajectorySegment> nominal,
                                     const BackwardSettings& settings) {
  return solvePartitionBackward(projectMode(mode, settings.rho), mode.mode, finals, std::move(nominal), settings);
}

}  // namespace fastslq::riccati
