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

#include "fastslq/lq/lq_approximation.hpp"

#include <algorithm>
#include <sstream>

#include "fastslq/lq/finite_difference.hpp"

namespace fastslq::lq {

namespace {

void requireFinite(const Matrix& m, ErrorCode code, const char* what, double t) {
  if (!m.allFinite()) {
    std::ostringstream msg;
    msg << what << " not finite at t = " << t;
    fail(code, msg.str());
  }
}

double minEigenvalue(const Matrix& m) {
  if (m.rows() == 0) return 0.0;
  if (m.rows() == 1) return m(0, 0);
  Eigen::SelfAdjointEigenSolver<Matrix> eig(m, Eigen::EigenvaluesOnly);
  return eig.eigenvalues().minCoeff();
}

void shiftIfIndefinite(Matrix& m, double epsilon) {
  const double lambda = minEigenvalue(m);
  if (lambda < -epsilon) m.diagonal().array() += epsilon - lambda;
}

}  // namespace

ocp::DynamicsJacobian linearizeDynamics(const ocp::SubsystemModel& model, const Vector& x, const Vector& u, double t) {
  auto analytic = model.dynamicsJacobian(x, u, t);
  ocp::DynamicsJacobian jac = analytic ? std::move(*analytic) : finiteDifferenceDynamics(model, x, u, t);
  requireFinite(jac.A, ErrorCode::NonFiniteJacobian, "dynamics Jacobian A", t);
  requireFinite(jac.B, ErrorCode::NonFiniteJacobian, "dynamics Jacobian B", t);
  return jac;
}

ConstraintLinearization linearizeConstraints(const ocp::SubsystemModel& model, const Vector& x, const Vector& u,
                                             double t) {
  const Eigen::Index n = x.size();
  const Eigen::Index m = u.size();
  ConstraintLinearization lin;
  lin.e = model.stateInputConstraint(x, u, t);
  if (lin.e.size() > m) fail(ErrorCode::DimensionMismatch, "more state-input constraints than inputs");
  if (lin.e.size() > 0) {
    auto jac = model.stateInputConstraintJacobian(x, u, t);
    ocp::ConstraintJacobian cj = jac ? std::move(*jac) : finiteDifferenceStateInputConstraint(model, x, u, t);
    lin.C = std::move(cj.dx);
    lin.D = std::move(cj.du);
  } else {
    lin.C.resize(0, n);
    lin.D.resize(0, m);
  }
  lin.h = model.stateOnlyConstraint(x, t);
  if (lin.h.size() > 0) {
    auto jac = model.stateOnlyConstraintJacobian(x, t);
    lin.F = jac ? std::move(*jac) : finiteDifferenceStateOnlyConstraint(model, x, t);
  } else {
    lin.F.resize(0, n);
  }
  if (lin.C.rows() != lin.e.size() || lin.C.cols() != n || lin.D.rows() != lin.e.size() || lin.D.cols() != m ||
      lin.F.rows() != lin.h.size() || lin.F.cols() != n) {
    fail(ErrorCode::DimensionMismatch, "constraint Jacobian dimensions are inconsistent");
  }
  requireFinite(lin.C, ErrorCode::NonFiniteJacobian, "constraint Jacobian C", t);
  requireFinite(lin.D, ErrorCode::NonFiniteJacobian, "constraint Jacobian D", t);
  requireFinite(lin.F, ErrorCode::NonFiniteJacobian, "constraint Jacobian F", t);
  requireFinite(lin.e, ErrorCode::NonFiniteJacobian, "constraint residual e", t);
  requireFinite(lin.h, ErrorCode::NonFiniteJacobian, "constraint residual h", t);
  return lin;
}

void quadratizeCost(const ocp::StageCost& cost, const Vector& x, const Vector& u, double t, LqNode& node,
                    const LqSettings& settings) {
  auto analytic = cost.intermediateExpansion(x, u, t);
  ocp::CostExpansion ex = analytic ? std::move(*analytic) : finiteDifferenceCostExpansion(cost, x, u, t);
  if (!std::isfinite(ex.value) || !ex.dx.allFinite() || !ex.du.allFinite() || !ex.dxx.allFinite() ||
      !ex.duu.allFinite() || !ex.dxu.allFinite()) {
    std::ostringstream msg;
    msg << "cost derivatives not finite at t = " << t;
    fail(ErrorCode::NonFiniteDerivative, msg.str());
  }
  node.q = ex.value;
  node.qv = std::move(ex.dx);
  node.r = std::move(ex.du);
  node.Q = std::move(ex.dxx);
  node.R = std::move(ex.duu);
  node.P = settings.drop_cross_term ? Matrix::Zero(x.size(), u.size()) : std::move(ex.dxu);
  symmetrize(node.Q);
  symmetrize(node.R);

  const double r_min = minEigenvalue(node.R);
  if (r_min < settings.input_hessian_floor) node.R.diagonal().array() += settings.input_hessian_floor - r_min;
  shiftIfIndefinite(node.Q, settings.hessian_epsilon);
  if (!node.P.isZero(0.0)) {
    const Eigen::Index n = node.Q.rows();
    const Eigen::Index m = node.R.rows();
    Matrix full(n + m, n + m);
    full << node.Q, node.P, node.P.transpose(), node.R;
    const double lambda = minEigenvalue(full);
    if (lambda < -settings.hessian_epsilon) node.Q.diagonal().array() += settings.hessian_epsilon - lambda;
  }
}

TerminalLqNode quadratizeTerminalCost(const ocp::StageCost& cost, const Vector& x, const LqSettings& settings) {
  auto analytic = cost.terminalExpansion(x);
  ocp::TerminalCostExpansion ex = analytic ? std::move(*analytic) : finiteDifferenceTerminalExpansion(cost, x);
  if (!std::isfinite(ex.value) || !ex.dx.allFinite() || !ex.dxx.allFinite()) {
    fail(ErrorCode::NonFiniteDerivative, "terminal cost derivatives not finite");
  }
  TerminalLqNode node{ex.value, std::move(ex.dx), std::move(ex.dxx)};
  symmetrize(node.Q);
  shiftIfIndefinite(node.Q, settings.hessian_epsilon);
  return node;
}

LqNode approximateNode(const ocp::SubsystemModel& model, const ocp::StageCost& cost, const Vector& x, const Vector& u,
                       double t, const LqSettings& settings) {
  LqNode node;
  node.t = t;
  auto dyn = linearizeDynamics(model, x, u, t);
  node.A = std::move(dyn.A);
  node.B = std::move(dyn.B);
  auto con = linearizeConstraints(model, x, u, t);
  node.C = std::move(con.C);
  node.D = std::move(con.D);
  node.e = std::move(con.e);
  node.F = std::move(con.F);
  node.h = std::move(con.h);
  quadratizeCost(cost, x, u, t, node, settings);
  return node;
}

LqApproximation buildLqApproximation(const ocp::SwitchedProblem& problem, const ocp::Trajectory& trajectory,
                                     ThreadPool& pool, const LqSettings& settings) {
  LqApproximation approx;
  approx.modes.resize(trajectory.segments.size());
  std::vector<std::pair<std::size_t, std::size_t>> work;
  for (std::size_t s = 0; s < trajectory.segments.size(); ++s) {
    const auto& seg = trajectory.segments[s];
    if (seg.size() < 2) fail(ErrorCode::InvalidArgument, "trajectory segment needs at least two nodes");
    approx.modes[s].mode = seg.mode;
    approx.modes[s].nodes.resize(seg.size());
    for (std::size_t k = 0; k < seg.size(); ++k) work.emplace_back(s, k);
    work.emplace_back(s, seg.size());  // terminal node marker
  }

  pool.parallelFor(work.size(), [&](std::size_t idx) {
    const auto [s, k] = work[idx];
    const auto& seg = trajectory.segments[s];
    const auto& sub = problem.subsystem(seg.mode);
    const auto& cost = problem.cost(seg.mode);
    try {
      if (k == seg.size()) {
        approx.modes[s].terminal = quadratizeTerminalCost(cost, seg.states.back(), settings);
      } else {
        approx.modes[s].nodes[k] = approximateNode(sub, cost, seg.states[k], seg.inputs[k], seg.times[k], settings);
      }
    } catch (const SolverError& err) {
      std::ostringstream msg;
      msg << err.what() << " (mode " << seg.mode << ", t = " << (k < seg.size() ? seg.times[k] : seg.endTime()) << ")";
      throw SolverError(err.code(), msg.str());
    }
  });
  return approx;
}

LqApproximation buildLqApproximation(const ocp::SwitchedProblem& problem, const ocp::Trajectory& trajectory,
                                     std::size_t num_threads, const LqSettings& settings) {
  ThreadPool pool(num_threads);
  return buildLqApproximation(problem, trajectory, pool, settings);
}

LqNode interpolateLq(const ModeLq& mode, double t) {
  const auto& nodes = mode.nodes;
  if (nodes.empty()) fail(ErrorCode::OutOfSpan, "mode has no LQ nodes");
  constexpr double eps = 1e-9;
  if (t < nodes.front().t - eps || t > nodes.back().t + eps) {
    std::ostringstream msg;
    msg << "t = " << t << " outside LQ span [" << nodes.front().t << ", " << nodes.back().t << "]";
    fail(ErrorCode::OutOfSpan, msg.str());
  }
  if (nodes.size() == 1) return nodes.front();
  t = std::clamp(t, nodes.front().t, nodes.back().t);
  auto it = std::upper_bound(nodes.begin(), nodes.end(), t, [](double v, const LqNode& n) { return v < n.t; });
  std::size_t k = it == nodes.begin() ? 0 : static_cast<std::size_t>(it - nodes.begin()) - 1;
  k = std::min(k, nodes.size() - 2);
  const LqNode& a = nodes[k];
  const LqNode& b = nodes[k + 1];
  if (t == a.t) return a;
  if (t == b.t) return b;
  const double s = (t - a.t) / (b.t - a.t);
  const double w = 1.0 - s;
  LqNode out;
  out.t = t;
  out.A = w * a.A + s * b.A;
  out.B = w * a.B + s * b.B;
  out.C = w * a.C + s * b.C;
  out.D = w * a.D + s * b.D;
  out.e = w * a.e + s * b.e;
  out.F = w * a.F + s * b.F;
  out.h = w * a.h + s * b.h;
  out.q = w * a.q + s * b.q;
  out.qv = w * a.qv + s * b.qv;
  out.r = w * a.r + s * b.r;
  out.P = w * a.P + s * b.P;
  out.Q = w * a.Q + s * b.Q;
  out.R = w * a.R + s * b.R;
  return out;
}

}  // namespace fastslq::lq
