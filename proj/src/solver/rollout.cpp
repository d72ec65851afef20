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

#include "fastslq/solver/rollout.hpp"

#include <sstream>

#include "fastslq/lq/finite_difference.hpp"

namespace fastslq::solver {

Vector projectInput(const Vector& u, const Vector& x, double t, const ocp::SubsystemModel& model, int max_passes) {
  Vector out = u;
  Vector h = model.inequalityConstraint(x, out, t);
  if (h.size() == 0 || (h.array() >= 0.0).all()) return out;
  for (int pass = 0; pass < max_passes; ++pass) {
    bool violated = false;
    for (Eigen::Index j = 0; j < h.size(); ++j) {
      if (h[j] >= 0.0) continue;
      violated = true;
      auto jac = model.inequalityConstraintJacobian(x, out, t);
      const ocp::ConstraintJacobian J = jac ? *jac : lq::finiteDifferenceInequality(model, x, out, t);
      const Vector g = J.du.row(j).transpose();
      const double g2 = g.squaredNorm();
      if (g2 > 0.0) out -= (h[j] / g2) * g;
      h = model.inequalityConstraint(x, out, t);
    }
    if (!violated) break;
  }
  return out;
}

Vector projectEqualityInput(const Vector& u, const Vector& x, double t, const ocp::SubsystemModel& model) {
  const Vector g = model.stateInputConstraint(x, u, t);
  if (g.size() == 0) return u;
  auto jac = model.stateInputConstraintJacobian(x, u, t);
  const Matrix D = jac ? jac->du : lq::finiteDifferenceStateInputConstraint(model, x, u, t).du;
  const Matrix DDt = D * D.transpose();
  Eigen::LDLT<Matrix> ldlt(DDt);
  return u - D.transpose() * ldlt.solve(g);
}

Vector appliedInput(const ocp::SwitchedProblem& problem, const LinearFeedbackPolicy& policy, std::size_t mode,
                    const Vector& x, double t, const RolloutSettings& settings) {
  const ocp::SubsystemModel& model = problem.subsystem(mode);
  Vector u = policy.evaluate(mode, x, t);
  if (settings.project_equality) u = projectEqualityInput(u, x, t, model);
  return projectInput(u, x, t, model, settings.max_projection_passes);
}

ocp::TrajectorySegment rolloutMode(const ocp::SwitchedProblem& problem, const LinearFeedbackPolicy& policy,
                                   std::size_t mode, const Vector& x_start, const RolloutSettings& settings) {
  const int n = problem.stateDim();
  const ocp::SubsystemModel& model = problem.subsystem(mode);
  const ocp::StageCost& cost = problem.cost(mode);
  const double t0 = problem.schedule().modeStart(mode);
  const double t1 = problem.schedule().modeEnd(mode);

  auto rhs = [&](double t, const Vector& y, Vector& dy) {
    const Vector x = y.head(n);
    if (!x.allFinite() || x.norm() > settings.divergence_threshold) {
      std::ostringstream msg;
      msg << "state norm exceeded " << settings.divergence_threshold << " at t = " << t;
      fail(ErrorCode::DivergentRollout, msg.str());
    }
    const Vector u = appliedInput(problem, policy, mode, x, t, settings);
    dy.head(n) = model.dynamics(x, u, t);
    dy[n] = cost.intermediate(x, u, t);
  };

  Vector y0(n + 1);
  y0.head(n) = x_start;
  y0[n] = 0.0;
  ode::DenseTrajectory dense;
  try {
    dense = ode::integrateAdaptive(rhs, t0, t1, y0, settings.integrator);
  } catch (const SolverError& e) {
    if (e.code() == ErrorCode::DivergentRollout) throw;
    std::ostringstream msg;
    msg << "rollout of mode " << mode << " failed: " << e.what();
    fail(ErrorCode::DivergentRollout, msg.str());
  }

  ocp::TrajectorySegment seg;
  seg.mode = mode;
  seg.times = dense.times();
  const std::size_t N = seg.times.size();
  seg.states.reserve(N);
  seg.inputs.reserve(N);
  seg.state_derivatives.reserve(N);
  seg.running_cost.reserve(N);
  for (std::size_t k = 0; k < N; ++k) {
    const Vector& y = dense.values()[k];
    seg.states.push_back(y.head(n));
    seg.inputs.push_back(appliedInput(problem, policy, mode, seg.states.back(), seg.times[k], settings));
    seg.state_derivatives.push_back(dense.derivatives()[k].head(n));
    seg.running_cost.push_back(y[n]);
  }
  // Bitwise continuity across switches.
  seg.states.front() = x_start;
  return seg;
}

ocp::Trajectory rollout(const ocp::SwitchedProblem& problem, const LinearFeedbackPolicy& policy,
                        const RolloutSettings& settings) {
  if (policy.numSegments() < problem.numModes()) {
    fail(ErrorCode::OutOfHorizon, "policy does not cover every mode of the problem");
  }
  ocp::Trajectory traj;
  traj.segments.reserve(problem.numModes());
  Vector x = problem.initialState();
  for (std::size_t i = 0; i < problem.numModes(); ++i) {
    traj.segments.push_back(rolloutMode(problem, policy, i, x, settings));
    x = traj.segments.back().states.back();
  }
  return traj;
}

}  // namespace fastslq::solver
