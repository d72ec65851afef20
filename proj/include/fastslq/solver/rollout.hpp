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

#pragma once

#include "fastslq/ocp/problem.hpp"
#include "fastslq/ode/integrator.hpp"
#include "fastslq/solver/policy.hpp"

namespace fastslq::solver {

struct RolloutSettings {
  ode::IntegratorSettings integrator{1e-8, 1e-8, 0.02};
  /// Rollouts abort with DivergentRollout once |x| exceeds this.
  double divergence_threshold = 1e9;
  /// Remove the residual of the state-input equalities from every input by
  /// a minimum-norm correction before the inequality projection.
  bool project_equality = true;
  int max_projection_passes = 5;
};

/// Projection onto the linearized inequality planes: for every violated
/// h_j(x, u, t) < 0, u moves to {u' : h_j + grad_u h_j'(u' - u) = 0}. Up to
/// max_passes sweeps; returns the last iterate even if some h_j stay negative.
Vector projectInput(const Vector& u, const Vector& x, double t, const ocp::SubsystemModel& model,
                    int max_passes = 5);

/// u - D'(DD')^-1 g1(x, u, t) with D = dg1/du. Exact for constraints affine in u.
Vector projectEqualityInput(const Vector& u, const Vector& x, double t, const ocp::SubsystemModel& model);

/// Input actually applied by a rollout: policy, then the projections.
Vector appliedInput(const ocp::SwitchedProblem& problem, const LinearFeedbackPolicy& policy, std::size_t mode,
                    const Vector& x, double t, const RolloutSettings& settings);

/// Integrates the closed loop mode by mode from the problem's initial state.
/// Running cost is integrated alongside the state.
ocp::Trajectory rollout(const ocp::SwitchedProblem& problem, const LinearFeedbackPolicy& policy,
                        const RolloutSettings& settings = {});

/// Single mode from x_start over the mode interval.
ocp::TrajectorySegment rolloutMode(const ocp::SwitchedProblem& problem, const LinearFeedbackPolicy& policy,
                                   std::size_t mode, const Vector& x_start, const RolloutSettings& settings = {});

}  // namespace fastslq::solver
