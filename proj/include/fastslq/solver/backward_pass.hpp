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

#include <cstddef>
#include <memory>
#include <vector>

#include "fastslq/lq/lq_approximation.hpp"
#include "fastslq/ocp/problem.hpp"
#include "fastslq/riccati/riccati.hpp"
#include "fastslq/solver/policy.hpp"
#include "fastslq/thread_pool.hpp"

namespace fastslq::solver {

struct BackwardPassResult {
  std::vector<riccati::ValueFunction> value_functions;  // one per mode
  // Projected coefficients at the nominal nodes of each mode.
  std::vector<std::vector<riccati::ProjectedLqCoefficients>> projected;
  // Number of partitions whose final values came from a previous iteration.
  std::size_t warm_started_partitions = 0;
};

/// Riccati sweep over all partitions (one per mode). A partition takes its
/// final values from the successor computed in this sweep, unless parallel
/// is set and previous[i + 1] holds a value function from an earlier
/// iteration; then partitions are grouped into independent chains solved
/// concurrently. previous may be empty or contain empty value functions.
BackwardPassResult backwardPass(const ocp::SwitchedProblem& problem, const lq::LqApproximation& lq,
                                const ocp::Trajectory& nominal,
                                const std::vector<riccati::ValueFunction>& previous, bool parallel,
                                ThreadPool& pool, const riccati::BackwardSettings& settings = {});

/// Controller terms at the nominal nodes of one mode:
///   L   = -(I - D~) L~ - C~
///   l   = -(I - D~) l~
///   l_e = -(I - D~) l~_e - e~
///   u_ff(alpha) = u_nom + alpha l + l_e - L x_nom
struct ControllerSegment {
  std::size_t mode = 0;
  std::vector<double> times;
  std::vector<Matrix> gains;
  std::vector<Vector> base;  // u_nom - L x_nom
  std::vector<Vector> ff_step;
  std::vector<Vector> constraint_step;
};

struct ControllerUpdate {
  std::vector<ControllerSegment> segments;

  LinearFeedbackPolicy policy(double alpha) const;
};

ControllerUpdate updateController(const BackwardPassResult& backward, const ocp::Trajectory& nominal);

/// Policy for step size alpha; shorthand for updateController(...).policy(alpha).
LinearFeedbackPolicy updateController(const BackwardPassResult& backward, const ocp::Trajectory& nominal,
                                      double alpha);

}  // namespace fastslq::solver
