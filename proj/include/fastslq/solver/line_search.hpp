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

#include <vector>

#include "fastslq/ocp/problem.hpp"
#include "fastslq/solver/backward_pass.hpp"
#include "fastslq/solver/rollout.hpp"
#include "fastslq/thread_pool.hpp"

namespace fastslq::solver {

/// Cost predicted by the LQ model for step size alpha, given the nominal
/// cost and the model optimum s(t0): J + (2 alpha - alpha^2)(s(t0) - J).
double expectedCost(double nominal_cost, double predicted_optimum, double alpha);

struct LineSearchSettings {
  std::vector<double> alphas{1.0, 0.5, 0.25, 0.125, 0.0625};
  double gamma = 0.1;
  /// Require the rollout cost to match expectedCost within
  /// gamma * max(1, |expected|).
  bool use_expected_cost_guard = false;
};

struct LineSearchResult {
  bool accepted = false;
  double alpha = 0.0;
  double cost = 0.0;
  ocp::Trajectory trajectory;
  LinearFeedbackPolicy policy;
  std::vector<double> candidate_costs;  // +inf for divergent or unevaluated candidates
};

/// Scans the candidates from the largest down and accepts the first whose
/// rollout strictly decreases the cost (and passes the guard when enabled).
/// If none does, the smallest candidate is accepted on decrease alone.
/// Candidates are rolled out in batches of the pool size.
LineSearchResult lineSearch(const ocp::SwitchedProblem& problem, const ControllerUpdate& update,
                            double nominal_cost, double predicted_optimum, const LineSearchSettings& settings,
                            ThreadPool& pool, const RolloutSettings& rollout_settings = {});

}  // namespace fastslq::solver
