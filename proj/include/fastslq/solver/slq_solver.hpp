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
#include <optional>
#include <string>
#include <vector>

#include "fastslq/lq/lq_approximation.hpp"
#include "fastslq/ocp/problem.hpp"
#include "fastslq/riccati/riccati.hpp"
#include "fastslq/solver/backward_pass.hpp"
#include "fastslq/solver/line_search.hpp"
#include "fastslq/solver/policy.hpp"
#include "fastslq/solver/rollout.hpp"
#include "fastslq/thread_pool.hpp"

namespace fastslq::solver {

struct SolverSettings {
  int max_iterations = 50;
  /// Converged once |J_k - J_{k-1}| <= convergence_tol * max(1, |J_{k-1}|).
  double convergence_tol = 1e-4;
  double rho = riccati::kDefaultStateConstraintPenalty;
  std::vector<double> line_search_alphas{1.0, 0.5, 0.25, 0.125, 0.0625};
  double line_search_gamma = 0.1;
  std::size_t num_threads = 1;
  /// Partition-parallel backward pass with warm-started final values.
  bool parallel_backward = true;
  RolloutSettings rollout;
  riccati::BackwardSettings backward;
  lq::LqSettings lq;

  void validate() const;
};

/// Wall-clock seconds per phase. Line-search rollouts count as forward.
struct PhaseTimings {
  double forward = 0.0;
  double lq_approx = 0.0;
  double backward = 0.0;

  double total() const { return forward + lq_approx + backward; }
};

enum class TerminationReason { Converged, StepRejected, MaxIterations };

struct SolveReport {
  std::vector<double> costs;      // costs[0] is the initial rollout
  std::vector<double> alphas;     // accepted step per iteration, 0 if rejected
  std::vector<PhaseTimings> timings;
  std::vector<bool> parallel_iterations;
  int iterations = 0;
  bool converged = false;
  TerminationReason reason = TerminationReason::MaxIterations;
};

std::string terminationReasonName(TerminationReason reason);

/// Outcome of one SLQ iteration starting from a nominal rollout.
struct IterationResult {
  bool accepted = false;
  bool parallel = false;
  double alpha = 0.0;
  double nominal_cost = 0.0;
  double predicted_optimum = 0.0;  // s(t0) of the new value function
  double cost = 0.0;               // cost after the step (nominal cost if rejected)
  LinearFeedbackPolicy policy;     // updated policy (input policy if rejected)
  ocp::Trajectory trajectory;      // rollout of policy
  std::vector<riccati::ValueFunction> value_functions;
  PhaseTimings timings;
};

struct SolveResult {
  LinearFeedbackPolicy policy;
  ocp::Trajectory trajectory;
  std::vector<riccati::ValueFunction> value_functions;
  SolveReport report;

  double cost() const { return report.costs.empty() ? 0.0 : report.costs.back(); }
};

// SLQ driver. Owns a thread pool of settings.num_threads threads that is
// reused by the LQ build, the backward sweep and the line search.
class SlqSolver {
 public:
  explicit SlqSolver(SolverSettings settings = {});

  const SolverSettings& settings() const noexcept { return settings_; }
  ThreadPool& pool() { return *pool_; }

  /// Iterates to convergence. The first iteration and the one after a
  /// rejected parallel step use the sequential sweep.
  SolveResult solve(const ocp::SwitchedProblem& problem, const LinearFeedbackPolicy& initial_policy);
  SolveResult solve(const ocp::SwitchedProblem& problem);

  /// One iteration around the given nominal (rolled out from policy when
  /// absent). The sweep is partition-parallel when parallel is set and
  /// previous value functions are available.
  IterationResult iterate(const ocp::SwitchedProblem& problem, const LinearFeedbackPolicy& policy,
                          const std::vector<riccati::ValueFunction>& previous, bool parallel,
                          const ocp::Trajectory* nominal = nullptr, const double* nominal_cost = nullptr);

 private:
  SolverSettings settings_;
  std::unique_ptr<ThreadPool> pool_;
};

/// Largest |g1| over every node of a trajectory (state-input equalities).
double maxStateInputViolation(const ocp::SwitchedProblem& problem, const ocp::Trajectory& trajectory);

}  // namespace fastslq::solver
