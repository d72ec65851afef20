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

#include "fastslq/solver/slq_solver.hpp"

#include <chrono>
#include <cmath>

namespace fastslq::solver {

namespace {

using Clock = std::chrono::steady_clock;

double secondsSince(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

}  // namespace

void SolverSettings::validate() const {
  if (max_iterations < 1) fail(ErrorCode::InvalidArgument, "max_iterations must be at least 1");
  if (!(convergence_tol > 0.0)) fail(ErrorCode::InvalidArgument, "convergence_tol must be positive");
  if (!(rho >= 0.0)) fail(ErrorCode::InvalidArgument, "rho must be non-negative");
  if (line_search_alphas.empty()) fail(ErrorCode::InvalidArgument, "line search needs candidates");
  for (std::size_t j = 0; j < line_search_alphas.size(); ++j) {
    const double a = line_search_alphas[j];
    if (!(a > 0.0 && a <= 1.0)) fail(ErrorCode::InvalidArgument, "line search step sizes must lie in (0, 1]");
    if (j > 0 && !(a < line_search_alphas[j - 1])) {
      fail(ErrorCode::InvalidArgument, "line search step sizes must be descending");
    }
  }
  if (!(line_search_gamma > 0.0)) fail(ErrorCode::InvalidArgument, "line search gamma must be positive");
  if (num_threads < 1) fail(ErrorCode::InvalidArgument, "num_threads must be at least 1");
  rollout.integrator.validate();
  backward.integrator.validate();
}

std::string terminationReasonName(TerminationReason reason) {
  switch (reason) {
    case TerminationReason::Converged:
      return "converged";
    case TerminationReason::StepRejected:
      return "step_rejected";
    case TerminationReason::MaxIterations:
      return "max_iterations";
  }
  return "unknown";
}

SlqSolver::SlqSolver(SolverSettings settings) : settings_(std::move(settings)) {
  settings_.validate();
  settings_.backward.rho = settings_.rho;
  pool_ = std::make_unique<ThreadPool>(settings_.num_threads);
}

IterationResult SlqSolver::iterate(const ocp::SwitchedProblem& problem, const LinearFeedbackPolicy& policy,
                                   const std::vector<riccati::ValueFunction>& previous, bool parallel,
                                   const ocp::Trajectory* nominal, const double* nominal_cost) {
  IterationResult out;
  ocp::Trajectory rolled;
  auto start = Clock::now();
  if (nominal == nullptr) {
    rolled = rollout(problem, policy, settings_.rollout);
    nominal = &rolled;
  }
  out.nominal_cost = nominal_cost != nullptr ? *nominal_cost : ocp::evaluateCost(problem, *nominal);
  out.timings.forward += secondsSince(start);

  start = Clock::now();
  const lq::LqApproximation lq = lq::buildLqApproximation(problem, *nominal, *pool_, settings_.lq);
  out.timings.lq_approx += secondsSince(start);

  start = Clock::now();
  bool have_previous = false;
  for (std::size_t i = 1; i < previous.size(); ++i) have_previous = have_previous || !previous[i].empty();
  out.parallel = parallel && have_previous && problem.numModes() > 1;
  BackwardPassResult backward =
      backwardPass(problem, lq, *nominal, previous, out.parallel, *pool_, settings_.backward);
  const ControllerUpdate update = updateController(backward, *nominal);
  out.predicted_optimum = backward.value_functions.front().stateAt(problem.schedule().startTime()).s;
  out.timings.backward += secondsSince(start);

  start = Clock::now();
  LineSearchSettings ls;
  ls.alphas = settings_.line_search_alphas;
  ls.gamma = settings_.line_search_gamma;
  ls.use_expected_cost_guard = out.parallel;
  LineSearchResult result =
      lineSearch(problem, update, out.nominal_cost, out.predicted_optimum, ls, *pool_, settings_.rollout);
  out.timings.forward += secondsSince(start);

  out.value_functions = std::move(backward.value_functions);
  out.accepted = result.accepted;
  if (result.accepted) {
    out.alpha = result.alpha;
    out.cost = result.cost;
    out.policy = std::move(result.policy);
    out.trajectory = std::move(result.trajectory);
  } else {
    out.cost = out.nominal_cost;
    out.policy = policy;
    out.trajectory = *nominal;
  }
  return out;
}

SolveResult SlqSolver::solve(const ocp::SwitchedProblem& problem) {
  return solve(problem, LinearFeedbackPolicy::zero(problem.schedule(), problem.stateDim(), problem.inputDim()));
}

SolveResult SlqSolver::solve(const ocp::SwitchedProblem& problem, const LinearFeedbackPolicy& initial_policy) {
  SolveResult out;
  SolveReport& report = out.report;

  auto start = Clock::now();
  out.policy = initial_policy;
  out.trajectory = rollout(problem, out.policy, settings_.rollout);
  double cost = ocp::evaluateCost(problem, out.trajectory);
  const double initial_forward = secondsSince(start);
  report.costs.push_back(cost);

  bool force_sequential = true;
  for (int it = 1; it <= settings_.max_iterations; ++it) {
    const bool parallel = settings_.parallel_backward && !force_sequential;
    IterationResult step = iterate(problem, out.policy, out.value_functions, parallel, &out.trajectory, &cost);
    if (it == 1) step.timings.forward += initial_forward;
    report.iterations = it;
    report.timings.push_back(step.timings);
    report.parallel_iterations.push_back(step.parallel);
    out.value_functions = std::move(step.value_functions);

    if (!step.accepted) {
      report.alphas.push_back(0.0);
      report.costs.push_back(cost);
      const double predicted_gain = cost - step.predicted_optimum;
      if (predicted_gain <= settings_.convergence_tol * std::max(1.0, std::abs(cost))) {
        report.converged = true;
        report.reason = TerminationReason::Converged;
        return out;
      }
      if (step.parallel) {
        force_sequential = true;
        continue;
      }
      report.reason = TerminationReason::StepRejected;
      return out;
    }

    force_sequential = false;
    const double change = std::abs(cost - step.cost);
    const double scale = std::max(1.0, std::abs(cost));
    cost = step.cost;
    out.policy = std::move(step.policy);
    out.trajectory = std::move(step.trajectory);
    report.alphas.push_back(step.alpha);
    report.costs.push_back(cost);
    if (change <= settings_.convergence_tol * scale) {
      report.converged = true;
      report.reason = TerminationReason::Converged;
      return out;
    }
  }
  report.reason = TerminationReason::MaxIterations;
  return out;
}

double maxStateInputViolation(const ocp::SwitchedProblem& problem, const ocp::Trajectory& trajectory) {
  double worst = 0.0;
  for (const auto& seg : trajectory.segments) {
    const auto& model = problem.subsystem(seg.mode);
    for (std::size_t k = 0; k < seg.size(); ++k) {
      const Vector g = model.stateInputConstraint(seg.states[k], seg.inputs[k], seg.times[k]);
      if (g.size() > 0) worst = std::max(worst, g.cwiseAbs().maxCoeff());
    }
  }
  return worst;
}

}  // namespace fastslq::solver
