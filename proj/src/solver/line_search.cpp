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

#include "fastslq/solver/line_search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

namespace fastslq::solver {

namespace {

struct Candidate {
  double cost = std::numeric_limits<double>::infinity();
  ocp::Trajectory trajectory;
  LinearFeedbackPolicy policy;
};

}  // namespace

double expectedCost(double nominal_cost, double predicted_optimum, double alpha) {
  return nominal_cost + (2.0 * alpha - alpha * alpha) * (predicted_optimum - nominal_cost);
}

LineSearchResult lineSearch(const ocp::SwitchedProblem& problem, const ControllerUpdate& update,
                            double nominal_cost, double predicted_optimum, const LineSearchSettings& settings,
                            ThreadPool& pool, const RolloutSettings& rollout_settings) {
  const auto& alphas = settings.alphas;
  if (alphas.empty()) fail(ErrorCode::InvalidArgument, "line search needs at least one candidate");

  LineSearchResult out;
  out.candidate_costs.assign(alphas.size(), std::numeric_limits<double>::infinity());
  std::vector<std::optional<Candidate>> results(alphas.size());

  auto evaluate = [&](std::size_t j) {
    Candidate c;
    c.policy = update.policy(alphas[j]);
    try {
      c.trajectory = rollout(problem, c.policy, rollout_settings);
      c.cost = ocp::evaluateCost(problem, c.trajectory);
    } catch (const SolverError& e) {
      if (e.code() != ErrorCode::DivergentRollout && e.code() != ErrorCode::NonFiniteCost) throw;
      c.cost = std::numeric_limits<double>::infinity();
    }
    results[j] = std::move(c);
  };
  auto passes = [&](std::size_t j) {
    const double J = results[j]->cost;
    if (!(J < nominal_cost)) return false;
    if (!settings.use_expected_cost_guard) return true;
    const double expected = expectedCost(nominal_cost, predicted_optimum, alphas[j]);
    return std::abs(J - expected) <= settings.gamma * std::max(1.0, std::abs(expected));
  };
  auto accept = [&](std::size_t j) {
    out.accepted = true;
    out.alpha = alphas[j];
    out.cost = results[j]->cost;
    out.trajectory = std::move(results[j]->trajectory);
    out.policy = std::move(results[j]->policy);
  };

  const std::size_t batch = std::max<std::size_t>(1, pool.size());
  for (std::size_t begin = 0; begin < alphas.size(); begin += batch) {
    const std::size_t count = std::min(batch, alphas.size() - begin);
    pool.parallelFor(count, [&](std::size_t k) { evaluate(begin + k); });
    for (std::size_t j = begin; j < begin + count; ++j) out.candidate_costs[j] = results[j]->cost;
    for (std::size_t j = begin; j < begin + count; ++j) {
      if (passes(j)) {
        accept(j);
        return out;
      }
    }
  }
  const std::size_t last = alphas.size() - 1;
  if (results[last]->cost < nominal_cost) accept(last);
  return out;
}

}  // namespace fastslq::solver
