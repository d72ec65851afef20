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

#include "fastslq/solver/backward_pass.hpp"

#include <sstream>

namespace fastslq::solver {

BackwardPassResult backwardPass(const ocp::SwitchedProblem& problem, const lq::LqApproximation& lq,
                                const ocp::Trajectory& nominal,
                                const std::vector<riccati::ValueFunction>& previous, bool parallel,
                                ThreadPool& pool, const riccati::BackwardSettings& settings) {
  const std::size_t I = problem.numModes();
  if (lq.modes.size() != I || nominal.segments.size() != I) {
    fail(ErrorCode::DimensionMismatch, "backward pass: LQ model and nominal must cover every mode");
  }
  auto has_previous = [&](std::size_t i) { return i < previous.size() && !previous[i].empty(); };

  // Chain roots: the last partition and, in parallel mode, every partition
  // whose successor has a previous value function.
  std::vector<std::size_t> roots;
  for (std::size_t i = I; i-- > 0;) {
    if (i == I - 1 || (parallel && has_previous(i + 1))) roots.push_back(i);
  }

  BackwardPassResult out;
  out.value_functions.resize(I);
  out.projected.resize(I);
  out.warm_started_partitions = roots.size() - 1;

  std::vector<std::shared_ptr<const ocp::TrajectorySegment>> segments(I);
  for (std::size_t i = 0; i < I; ++i) segments[i] = std::make_shared<const ocp::TrajectorySegment>(nominal.segments[i]);

  auto solve_chain = [&](std::size_t r) {
    const std::size_t top = roots[r];
    const std::size_t bottom = r + 1 < roots.size() ? roots[r + 1] + 1 : 0;
    for (std::size_t i = top + 1; i-- > bottom;) {
      try {
        const auto& seg = *segments[i];
        const riccati::ValueFunction* next = nullptr;
        if (i + 1 < I) next = i == top ? &previous[i + 1] : &out.value_functions[i + 1];
        const riccati::RiccatiState finals = riccati::finalValues(lq.modes[i].terminal, next, seg.states.back(),
                                                                  seg.endTime(), problem.terminalHeuristic());
        out.projected[i] = riccati::projectMode(lq.modes[i], settings.rho);
        out.value_functions[i] =
            riccati::solvePartitionBackward(out.projected[i], i, finals, segments[i], settings);
      } catch (const SolverError& e) {
        std::ostringstream msg;
        msg << e.what() << " (partition " << i << ")";
        throw SolverError(e.code(), msg.str());
      }
    }
  };
  pool.parallelFor(roots.size(), solve_chain);
  return out;
}

ControllerUpdate updateController(const BackwardPassResult& backward, const ocp::Trajectory& nominal) {
  ControllerUpdate out;
  out.segments.reserve(nominal.segments.size());
  for (std::size_t i = 0; i < nominal.segments.size(); ++i) {
    const auto& seg = nominal.segments[i];
    const auto& coeffs = backward.projected.at(i);
    const auto& vf = backward.value_functions.at(i);
    if (coeffs.size() != seg.size()) fail(ErrorCode::DimensionMismatch, "controller update: node count mismatch");
    ControllerSegment cs;
    cs.mode = seg.mode;
    cs.times = seg.times;
    const std::size_t N = seg.size();
    cs.gains.reserve(N);
    cs.base.reserve(N);
    cs.ff_step.reserve(N);
    cs.constraint_step.reserve(N);
    for (std::size_t k = 0; k < N; ++k) {
      const auto& c = coeffs[k];
      const riccati::FeedbackTerms fb = riccati::feedbackTerms(c, vf.stateAt(seg.times[k]));
      Matrix L = -c.nullProjector * fb.Ltilde - c.Ctilde;
      cs.base.push_back(seg.inputs[k] - L * seg.states[k]);
      cs.ff_step.push_back(-c.nullProjector * fb.ltilde);
      cs.constraint_step.push_back(-c.nullProjector * fb.letilde - c.etilde);
      cs.gains.push_back(std::move(L));
    }
    out.segments.push_back(std::move(cs));
  }
  return out;
}

LinearFeedbackPolicy ControllerUpdate::policy(double alpha) const {
  std::vector<PolicySegment> segs;
  segs.reserve(segments.size());
  for (const auto& cs : segments) {
    PolicySegment ps;
    ps.mode = cs.mode;
    ps.times = cs.times;
    ps.gains = cs.gains;
    ps.feedforward.reserve(cs.times.size());
    for (std::size_t k = 0; k < cs.times.size(); ++k) {
      ps.feedforward.push_back(cs.base[k] + alpha * cs.ff_step[k] + cs.constraint_step[k]);
    }
    segs.push_back(std::move(ps));
  }
  return LinearFeedbackPolicy(std::move(segs));
}

LinearFeedbackPolicy updateController(const BackwardPassResult& backward, const ocp::Trajectory& nominal,
                                      double alpha) {
  return updateController(backward, nominal).policy(alpha);
}

}  // namespace fastslq::solver
