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

#include "fastslq/ocp/problem.hpp"

#include <cmath>
#include <sstream>

namespace fastslq::ocp {

double QuadraticValue::evaluate(const Vector& x) const {
  const Vector dx = x - x_ref;
  double v = value + 0.5 * dx.dot(hessian * dx);
  if (gradient.size() > 0) v += gradient.dot(dx);
  return v;
}

Vector QuadraticValue::gradientAt(const Vector& x) const {
  Vector g = hessian * (x - x_ref);
  if (gradient.size() > 0) g += gradient;
  return g;
}

SwitchedProblem::SwitchedProblem(ModeSchedule schedule, std::vector<SubsystemPtr> subsystems,
                                 std::vector<StageCostPtr> costs, Vector x0,
                                 std::optional<QuadraticValue> terminal_heuristic)
    : schedule_(std::move(schedule)),
      subsystems_(std::move(subsystems)),
      costs_(std::move(costs)),
      x0_(std::move(x0)),
      heuristic_(std::move(terminal_heuristic)) {
  if (subsystems_.empty()) fail(ErrorCode::InvalidArgument, "problem has no subsystems");
  if (costs_.size() != subsystems_.size()) {
    fail(ErrorCode::DimensionMismatch, "problem needs one cost per subsystem");
  }
  for (std::size_t i = 0; i < subsystems_.size(); ++i) {
    if (!subsystems_[i] || !costs_[i]) fail(ErrorCode::InvalidArgument, "null subsystem or cost");
  }
  state_dim_ = subsystems_.front()->stateDim();
  input_dim_ = subsystems_.front()->inputDim();
  for (const auto& s : subsystems_) {
    if (s->stateDim() != state_dim_ || s->inputDim() != input_dim_) {
      fail(ErrorCode::DimensionMismatch, "subsystems disagree on state or input dimension");
    }
  }
  for (int id : schedule_.subsystemIds()) {
    if (static_cast<std::size_t>(id) >= subsystems_.size()) {
      fail(ErrorCode::InvalidArgument, "schedule references unknown subsystem id " + std::to_string(id));
    }
  }
  if (x0_.size() != state_dim_) fail(ErrorCode::DimensionMismatch, "initial state has wrong dimension");
  if (heuristic_ && (heuristic_->x_ref.size() != state_dim_ || heuristic_->hessian.rows() != state_dim_ ||
                     heuristic_->hessian.cols() != state_dim_)) {
    fail(ErrorCode::DimensionMismatch, "terminal heuristic has wrong dimension");
  }
}

const SubsystemModel& SwitchedProblem::subsystem(std::size_t mode) const {
  return *subsystems_[static_cast<std::size_t>(schedule_.subsystemId(mode))];
}

const StageCost& SwitchedProblem::cost(std::size_t mode) const {
  return *costs_[static_cast<std::size_t>(schedule_.subsystemId(mode))];
}

SwitchedProblem SwitchedProblem::withInitialState(Vector x0) const {
  SwitchedProblem copy = *this;
  if (x0.size() != state_dim_) fail(ErrorCode::DimensionMismatch, "initial state has wrong dimension");
  copy.x0_ = std::move(x0);
  return copy;
}

SwitchedProblem SwitchedProblem::withTerminalHeuristic(std::optional<QuadraticValue> heuristic) const {
  return SwitchedProblem(schedule_, subsystems_, costs_, x0_, std::move(heuristic));
}

ConstraintValues evaluateConstraints(const SwitchedProblem& problem, const Vector& x, const Vector& u, double t) {
  if (x.size() != problem.stateDim() || u.size() != problem.inputDim()) {
    fail(ErrorCode::DimensionMismatch, "state or input dimension does not match the problem");
  }
  const SubsystemModel& sub = problem.subsystem(problem.schedule().modeAt(t));
  return ConstraintValues{sub.stateInputConstraint(x, u, t), sub.stateOnlyConstraint(x, t),
                          sub.inequalityConstraint(x, u, t)};
}

void accumulateRunningCost(const SwitchedProblem& problem, TrajectorySegment& segment) {
  const StageCost& cost = problem.cost(segment.mode);
  segment.running_cost.assign(segment.size(), 0.0);
  double prev = cost.intermediate(segment.states[0], segment.inputs[0], segment.times[0]);
  for (std::size_t k = 1; k < segment.size(); ++k) {
    const double cur = cost.intermediate(segment.states[k], segment.inputs[k], segment.times[k]);
    segment.running_cost[k] = segment.running_cost[k - 1] + 0.5 * (segment.times[k] - segment.times[k - 1]) * (prev + cur);
    prev = cur;
  }
}

double evaluateSegmentCost(const SwitchedProblem& problem, const TrajectorySegment& segment) {
  double integral;
  if (segment.running_cost.size() == segment.size()) {
    integral = segment.running_cost.back();
  } else {
    TrajectorySegment copy = segment;
    accumulateRunningCost(problem, copy);
    integral = copy.running_cost.back();
  }
  return integral + problem.cost(segment.mode).terminal(segment.states.back());
}

double evaluateCost(const SwitchedProblem& problem, const Trajectory& trajectory) {
  if (trajectory.empty()) fail(ErrorCode::InvalidArgument, "empty trajectory");
  double total = 0.0;
  for (const auto& seg : trajectory.segments) total += evaluateSegmentCost(problem, seg);
  if (problem.terminalHeuristic()) total += problem.terminalHeuristic()->evaluate(trajectory.finalState());
  if (!std::isfinite(total)) fail(ErrorCode::NonFiniteCost, "trajectory cost is not finite");
  return total;
}

}  // namespace fastslq::ocp
