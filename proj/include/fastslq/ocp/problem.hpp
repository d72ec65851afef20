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

#include <memory>
#include <optional>
#include <vector>

#include "fastslq/ocp/mode_schedule.hpp"
#include "fastslq/ocp/models.hpp"
#include "fastslq/ocp/trajectory.hpp"

namespace fastslq::ocp {

using SubsystemPtr = std::shared_ptr<const SubsystemModel>;
using StageCostPtr = std::shared_ptr<const StageCost>;

// The switched optimal control problem
//
//   min  sum_i Phi_i(x(t_{i+1})) + int_{t_i}^{t_{i+1}} L_i(x, u, t) dt  [+ V_I(x(t_I))]
//   s.t. dx/dt = f_i(x, u, t),  x(t_0) = x0,  x(t_i^-) = x(t_i^+)
//        g1_i(x, u, t) = 0,  g2_i(x, t) = 0,  h_i(x, u, t) >= 0.
//
// Subsystems and costs are indexed by the schedule's subsystem ids. The
// optional terminal heuristic V_I stands in for the cost beyond t_I.
// Instances are immutable; derive modified copies with the with*() methods.
class SwitchedProblem {
 public:
  SwitchedProblem(ModeSchedule schedule, std::vector<SubsystemPtr> subsystems, std::vector<StageCostPtr> costs,
                  Vector x0, std::optional<QuadraticValue> terminal_heuristic = std::nullopt);

  const ModeSchedule& schedule() const noexcept { return schedule_; }
  const std::vector<SubsystemPtr>& subsystems() const noexcept { return subsystems_; }
  const std::vector<StageCostPtr>& costs() const noexcept { return costs_; }
  const Vector& initialState() const noexcept { return x0_; }
  const std::optional<QuadraticValue>& terminalHeuristic() const noexcept { return heuristic_; }
  int stateDim() const noexcept { return state_dim_; }
  int inputDim() const noexcept { return input_dim_; }
  std::size_t numModes() const noexcept { return schedule_.numModes(); }

  const SubsystemModel& subsystem(std::size_t mode) const;
  const StageCost& cost(std::size_t mode) const;

  SwitchedProblem withInitialState(Vector x0) const;
  SwitchedProblem withTerminalHeuristic(std::optional<QuadraticValue> heuristic) const;

 private:
  ModeSchedule schedule_;
  std::vector<SubsystemPtr> subsystems_;
  std::vector<StageCostPtr> costs_;
  Vector x0_;
  std::optional<QuadraticValue> heuristic_;
  int state_dim_ = 0;
  int input_dim_ = 0;
};

struct ConstraintValues {
  Vector state_input;  // g1
  Vector state_only;   // g2
  Vector inequality;   // h
};

/// Residuals of the constraints of the mode active at t.
ConstraintValues evaluateConstraints(const SwitchedProblem& problem, const Vector& x, const Vector& u, double t);

/// Total cost of a trajectory: per mode Phi_i(x(t_{i+1})) plus the running
/// integral stored in the segment, plus the terminal heuristic. Segments
/// without running_cost are integrated first with accumulateRunningCost.
double evaluateCost(const SwitchedProblem& problem, const Trajectory& trajectory);

/// Cost of a single segment: its running integral plus Phi_i at its end.
double evaluateSegmentCost(const SwitchedProblem& problem, const TrajectorySegment& segment);

/// Fills running_cost by the trapezoidal rule over the nodes. Rollouts
/// produce this field themselves with error-controlled quadrature.
void accumulateRunningCost(const SwitchedProblem& problem, TrajectorySegment& segment);

}  // namespace fastslq::ocp
