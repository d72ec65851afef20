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
#include <vector>

#include "fastslq/mpc/terminal_lqr.hpp"
#include "fastslq/ocp/problem.hpp"
#include "fastslq/riccati/riccati.hpp"
#include "fastslq/solver/policy.hpp"
#include "fastslq/solver/slq_solver.hpp"

namespace fastslq::mpc {

/// Cyclic sequence of mode types with their phase durations in seconds.
struct GaitPattern {
  std::vector<int> mode_types;
  std::vector<double> durations;

  void validate() const;
  std::size_t size() const noexcept { return mode_types.size(); }
  double shortestPhase() const;
};

/// Builds the subsystem and cost of a mode placed at [start, end] on the
/// global timeline.
class ModeFactory {
 public:
  virtual ~ModeFactory() = default;

  virtual int stateDim() const = 0;
  virtual int inputDim() const = 0;
  virtual ocp::SubsystemPtr makeSubsystem(int mode_type, double start, double end) const = 0;
  virtual ocp::StageCostPtr makeCost(int mode_type, double start, double end) const = 0;

  /// Subsystem whose linearization defines the terminal LQR.
  virtual ocp::SubsystemPtr terminalSubsystem() const = 0;
  /// Input the terminal LQR is linearized at and the feedforward of the LQR
  /// controller of an appended mode of the given type.
  virtual Vector nominalInput(int mode_type) const = 0;
  virtual Vector terminalNominalInput() const = 0;

  virtual Matrix lqrStateWeight() const = 0;
  virtual Matrix lqrInputWeight() const = 0;
};

struct MpcSettings {
  /// Number n of complete modes kept ahead of the current time.
  int n_modes_ahead = 2;
  /// Horizon extension triggers when t_f - t < horizon_trigger; values <= 0
  /// select n times the shortest phase.
  double horizon_trigger = 0.0;
  /// Terminal LQR weights; empty selects the factory's.
  Matrix lqr_Q;
  Matrix lqr_R;
  solver::SolverSettings solver;
  /// Iterations of a full solve at the start state before the first step;
  /// 0 starts from the terminal LQR controller alone.
  int initial_iterations = 30;

  void validate() const;
};

struct TimelineMode {
  int type = 0;
  double start = 0.0;
  double end = 0.0;
  ocp::SubsystemPtr subsystem;
  ocp::StageCostPtr cost;
};

struct MpcStepStats {
  double time = 0.0;
  double latency = 0.0;  // seconds, whole step
  solver::PhaseTimings timings;
  double plan_cost = 0.0;
  double rebased_cost = 0.0;
  bool accepted = false;
  bool parallel = false;
  double alpha = 0.0;
  double horizon = 0.0;
  int modes_ahead = 0;
  std::size_t plan_id = 0;
};

struct RebaseResult {
  ocp::SwitchedProblem problem;
  solver::LinearFeedbackPolicy policy;
  ocp::Trajectory trajectory;
  double cost = 0.0;
};

// Real-time-iteration MPC over a growing global timeline of gait modes.
// Every step extends the horizon when needed, rebases the stored policy on
// the measured state and performs one SLQ iteration warm-started from the
// stored value functions.
class MpcController {
 public:
  MpcController(std::shared_ptr<const ModeFactory> factory, GaitPattern gait, MpcSettings settings, double t_start,
                Vector x_start);

  /// Solves the initial problem with up to initial_iterations iterations
  /// (the constructor calls this) and returns the solver report.
  solver::SolveReport initialize(int max_iterations);

  /// Appends gait modes while fewer than n complete modes lie ahead of t,
  /// provided t_f - t < horizon trigger. Returns whether modes were added.
  bool extendHorizon(double t);

  /// Rolls out the stored policy from (t0, x0) and rewrites its
  /// feedforward so that the rollout is its own nominal.
  RebaseResult rebasePolicy(double t0, const Vector& x0);

  /// extendHorizon, rebasePolicy and one SLQ iteration.
  MpcStepStats step(double t0, const Vector& x0);

  /// Applied input at (x, t): stored policy of the mode active at t, then the
  /// rollout projections of that mode.
  Vector control(const Vector& x, double t) const;
  /// Index in timeline() of the mode active at t.
  std::size_t modeIndexAt(double t) const;

  /// Problem over [t0, t_f] from the current timeline.
  ocp::SwitchedProblem problemFrom(double t0, const Vector& x0) const;

  const std::vector<TimelineMode>& timeline() const noexcept { return timeline_; }
  const TerminalLqr& terminalLqr() const noexcept { return terminal_; }
  const std::vector<MpcStepStats>& stats() const noexcept { return stats_; }
  const MpcSettings& settings() const noexcept { return settings_; }
  const GaitPattern& gait() const noexcept { return gait_; }
  double finalTime() const noexcept { return t_final_; }
  double startTime() const noexcept { return t_start_; }
  const Vector& startState() const noexcept { return x_start_; }
  std::size_t planId() const noexcept { return plan_id_; }
  int modesAhead(double t) const;
  double horizonTriggerTime() const;
  solver::SlqSolver& solver() { return solver_; }
  const ocp::Trajectory& lastPlan() const noexcept { return last_plan_; }

 private:
  void appendMode();
  std::size_t firstActive(double t) const;
  solver::LinearFeedbackPolicy localPolicy(std::size_t first) const;

  std::shared_ptr<const ModeFactory> factory_;
  GaitPattern gait_;
  MpcSettings settings_;
  solver::SlqSolver solver_;
  Matrix lqr_Q_, lqr_R_;
  double t_start_ = 0.0;
  Vector x_start_;
  double t_final_ = 0.0;
  std::size_t gait_index_ = 0;

  std::vector<TimelineMode> timeline_;
  std::vector<solver::PolicySegment> policy_;        // per timeline mode
  std::vector<riccati::ValueFunction> value_functions_;  // per timeline mode, may be empty
  TerminalLqr terminal_;
  Vector plan_final_state_;
  ocp::Trajectory last_plan_;
  std::size_t plan_id_ = 0;
  std::vector<MpcStepStats> stats_;
};

}  // namespace fastslq::mpc
