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

#include "fastslq/mpc/mpc.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include "fastslq/solver/rollout.hpp"

namespace fastslq::mpc {

namespace {

constexpr double kTimeEpsilon = 1e-9;

}  // namespace

void GaitPattern::validate() const {
  if (mode_types.empty()) fail(ErrorCode::InvalidArgument, "gait pattern is empty");
  if (durations.size() != mode_types.size()) {
    fail(ErrorCode::DimensionMismatch, "gait pattern needs one duration per mode");
  }
  for (double d : durations) {
    if (!(d > 0.0)) fail(ErrorCode::InvalidArgument, "gait phase durations must be positive");
  }
}

double GaitPattern::shortestPhase() const { return *std::min_element(durations.begin(), durations.end()); }

void MpcSettings::validate() const {
  if (n_modes_ahead < 1) fail(ErrorCode::InvalidArgument, "n_modes_ahead must be at least 1");
  if (initial_iterations < 0) fail(ErrorCode::InvalidArgument, "initial_iterations must be non-negative");
  solver.validate();
}

MpcController::MpcController(std::shared_ptr<const ModeFactory> factory, GaitPattern gait, MpcSettings settings,
                             double t_start, Vector x_start)
    : factory_(std::move(factory)),
      gait_(std::move(gait)),
      settings_(std::move(settings)),
      solver_(settings_.solver),
      t_start_(t_start),
      x_start_(std::move(x_start)),
      t_final_(t_start) {
  if (!factory_) fail(ErrorCode::InvalidArgument, "MPC needs a mode factory");
  gait_.validate();
  settings_.validate();
  if (x_start_.size() != factory_->stateDim()) fail(ErrorCode::DimensionMismatch, "MPC initial state size");
  lqr_Q_ = settings_.lqr_Q.size() > 0 ? settings_.lqr_Q : factory_->lqrStateWeight();
  lqr_R_ = settings_.lqr_R.size() > 0 ? settings_.lqr_R : factory_->lqrInputWeight();
  plan_final_state_ = x_start_;
  terminal_ = designTerminalLqr(*factory_->terminalSubsystem(), plan_final_state_, factory_->terminalNominalInput(),
                                lqr_Q_, lqr_R_);
  extendHorizon(t_start_);
  // Startup policy: the nominal input of each mode without feedback.
  for (std::size_t i = 0; i < timeline_.size(); ++i) {
    const Vector u = factory_->nominalInput(timeline_[i].type);
    policy_[i].feedforward = {u, u};
    policy_[i].gains.assign(2, Matrix::Zero(factory_->inputDim(), factory_->stateDim()));
  }
  if (settings_.initial_iterations > 0) initialize(settings_.initial_iterations);
}

solver::SolveReport MpcController::initialize(int max_iterations) {
  solver::SolverSettings s = settings_.solver;
  s.max_iterations = max_iterations;
  solver::SlqSolver warmup(s);
  const std::size_t first = firstActive(t_start_);
  const ocp::SwitchedProblem problem = problemFrom(t_start_, x_start_);
  solver::SolveResult result = warmup.solve(problem, localPolicy(first));
  for (std::size_t i = 0; i < result.policy.numSegments(); ++i) {
    policy_[first + i] = result.policy.segments()[i];
    policy_[first + i].mode = first + i;
    value_functions_[first + i] = result.value_functions[i];
  }
  last_plan_ = std::move(result.trajectory);
  plan_final_state_ = last_plan_.finalState();
  return result.report;
}

double MpcController::horizonTriggerTime() const {
  if (settings_.horizon_trigger > 0.0) return settings_.horizon_trigger;
  return settings_.n_modes_ahead * gait_.shortestPhase();
}

int MpcController::modesAhead(double t) const {
  int count = 0;
  for (const auto& m : timeline_) count += m.start >= t - kTimeEpsilon ? 1 : 0;
  return count;
}

bool MpcController::extendHorizon(double t) {
  if (t_final_ - t >= horizonTriggerTime() && modesAhead(t) >= settings_.n_modes_ahead) return false;
  bool added = false;
  while (modesAhead(t) < settings_.n_modes_ahead) {
    appendMode();
    added = true;
  }
  return added;
}

void MpcController::appendMode() {
  const std::size_t g = gait_index_ % gait_.size();
  ++gait_index_;
  TimelineMode mode;
  mode.type = gait_.mode_types[g];
  mode.start = t_final_;
  mode.end = t_final_ + gait_.durations[g];
  mode.subsystem = factory_->makeSubsystem(mode.type, mode.start, mode.end);
  mode.cost = factory_->makeCost(mode.type, mode.start, mode.end);

  // LQR controller of the current terminal design around the final state.
  solver::PolicySegment seg;
  seg.mode = timeline_.size();
  seg.times = {mode.start, mode.end};
  const Vector uff = factory_->nominalInput(mode.type) - terminal_.K * terminal_.x_ref;
  seg.feedforward = {uff, uff};
  seg.gains = {terminal_.K, terminal_.K};

  // The next terminal LQR is linearized at the same final nominal state;
  // the appended mode has no nominal of its own until the next iteration.
  terminal_ = designTerminalLqr(*factory_->terminalSubsystem(), plan_final_state_, factory_->terminalNominalInput(),
                                lqr_Q_, lqr_R_);

  timeline_.push_back(std::move(mode));
  policy_.push_back(std::move(seg));
  value_functions_.emplace_back();
  t_final_ = timeline_.back().end;
}

std::size_t MpcController::firstActive(double t) const {
  for (std::size_t i = 0; i < timeline_.size(); ++i) {
    if (timeline_[i].end > t + kTimeEpsilon) return i;
  }
  std::ostringstream msg;
  msg << "t = " << t << " beyond the MPC horizon end " << t_final_;
  fail(ErrorCode::OutOfHorizon, msg.str());
}

std::size_t MpcController::modeIndexAt(double t) const {
  if (timeline_.empty() || t < timeline_.front().start - kTimeEpsilon) {
    fail(ErrorCode::OutOfHorizon, "t before the MPC timeline");
  }
  for (std::size_t i = 0; i < timeline_.size(); ++i) {
    if (t < timeline_[i].end) return i;
  }
  if (t <= t_final_ + kTimeEpsilon) return timeline_.size() - 1;
  std::ostringstream msg;
  msg << "t = " << t << " beyond the MPC horizon end " << t_final_;
  fail(ErrorCode::OutOfHorizon, msg.str());
}

ocp::SwitchedProblem MpcController::problemFrom(double t0, const Vector& x0) const {
  const std::size_t first = firstActive(t0);
  std::vector<double> times{t0};
  std::vector<int> ids;
  std::vector<ocp::SubsystemPtr> subsystems;
  std::vector<ocp::StageCostPtr> costs;
  for (std::size_t i = first; i < timeline_.size(); ++i) {
    times.push_back(timeline_[i].end);
    ids.push_back(static_cast<int>(i - first));
    subsystems.push_back(timeline_[i].subsystem);
    costs.push_back(timeline_[i].cost);
  }
  return ocp::SwitchedProblem(ocp::ModeSchedule(times, ids), std::move(subsystems), std::move(costs), x0,
                              terminal_.value);
}

solver::LinearFeedbackPolicy MpcController::localPolicy(std::size_t first) const {
  std::vector<solver::PolicySegment> segments;
  for (std::size_t i = first; i < policy_.size(); ++i) {
    segments.push_back(policy_[i]);
    segments.back().mode = i - first;
  }
  return solver::LinearFeedbackPolicy(std::move(segments));
}

RebaseResult MpcController::rebasePolicy(double t0, const Vector& x0) {
  const std::size_t first = firstActive(t0);
  RebaseResult out{problemFrom(t0, x0), {}, {}, 0.0};
  const solver::LinearFeedbackPolicy current = localPolicy(first);
  out.trajectory = solver::rollout(out.problem, current, settings_.solver.rollout);
  out.cost = ocp::evaluateCost(out.problem, out.trajectory);

  std::vector<solver::PolicySegment> segments;
  for (const auto& seg : out.trajectory.segments) {
    const solver::PolicySegment& old = current.segment(seg.mode);
    solver::PolicySegment ps;
    ps.mode = seg.mode;
    ps.times = seg.times;
    for (std::size_t k = 0; k < seg.size(); ++k) {
      Matrix K = old.gainAt(seg.times[k]);
      ps.feedforward.push_back(seg.inputs[k] - K * seg.states[k]);
      ps.gains.push_back(std::move(K));
    }
    segments.push_back(std::move(ps));
  }
  out.policy = solver::LinearFeedbackPolicy(std::move(segments));
  return out;
}

MpcStepStats MpcController::step(double t0, const Vector& x0) {
  const auto start = std::chrono::steady_clock::now();
  extendHorizon(t0);
  const std::size_t first = firstActive(t0);
  const auto rebase_start = std::chrono::steady_clock::now();
  RebaseResult rb = rebasePolicy(t0, x0);
  const double rebase_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - rebase_start).count();

  std::vector<riccati::ValueFunction> previous(value_functions_.begin() + static_cast<std::ptrdiff_t>(first),
                                               value_functions_.end());
  solver::IterationResult it = solver_.iterate(rb.problem, rb.policy, previous,
                                               settings_.solver.parallel_backward, &rb.trajectory, &rb.cost);

  // A rejected step keeps the stored policy: it reproduces the rebased
  // nominal exactly, whereas the rebased copy only matches it at the nodes.
  for (std::size_t i = 0; i < it.policy.numSegments(); ++i) {
    if (it.accepted) {
      policy_[first + i] = it.policy.segments()[i];
      policy_[first + i].mode = first + i;
    }
    value_functions_[first + i] = it.value_functions[i];
  }
  last_plan_ = std::move(it.trajectory);
  plan_final_state_ = last_plan_.finalState();
  ++plan_id_;

  MpcStepStats stats;
  stats.time = t0;
  stats.timings = it.timings;
  stats.timings.forward += rebase_time;
  stats.plan_cost = it.cost;
  stats.rebased_cost = rb.cost;
  stats.accepted = it.accepted;
  stats.parallel = it.parallel;
  stats.alpha = it.alpha;
  stats.horizon = t_final_ - t0;
  stats.modes_ahead = modesAhead(t0);
  stats.plan_id = plan_id_;
  stats.latency = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  stats_.push_back(stats);
  return stats;
}

Vector MpcController::control(const Vector& x, double t) const {
  const std::size_t idx = modeIndexAt(t);
  Vector u;
  policy_[idx].evaluate(x, t, u);
  const auto& model = *timeline_[idx].subsystem;
  const auto& rs = settings_.solver.rollout;
  if (rs.project_equality) u = solver::projectEqualityInput(u, x, t, model);
  return solver::projectInput(u, x, t, model, rs.max_projection_passes);
}

}  // namespace fastslq::mpc
