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
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "fastslq/mpc/mpc.hpp"
#include "fastslq/ode/integrator.hpp"

namespace fastslq::mpc {

/// Instantaneous change of one state component at a given time.
struct Disturbance {
  double time = 0.0;
  int state_index = 0;
  double delta = 0.0;
};

/// Parses "time:index:delta[,time:index:delta...]".
std::vector<Disturbance> parseDisturbances(const std::string& text);

struct ClosedLoopSettings {
  double duration = 5.0;
  /// Replanning rate in Hz; 0 never replans and only extends the horizon.
  double mpc_rate = 20.0;
  /// Plant output and log period.
  double control_dt = 0.01;
  std::vector<Disturbance> disturbances;
  ode::IntegratorSettings plant_integrator{1e-8, 1e-8, 0.01};
  double divergence_threshold = 1e6;

  void validate() const;
};

struct ClosedLoopLog {
  std::vector<double> times;
  std::vector<Vector> states;
  std::vector<Vector> inputs;
  std::vector<std::size_t> plan_ids;
  std::vector<double> latencies_ms;  // step latency at rows where a step ran, else 0
  std::vector<MpcStepStats> steps;
  bool diverged = false;
  std::string error;

  double meanLatency() const;
  /// 1 / mean latency; 0 when no step ran.
  double achievableRate() const;
};

/// Simulates the controller's own model as the plant. Between replans the
/// plant applies the latest policy through MpcController::control.
/// Closed loop advanced one control period at a time. Replanning happens at
/// the start of a period when due; disturbances are applied before it.
class ClosedLoopSimulator {
 public:
  ClosedLoopSimulator(MpcController& controller, ClosedLoopSettings settings);

  /// Logs the current sample and integrates the plant over one period.
  /// Returns false once the run has finished or diverged.
  bool advance();
  /// Advances until one more MPC step has run; false if the run ended first.
  bool advanceToNextStep();

  bool finished() const noexcept { return finished_; }
  const ClosedLoopLog& log() const noexcept { return log_; }
  ClosedLoopLog takeLog() { return std::move(log_); }

 private:
  MpcController& controller_;
  ClosedLoopSettings settings_;
  ClosedLoopLog log_;
  Vector x_;
  double next_replan_ = 0.0;
  double period_ = 0.0;
  long num_periods_ = 0;
  long k_ = 0;
  std::size_t next_disturbance_ = 0;
  bool finished_ = false;
};

ClosedLoopLog runClosedLoop(MpcController& controller, const ClosedLoopSettings& settings);

/// CSV with header comment, then time, x0..x{n-1}, u0..u{m-1}, plan_id, latency_ms.
void writeClosedLoopCsv(const ClosedLoopLog& log, std::ostream& out);

}  // namespace fastslq::mpc
