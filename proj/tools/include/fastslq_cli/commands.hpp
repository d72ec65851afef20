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
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "fastslq_cli/config.hpp"

namespace fastslq::cli {

enum ExitCode : int { kExitSuccess = 0, kExitError = 1, kExitNotConverged = 2 };

struct CommonOptions {
  std::string config_path;
  std::optional<std::size_t> threads;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  bool sequential_backward = false;
};

struct MpcOptions {
  CommonOptions common;
  std::optional<double> duration;
  std::optional<std::string> disturbances;
  std::optional<double> rate;
};

struct BenchOptions {
  CommonOptions common;
  std::vector<int> partitions{2, 4};
  std::vector<std::size_t> thread_counts{1, 2, 4};
  int repeats = 300;
  int warmup = 10;
};

/// Each command reads the config, writes its artifacts into out_dir and
/// returns an exit code. Errors are reported on err.
int cmdSolve(const CommonOptions& options, std::ostream& err);
int cmdMpc(const MpcOptions& options, std::ostream& err);
int cmdBench(const BenchOptions& options, std::ostream& err);

/// Applies --threads / --sequential-backward on top of the config.
void applyCommonOverrides(const CommonOptions& options, solver::SolverSettings& settings);

void writeTrajectoryCsv(const ocp::Trajectory& trajectory, std::ostream& out);
Json solveReportJson(const solver::SolveResult& result);

struct BenchRow {
  int partitions = 0;
  std::size_t threads = 0;
  double mean_rate_hz = 0.0;
  double std_rate_hz = 0.0;
  double forward_ms = 0.0;
  double lq_approx_ms = 0.0;
  double backward_ms = 0.0;
  double step_ms = 0.0;  // whole MPC step, mean
  int samples = 0;
};

struct BenchResult {
  std::vector<BenchRow> rows;

  const BenchRow* find(int partitions, std::size_t threads) const;
};

/// One cell per (partitions, threads): a closed-loop planar MPC run keeping
/// at least `partitions` complete modes ahead, timing repeats steps after
/// warmup steps. Cells advance in turn, one MPC step each, so slow drifts
/// of the machine affect all cells alike.
BenchResult runBench(const RunConfig& config, const std::vector<int>& partitions,
                     const std::vector<std::size_t>& thread_counts, int repeats, int warmup,
                     bool sequential_backward);

void writeBenchCsv(const BenchResult& result, std::ostream& out);

/// Horizontal CoM tracking after a disturbance at kick_time. The band is
/// band_fraction of the peak deviation from the reference after the kick;
/// settle_time is measured from the kick to the last sample outside it.
struct RecoveryMetrics {
  double kick_time = 0.0;
  double peak_deviation = 0.0;
  double band = 0.0;
  double settle_time = 0.0;
  double final_deviation = 0.0;
};

RecoveryMetrics recoveryAfter(const mpc::ClosedLoopLog& log, double kick_time,
                              const std::function<double(double)>& reference_px, double band_fraction = 0.05);

}  // namespace fastslq::cli
