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

#include "fastslq_cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <memory>
#include <ostream>

namespace fastslq::cli {
namespace {

std::filesystem::path outputPath(const CommonOptions& options, const std::string& name) {
  std::filesystem::create_directories(options.out_dir);
  return std::filesystem::path(options.out_dir) / name;
}

std::ofstream openOutput(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::ConfigError, "cannot write '" + path.string() + "'");
  return out;
}

Json timingsJson(const solver::PhaseTimings& t) {
  return Json{{"forward_ms", 1e3 * t.forward}, {"lq_approx_ms", 1e3 * t.lq_approx}, {"backward_ms", 1e3 * t.backward}};
}

std::vector<double> toStd(const Vector& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

double mean(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double stddev(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double mu = mean(v);
  double s = 0.0;
  for (double x : v) s += (x - mu) * (x - mu);
  return std::sqrt(s / static_cast<double>(v.size() - 1));
}

}  // namespace

void applyCommonOverrides(const CommonOptions& options, solver::SolverSettings& settings) {
  if (options.threads) settings.num_threads = *options.threads;
  if (options.sequential_backward) settings.parallel_backward = false;
  settings.validate();
}

void writeTrajectoryCsv(const ocp::Trajectory& trajectory, std::ostream& out) {
  out << "# fastslq-csv v1\n";
  const Eigen::Index n = trajectory.empty() ? 0 : trajectory.initialState().size();
  const Eigen::Index m = trajectory.empty() ? 0 : trajectory.segments.front().inputs.front().size();
  out << "mode,time";
  for (Eigen::Index i = 0; i < n; ++i) out << ",x" << i;
  for (Eigen::Index i = 0; i < m; ++i) out << ",u" << i;
  out << '\n' << std::setprecision(17);
  for (const auto& seg : trajectory.segments) {
    for (std::size_t k = 0; k < seg.size(); ++k) {
      out << seg.mode << ',' << seg.times[k];
      for (Eigen::Index i = 0; i < n; ++i) out << ',' << seg.states[k][i];
      for (Eigen::Index i = 0; i < m; ++i) out << ',' << seg.inputs[k][i];
      out << '\n';
    }
  }
}

Json solveReportJson(const solver::SolveResult& result) {
  const auto& r = result.report;
  Json timings = Json::array();
  for (const auto& t : r.timings) timings.push_back(timingsJson(t));
  Json parallel = Json::array();
  for (bool p : r.parallel_iterations) parallel.push_back(p);
  return Json{{"final_cost", result.cost()},
              {"iterations", r.iterations},
              {"converged", r.converged},
              {"termination", solver::terminationReasonName(r.reason)},
              {"cost_trace", r.costs},
              {"alpha_trace", r.alphas},
              {"parallel_iterations", parallel},
              {"timings", timings}};
}

int cmdSolve(const CommonOptions& options, std::ostream& err) {
  try {
    RunConfig config = loadConfig(options.config_path);
    applyCommonOverrides(options, config.solver);
    const BuiltProblem built = buildProblem(config, options.seed);
    solver::SlqSolver slq(config.solver);
    const solver::SolveResult result = slq.solve(built.problem, built.initial_policy);

    auto csv = openOutput(outputPath(options, "trajectory.csv"));
    writeTrajectoryCsv(result.trajectory, csv);
    Json report = solveReportJson(result);
    report["max_constraint_violation"] = solver::maxStateInputViolation(built.problem, result.trajectory);
    openOutput(outputPath(options, "report.json")) << std::setprecision(17) << report.dump(2) << '\n';
    return result.report.converged ? kExitSuccess : kExitNotConverged;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
}

RecoveryMetrics recoveryAfter(const mpc::ClosedLoopLog& log, double kick_time,
                              const std::function<double(double)>& reference_px, double band_fraction) {
  RecoveryMetrics m;
  m.kick_time = kick_time;
  std::vector<std::pair<double, double>> dev;
  for (std::size_t k = 0; k < log.times.size(); ++k) {
    if (log.times[k] < kick_time) continue;
    const double e = std::abs(log.states[k][0] - reference_px(log.times[k]));
    dev.emplace_back(log.times[k], e);
    m.peak_deviation = std::max(m.peak_deviation, e);
  }
  m.band = band_fraction * m.peak_deviation;
  for (const auto& [t, e] : dev) {
    if (e > m.band) m.settle_time = t - kick_time;
  }
  if (!dev.empty()) m.final_deviation = dev.back().second;
  return m;
}

int cmdMpc(const MpcOptions& options, std::ostream& err) {
  try {
    RunConfig config = loadConfig(options.common.config_path);
    applyCommonOverrides(options.common, config.solver);
    MpcSetup setup = buildMpc(config);
    if (options.duration) setup.closed_loop.duration = *options.duration;
    if (options.rate) setup.closed_loop.mpc_rate = *options.rate;
    if (options.disturbances) setup.closed_loop.disturbances = mpc::parseDisturbances(*options.disturbances);
    setup.closed_loop.validate();

    mpc::MpcController controller(setup.factory, setup.gait, setup.settings, setup.start_time, setup.start_state);
    const mpc::ClosedLoopLog log = mpc::runClosedLoop(controller, setup.closed_loop);

    auto csv = openOutput(outputPath(options.common, "closed_loop.csv"));
    mpc::writeClosedLoopCsv(log, csv);

    double max_error = 0.0;
    for (std::size_t k = 0; k < log.times.size(); ++k) {
      max_error = std::max(max_error, std::abs(log.states[k][0] - setup.reference_px(log.times[k])));
    }
    std::vector<double> horizons;
    std::vector<int> modes_ahead;
    int accepted = 0;
    for (const auto& s : log.steps) {
      horizons.push_back(s.horizon);
      modes_ahead.push_back(s.modes_ahead);
      accepted += s.accepted ? 1 : 0;
    }
    Json recovery = Json::array();
    for (const auto& d : setup.closed_loop.disturbances) {
      const RecoveryMetrics r = recoveryAfter(log, d.time, setup.reference_px);
      recovery.push_back({{"kick_time", r.kick_time},
                          {"state_index", d.state_index},
                          {"delta", d.delta},
                          {"peak_deviation", r.peak_deviation},
                          {"band", r.band},
                          {"settle_time", r.settle_time},
                          {"final_deviation", r.final_deviation}});
    }
    Json summary{{"duration", setup.closed_loop.duration},
                 {"mpc_rate_requested_hz", setup.closed_loop.mpc_rate},
                 {"mean_latency_ms", 1e3 * log.meanLatency()},
                 {"achieved_mean_rate_hz", log.achievableRate()},
                 {"steps", log.steps.size()},
                 {"accepted_steps", accepted},
                 {"diverged", log.diverged},
                 {"error", log.error},
                 {"max_tracking_error", max_error},
                 {"final_state", log.states.empty() ? std::vector<double>{} : toStd(log.states.back())},
                 {"final_reference_px", setup.reference_px(log.times.empty() ? 0.0 : log.times.back())},
                 {"horizon_min", horizons.empty() ? 0.0 : *std::min_element(horizons.begin(), horizons.end())},
                 {"horizon_max", horizons.empty() ? 0.0 : *std::max_element(horizons.begin(), horizons.end())},
                 {"modes_ahead_min", modes_ahead.empty() ? 0 : *std::min_element(modes_ahead.begin(), modes_ahead.end())},
                 {"modes_ahead_max", modes_ahead.empty() ? 0 : *std::max_element(modes_ahead.begin(), modes_ahead.end())},
                 {"recovery", recovery}};
    openOutput(outputPath(options.common, "summary.json")) << summary.dump(2) << '\n';
    if (log.diverged) {
      err << "error: closed loop diverged: " << log.error << '\n';
      return kExitError;
    }
    return kExitSuccess;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
}

const BenchRow* BenchResult::find(int partitions, std::size_t threads) const {
  for (const auto& row : rows) {
    if (row.partitions == partitions && row.threads == threads) return &row;
  }
  return nullptr;
}

BenchResult runBench(const RunConfig& config, const std::vector<int>& partitions,
                     const std::vector<std::size_t>& thread_counts, int repeats, int warmup,
                     bool sequential_backward) {
  if (partitions.empty() || thread_counts.empty() || repeats <= 0 || warmup < 0) {
    fail(ErrorCode::InvalidArgument, "bench needs nonempty lists and positive repeats");
  }
  struct Cell {
    BenchRow row;
    std::unique_ptr<mpc::MpcController> controller;
    std::unique_ptr<mpc::ClosedLoopSimulator> sim;
  };
  std::vector<Cell> cells;
  for (int p : partitions) {
    for (std::size_t threads : thread_counts) {
      MpcSetup setup = buildMpc(config);
      setup.settings.n_modes_ahead = p;
      setup.settings.solver.num_threads = threads;
      if (sequential_backward) setup.settings.solver.parallel_backward = false;
      setup.closed_loop.disturbances.clear();
      setup.closed_loop.duration = static_cast<double>(warmup + repeats + 1) / setup.closed_loop.mpc_rate;
      Cell cell;
      cell.row.partitions = p;
      cell.row.threads = threads;
      cell.controller = std::make_unique<mpc::MpcController>(setup.factory, setup.gait, setup.settings,
                                                              setup.start_time, setup.start_state);
      cell.sim = std::make_unique<mpc::ClosedLoopSimulator>(*cell.controller, setup.closed_loop);
      cells.push_back(std::move(cell));
    }
  }

  // Cells take turns one MPC step at a time so that slow drifts of the
  // machine load affect all of them alike.
  const std::size_t total = static_cast<std::size_t>(warmup + repeats);
  for (std::size_t round = 0; round < total; ++round) {
    for (auto& cell : cells) {
      if (!cell.sim->advanceToNextStep()) {
        fail(ErrorCode::DivergentRollout, "bench closed loop ended early: " + cell.sim->log().error);
      }
    }
  }

  BenchResult result;
  for (auto& cell : cells) {
    const auto& steps = cell.sim->log().steps;
    std::vector<double> rates, fwd, lq, bwd, total_ms;
    for (std::size_t k = static_cast<std::size_t>(warmup); k < total; ++k) {
      const auto& s = steps[k];
      rates.push_back(1.0 / s.latency);
      fwd.push_back(1e3 * s.timings.forward);
      lq.push_back(1e3 * s.timings.lq_approx);
      bwd.push_back(1e3 * s.timings.backward);
      total_ms.push_back(1e3 * s.latency);
    }
    BenchRow row = cell.row;
    row.samples = static_cast<int>(rates.size());
    row.mean_rate_hz = 1e3 / mean(total_ms);
    row.std_rate_hz = stddev(rates);
    row.forward_ms = mean(fwd);
    row.lq_approx_ms = mean(lq);
    row.backward_ms = mean(bwd);
    row.step_ms = mean(total_ms);
    result.rows.push_back(row);
  }
  return result;
}

void writeBenchCsv(const BenchResult& result, std::ostream& out) {
  out << "# fastslq-csv v1\n";
  out << "num_partitions,num_threads,mean_rate_hz,std_rate_hz,forward_ms,lq_approx_ms,backward_ms,step_ms,samples\n";
  out << std::setprecision(6);
  for (const auto& r : result.rows) {
    out << r.partitions << ',' << r.threads << ',' << r.mean_rate_hz << ',' << r.std_rate_hz << ',' << r.forward_ms
        << ',' << r.lq_approx_ms << ',' << r.backward_ms << ',' << r.step_ms << ',' << r.samples << '\n';
  }
}

int cmdBench(const BenchOptions& options, std::ostream& err) {
  try {
    RunConfig config = loadConfig(options.common.config_path);
    applyCommonOverrides(options.common, config.solver);
    const BenchResult result = runBench(config, options.partitions, options.thread_counts, options.repeats,
                                        options.warmup, options.common.sequential_backward);
    auto csv = openOutput(outputPath(options.common, "bench.csv"));
    writeBenchCsv(result, csv);
    return kExitSuccess;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
}

}  // namespace fastslq::cli
