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

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fastslq_cli/commands.hpp"

namespace {

void addCommon(CLI::App* cmd, fastslq::cli::CommonOptions& o, bool threads_flag) {
  cmd->add_option("--config", o.config_path, "JSON problem config")->required()->check(CLI::ExistingFile);
  if (threads_flag) {
    cmd->add_option_function<std::size_t>(
           "--threads", [&o](std::size_t k) { o.threads = k; }, "solver worker threads")
        ->check(CLI::PositiveNumber);
  }
  cmd->add_option("--out", o.out_dir, "output directory")->capture_default_str();
  cmd->add_option_function<std::uint64_t>(
      "--seed", [&o](std::uint64_t s) { o.seed = s; }, "seed of random problems");
  cmd->add_flag("--sequential-backward", o.sequential_backward, "disable the partition-parallel backward pass");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Switched-system SLQ / FastSLQ solver, MPC simulator and benchmark"};
  app.require_subcommand(1);

  fastslq::cli::CommonOptions solve_opts;
  auto* solve = app.add_subcommand("solve", "solve a problem to convergence");
  addCommon(solve, solve_opts, true);

  fastslq::cli::MpcOptions mpc_opts;
  auto* mpc = app.add_subcommand("mpc", "closed-loop MPC simulation of a gait problem");
  addCommon(mpc, mpc_opts.common, true);
  mpc->add_option_function<double>(
         "--duration", [&](double d) { mpc_opts.duration = d; }, "simulated seconds")
      ->check(CLI::PositiveNumber);
  mpc->add_option_function<std::string>(
      "--disturbance", [&](const std::string& s) { mpc_opts.disturbances = s; },
      "velocity kicks as time:state_index:delta[,...]");
  mpc->add_option_function<double>(
         "--rate", [&](double r) { mpc_opts.rate = r; }, "replanning rate in Hz")
      ->check(CLI::NonNegativeNumber);

  fastslq::cli::BenchOptions bench_opts;
  auto* bench = app.add_subcommand("bench", "thread / partition scaling benchmark");
  addCommon(bench, bench_opts.common, false);
  bench->add_option("--threads", bench_opts.thread_counts, "thread counts")->delimiter(',')->capture_default_str();
  bench->add_option("--partitions", bench_opts.partitions, "minimum partition counts")
      ->delimiter(',')
      ->capture_default_str();
  bench->add_option("--repeats", bench_opts.repeats, "timed MPC steps per cell")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  bench->add_option("--warmup", bench_opts.warmup, "untimed MPC steps per cell")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : fastslq::cli::kExitError;
  }

  if (*solve) return fastslq::cli::cmdSolve(solve_opts, std::cerr);
  if (*mpc) return fastslq::cli::cmdMpc(mpc_opts, std::cerr);
  return fastslq::cli::cmdBench(bench_opts, std::cerr);
}
