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

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fastslq/models/planar_legged.hpp"
#include "fastslq/mpc/closed_loop.hpp"
#include "fastslq/mpc/mpc.hpp"
#include "fastslq/ocp/problem.hpp"
#include "fastslq/solver/policy.hpp"
#include "fastslq/solver/slq_solver.hpp"

namespace fastslq::cli {

using Json = nlohmann::json;

enum class ProblemKind { Lti, LtiRandom, PlanarTrot };

/// Parsed run configuration. Problem-specific fields stay in the raw JSON
/// and are read by buildProblem / buildMpc.
struct RunConfig {
  ProblemKind kind = ProblemKind::Lti;
  Json problem;
  Json mpc;
  solver::SolverSettings solver;
};

/// Throws SolverError(ConfigError) on malformed input or unknown keys.
RunConfig parseConfig(const Json& document);
RunConfig loadConfig(const std::string& path);

struct BuiltProblem {
  ocp::SwitchedProblem problem;
  solver::LinearFeedbackPolicy initial_policy;
};

/// Seed overrides problem.seed of random problems.
BuiltProblem buildProblem(const RunConfig& config, std::optional<std::uint64_t> seed = std::nullopt);

struct MpcSetup {
  std::shared_ptr<const mpc::ModeFactory> factory;
  mpc::GaitPattern gait;
  mpc::MpcSettings settings;
  mpc::ClosedLoopSettings closed_loop;
  double start_time = 0.0;
  Vector start_state;
  /// Horizontal CoM reference of the task at time t.
  std::function<double(double)> reference_px;
};

/// Only planar_trot problems have a gait.
MpcSetup buildMpc(const RunConfig& config);

models::PlanarParameters parsePlanarParameters(const Json& j);
models::PlanarWeights parsePlanarWeights(const Json& j);
solver::SolverSettings parseSolverSettings(const Json& j);

/// Number -> scalar * I (needs dim), 1-D array -> diagonal, 2-D array -> dense.
Matrix parseMatrix(const Json& j, const std::string& name, int dim = -1);
Vector parseVector(const Json& j, const std::string& name);

}  // namespace fastslq::cli
