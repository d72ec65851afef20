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

#include "fastslq_cli/config.hpp"

#include <fstream>
#include <initializer_list>
#include <set>

#include "fastslq/models/lti.hpp"
#include "fastslq/models/planar_mode_factory.hpp"

namespace fastslq::cli {
namespace {

[[noreturn]] void configError(const std::string& message) { fail(ErrorCode::ConfigError, message); }

void checkKeys(const Json& j, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) configError(where + " must be an object");
  std::set<std::string> keys;
  for (const char* k : allowed) keys.insert(k);
  for (const auto& [key, value] : j.items()) {
    if (!keys.count(key)) configError("unknown key '" + key + "' in " + where);
  }
}

template <typename T>
T get(const Json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const Json::exception& e) {
    configError(std::string("bad value for '") + key + "': " + e.what());
  }
}

double number(const Json& j, const std::string& name) {
  if (!j.is_number()) configError(name + " must be a number");
  return j.get<double>();
}

std::vector<double> numberList(const Json& j, const std::string& name) {
  if (!j.is_array()) configError(name + " must be an array of numbers");
  std::vector<double> out;
  for (const auto& v : j) out.push_back(number(v, name));
  return out;
}

models::PlanarModeType parseModeType(const Json& j) {
  const std::string s = j.is_string() ? j.get<std::string>() : std::string();
  if (s == "stance") return models::PlanarModeType::Stance;
  if (s == "swing0") return models::PlanarModeType::SwingFoot0;
  if (s == "swing1") return models::PlanarModeType::SwingFoot1;
  configError("gait entries must be \"stance\", \"swing0\" or \"swing1\"");
}

std::vector<models::PlanarModeType> parseGait(const Json& problem) {
  std::vector<models::PlanarModeType> gait{models::PlanarModeType::SwingFoot0, models::PlanarModeType::SwingFoot1};
  if (problem.contains("gait")) {
    const Json& g = problem.at("gait");
    if (!g.is_array() || g.empty()) configError("problem.gait must be a nonempty array");
    gait.clear();
    for (const auto& e : g) gait.push_back(parseModeType(e));
  }
  return gait;
}

ocp::SwitchedProblem buildLti(const Json& p) {
  checkKeys(p, "problem", {"type", "A", "B", "Q", "R", "Q_f", "x0", "switching_times", "constraints"});
  for (const char* key : {"A", "B", "x0", "switching_times"}) {
    if (!p.contains(key)) configError(std::string("problem.") + key + " is required");
  }
  const Matrix A = parseMatrix(p.at("A"), "A");
  const int n = static_cast<int>(A.rows());
  const Matrix B = parseMatrix(p.at("B"), "B");
  const int m = static_cast<int>(B.cols());
  const Matrix Q = p.contains("Q") ? parseMatrix(p.at("Q"), "Q", n) : Matrix::Identity(n, n);
  const Matrix R = p.contains("R") ? parseMatrix(p.at("R"), "R", m) : Matrix::Identity(m, m);
  const Matrix Qf = p.contains("Q_f") ? parseMatrix(p.at("Q_f"), "Q_f", n) : Matrix::Zero(n, n);
  const Vector x0 = parseVector(p.at("x0"), "x0");
  const std::vector<double> times = numberList(p.at("switching_times"), "switching_times");

  std::vector<models::LtiModeConstraints> constraints;
  if (p.contains("constraints")) {
    const Json& cs = p.at("constraints");
    if (!cs.is_array()) configError("problem.constraints must be an array with one entry per mode");
    for (const auto& c : cs) {
      models::LtiModeConstraints mc;
      if (!c.is_null()) {
        checkKeys(c, "constraint", {"C", "D", "e", "F", "h"});
        if (c.contains("D")) {
          const Matrix D = parseMatrix(c.at("D"), "D");
          const Matrix C = c.contains("C") ? parseMatrix(c.at("C"), "C") : Matrix::Zero(D.rows(), n);
          const Vector e = c.contains("e") ? parseVector(c.at("e"), "e") : Vector::Zero(D.rows());
          mc.state_input = models::AffineStateInputConstraint{C, D, e};
        }
        if (c.contains("F")) {
          const Matrix F = parseMatrix(c.at("F"), "F");
          const Vector h = c.contains("h") ? parseVector(c.at("h"), "h") : Vector::Zero(F.rows());
          mc.state_only = models::AffineStateConstraint{F, h};
        }
      }
      constraints.push_back(std::move(mc));
    }
  }
  return models::makeLtiProblem(A, B, Q, R, Qf, x0, times, constraints);
}

ocp::SwitchedProblem buildLtiRandom(const Json& p, std::optional<std::uint64_t> seed) {
  checkKeys(p, "problem", {"type", "state_dim", "input_dim", "horizon", "num_modes", "seed", "q", "r", "q_f", "x0"});
  const int n = get<int>(p, "state_dim", 4);
  const int m = get<int>(p, "input_dim", 2);
  const double horizon = get<double>(p, "horizon", 5.0);
  const int modes = get<int>(p, "num_modes", 1);
  if (n <= 0 || m <= 0 || modes <= 0 || !(horizon > 0.0)) configError("lti_random sizes and horizon must be positive");
  const std::uint64_t s = seed ? *seed : get<std::uint64_t>(p, "seed", 1);
  const models::LtiPair pair = models::randomStabilizablePair(n, m, s);
  const Matrix Q = get<double>(p, "q", 1.0) * Matrix::Identity(n, n);
  const Matrix R = get<double>(p, "r", 1.0) * Matrix::Identity(m, m);
  const Matrix Qf = get<double>(p, "q_f", 0.0) * Matrix::Identity(n, n);
  const Vector x0 = p.contains("x0") ? parseVector(p.at("x0"), "x0") : Vector::Ones(n).eval();
  std::vector<double> times;
  for (int i = 0; i <= modes; ++i) times.push_back(horizon * i / modes);
  return models::makeLtiProblem(pair.A, pair.B, Q, R, Qf, x0, times);
}

models::PlanarTrotSettings planarSettings(const Json& p) {
  checkKeys(p, "problem", {"type", "num_modes", "phase_duration", "goal_px", "initial_px", "start_time", "gait",
                           "parameters", "weights"});
  models::PlanarTrotSettings s;
  if (p.contains("parameters")) s.params = parsePlanarParameters(p.at("parameters"));
  if (p.contains("weights")) s.weights = parsePlanarWeights(p.at("weights"));
  s.gait = parseGait(p);
  s.phase_duration = get<double>(p, "phase_duration", s.phase_duration);
  s.num_modes = get<int>(p, "num_modes", s.num_modes);
  s.start_time = get<double>(p, "start_time", s.start_time);
  s.goal_px = get<double>(p, "goal_px", s.goal_px);
  s.initial_px = get<double>(p, "initial_px", s.initial_px);
  if (s.num_modes <= 0 || !(s.phase_duration > 0.0)) configError("num_modes and phase_duration must be positive");
  return s;
}

}  // namespace

Matrix parseMatrix(const Json& j, const std::string& name, int dim) {
  if (j.is_number()) {
    if (dim <= 0) configError(name + " needs an explicit matrix");
    return j.get<double>() * Matrix::Identity(dim, dim);
  }
  if (!j.is_array() || j.empty()) configError(name + " must be a number or a nonempty array");
  if (!j.front().is_array()) {
    const Vector d = parseVector(j, name);
    if (dim > 0 && d.size() != dim) configError(name + " diagonal has the wrong length");
    return d.asDiagonal();
  }
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = static_cast<Eigen::Index>(j.front().size());
  Matrix M(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const Json& row = j.at(static_cast<std::size_t>(r));
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) configError(name + " has ragged rows");
    for (Eigen::Index c = 0; c < cols; ++c) M(r, c) = number(row.at(static_cast<std::size_t>(c)), name);
  }
  if (dim > 0 && (rows != dim || cols != dim)) configError(name + " has the wrong size");
  return M;
}

Vector parseVector(const Json& j, const std::string& name) {
  const std::vector<double> v = numberList(j, name);
  return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

models::PlanarParameters parsePlanarParameters(const Json& j) {
  checkKeys(j, "problem.parameters", {"mass", "inertia", "gravity", "friction", "swing_apex", "body_height",
                                      "foot_offset", "aux_time_constant"});
  models::PlanarParameters p;
  p.mass = get<double>(j, "mass", p.mass);
  p.inertia = get<double>(j, "inertia", p.inertia);
  p.gravity = get<double>(j, "gravity", p.gravity);
  p.friction = get<double>(j, "friction", p.friction);
  p.swing_apex = get<double>(j, "swing_apex", p.swing_apex);
  p.body_height = get<double>(j, "body_height", p.body_height);
  p.foot_offset = get<double>(j, "foot_offset", p.foot_offset);
  p.aux_time_constant = get<double>(j, "aux_time_constant", p.aux_time_constant);
  try {
    p.validate();
  } catch (const SolverError& e) {
    configError(e.what());
  }
  return p;
}

models::PlanarWeights parsePlanarWeights(const Json& j) {
  checkKeys(j, "problem.weights", {"state", "input", "terminal"});
  models::PlanarWeights w;
  auto read = [&](const char* key, std::vector<double>& target) {
    if (!j.contains(key)) return;
    std::vector<double> v = numberList(j.at(key), key);
    if (v.size() != target.size()) configError(std::string("weights.") + key + " has the wrong length");
    target = std::move(v);
  };
  read("state", w.state);
  read("input", w.input);
  read("terminal", w.terminal);
  return w;
}

solver::SolverSettings parseSolverSettings(const Json& j) {
  checkKeys(j, "solver", {"max_iterations", "convergence_tol", "rho", "line_search_alphas", "line_search_gamma",
                          "num_threads", "parallel_backward", "rollout_max_step", "rollout_tol", "backward_tol"});
  solver::SolverSettings s;
  s.max_iterations = get<int>(j, "max_iterations", s.max_iterations);
  s.convergence_tol = get<double>(j, "convergence_tol", s.convergence_tol);
  s.rho = get<double>(j, "rho", s.rho);
  s.backward.rho = s.rho;
  if (j.contains("line_search_alphas")) s.line_search_alphas = numberList(j.at("line_search_alphas"), "alphas");
  s.line_search_gamma = get<double>(j, "line_search_gamma", s.line_search_gamma);
  s.num_threads = get<std::size_t>(j, "num_threads", s.num_threads);
  s.parallel_backward = get<bool>(j, "parallel_backward", s.parallel_backward);
  s.rollout.integrator.max_step = get<double>(j, "rollout_max_step", s.rollout.integrator.max_step);
  if (j.contains("rollout_tol")) {
    s.rollout.integrator.abs_tol = s.rollout.integrator.rel_tol = number(j.at("rollout_tol"), "rollout_tol");
  }
  if (j.contains("backward_tol")) {
    s.backward.integrator.abs_tol = s.backward.integrator.rel_tol = number(j.at("backward_tol"), "backward_tol");
  }
  try {
    s.validate();
  } catch (const SolverError& e) {
    configError(e.what());
  }
  return s;
}

RunConfig parseConfig(const Json& document) {
  checkKeys(document, "config", {"problem", "solver", "mpc"});
  if (!document.contains("problem")) configError("config.problem is required");
  RunConfig config;
  config.problem = document.at("problem");
  if (!config.problem.is_object() || !config.problem.contains("type") || !config.problem.at("type").is_string()) {
    configError("problem.type must be a string");
  }
  const std::string type = config.problem.at("type").get<std::string>();
  if (type == "lti") {
    config.kind = ProblemKind::Lti;
  } else if (type == "lti_random") {
    config.kind = ProblemKind::LtiRandom;
  } else if (type == "planar_trot") {
    config.kind = ProblemKind::PlanarTrot;
  } else {
    configError("unknown problem.type '" + type + "'");
  }
  config.solver = parseSolverSettings(document.value("solver", Json::object()));
  config.mpc = document.value("mpc", Json::object());
  checkKeys(config.mpc, "mpc", {"n_modes_ahead", "horizon_trigger", "initial_iterations", "rate", "duration",
                                "control_dt", "goal_px", "goal_start_time", "stride_length", "disturbances"});
  return config;
}

RunConfig loadConfig(const std::string& path) {
  std::ifstream in(path);
  if (!in) configError("cannot open config '" + path + "'");
  Json document;
  try {
    document = Json::parse(in);
  } catch (const Json::exception& e) {
    configError("malformed JSON in '" + path + "': " + e.what());
  }
  return parseConfig(document);
}

BuiltProblem buildProblem(const RunConfig& config, std::optional<std::uint64_t> seed) {
  switch (config.kind) {
    case ProblemKind::Lti: {
      auto problem = buildLti(config.problem);
      auto policy = solver::LinearFeedbackPolicy::zero(problem.schedule(), problem.stateDim(), problem.inputDim());
      return {std::move(problem), std::move(policy)};
    }
    case ProblemKind::LtiRandom: {
      auto problem = buildLtiRandom(config.problem, seed);
      auto policy = solver::LinearFeedbackPolicy::zero(problem.schedule(), problem.stateDim(), problem.inputDim());
      return {std::move(problem), std::move(policy)};
    }
    case ProblemKind::PlanarTrot: {
      const models::PlanarTrotSettings s = planarSettings(config.problem);
      auto problem = models::makePlanarTrotProblem(s);
      auto policy = models::planarInitialPolicy(problem, s.params);
      return {std::move(problem), std::move(policy)};
    }
  }
  configError("unreachable problem kind");
}

MpcSetup buildMpc(const RunConfig& config) {
  if (config.kind != ProblemKind::PlanarTrot) configError("mpc needs a planar_trot problem");
  const models::PlanarTrotSettings s = planarSettings(config.problem);
  const Json& m = config.mpc;

  MpcSetup setup;
  models::StrideReference ref;
  ref.start_px = s.initial_px;
  ref.goal_px = get<double>(m, "goal_px", s.goal_px);
  ref.start_time = get<double>(m, "goal_start_time", s.start_time);
  ref.stride_length = get<double>(m, "stride_length", ref.stride_length);
  ref.cycle_duration = s.phase_duration * static_cast<double>(s.gait.size());
  setup.reference_px = [ref](double t) { return ref(t); };
  setup.factory = std::make_shared<models::PlanarModeFactory>(s.params, s.weights, setup.reference_px);

  for (auto type : s.gait) {
    setup.gait.mode_types.push_back(static_cast<int>(type));
    setup.gait.durations.push_back(s.phase_duration);
  }
  setup.settings.solver = config.solver;
  setup.settings.n_modes_ahead = get<int>(m, "n_modes_ahead", setup.settings.n_modes_ahead);
  setup.settings.horizon_trigger = get<double>(m, "horizon_trigger", setup.settings.horizon_trigger);
  setup.settings.initial_iterations = get<int>(m, "initial_iterations", setup.settings.initial_iterations);

  setup.closed_loop.mpc_rate = get<double>(m, "rate", setup.closed_loop.mpc_rate);
  setup.closed_loop.duration = get<double>(m, "duration", setup.closed_loop.duration);
  setup.closed_loop.control_dt = get<double>(m, "control_dt", setup.closed_loop.control_dt);
  if (m.contains("disturbances")) {
    try {
      setup.closed_loop.disturbances = mpc::parseDisturbances(get<std::string>(m, "disturbances", ""));
    } catch (const SolverError& e) {
      configError(e.what());
    }
  }
  try {
    setup.settings.validate();
    setup.closed_loop.validate();
  } catch (const SolverError& e) {
    configError(e.what());
  }
  setup.start_time = s.start_time;
  setup.start_state = models::planarStandingState(s.params, s.initial_px);
  return setup;
}

}  // namespace fastslq::cli
