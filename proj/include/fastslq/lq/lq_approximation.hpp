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
#include <vector>

#include "fastslq/common.hpp"
#include "fastslq/ocp/problem.hpp"
#include "fastslq/thread_pool.hpp"

namespace fastslq::lq {

// Local LQ model at one time node:
//   d(dx)/dt = A dx + B du
//   C dx + D du + e = 0,   F dx + h = 0
//   L~ = q + qv'dx + r'du + dx'P du + 1/2 dx'Q dx + 1/2 du'R du
struct LqNode {
  double t = 0.0;
  Matrix A, B;
  Matrix C, D;
  Vector e;
  Matrix F;
  Vector h;
  double q = 0.0;
  Vector qv;
  Vector r;
  Matrix P;  // n x m
  Matrix Q, R;
};

// Phi~ = q + qv'dx + 1/2 dx'Q dx at the end of a mode.
struct TerminalLqNode {
  double q = 0.0;
  Vector qv;
  Matrix Q;
};

struct ModeLq {
  std::size_t mode = 0;
  std::vector<LqNode> nodes;
  TerminalLqNode terminal;
};

struct LqApproximation {
  std::vector<ModeLq> modes;
};

struct LqSettings {
  /// Eigenvalue floor for indefinite cost Hessians.
  double hessian_epsilon = 1e-9;
  /// Smallest admissible eigenvalue of R.
  double input_hessian_floor = 1e-6;
  /// Drop the state-input cross term P (Gauss-Newton style) instead of using
  /// the cost's exact mixed derivative.
  bool drop_cross_term = false;
};

ocp::DynamicsJacobian linearizeDynamics(const ocp::SubsystemModel& model, const Vector& x, const Vector& u, double t);

struct ConstraintLinearization {
  Matrix C, D;
  Vector e;
  Matrix F;
  Vector h;
};

ConstraintLinearization linearizeConstraints(const ocp::SubsystemModel& model, const Vector& x, const Vector& u,
                                             double t);

/// Fills the cost fields (q, qv, r, P, Q, R) of node, symmetrized and
/// regularized.
void quadratizeCost(const ocp::StageCost& cost, const Vector& x, const Vector& u, double t, LqNode& node,
                    const LqSettings& settings = {});

TerminalLqNode quadratizeTerminalCost(const ocp::StageCost& cost, const Vector& x, const LqSettings& settings = {});

/// Full LQ node (dynamics, constraints and cost) at a nominal point.
LqNode approximateNode(const ocp::SubsystemModel& model, const ocp::StageCost& cost, const Vector& x, const Vector& u,
                       double t, const LqSettings& settings = {});

/// LQ model at every rollout node. Parallel over nodes; the result does not
/// depend on the pool size.
LqApproximation buildLqApproximation(const ocp::SwitchedProblem& problem, const ocp::Trajectory& trajectory,
                                     ThreadPool& pool, const LqSettings& settings = {});
LqApproximation buildLqApproximation(const ocp::SwitchedProblem& problem, const ocp::Trajectory& trajectory,
                                     std::size_t num_threads = 1, const LqSettings& settings = {});

/// Componentwise linear interpolation between the bracketing nodes of a mode.
LqNode interpolateLq(const ModeLq& mode, double t);

}  // namespace fastslq::lq
