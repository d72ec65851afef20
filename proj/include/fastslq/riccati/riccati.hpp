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

#include "fastslq/lq/lq_approximation.hpp"
#include "fastslq/ocp/trajectory.hpp"
#include "fastslq/ode/integrator.hpp"
#include "fastslq/riccati/projection.hpp"

namespace fastslq::riccati {

/// Coefficients of the quadratic value function at one time:
///   V  = s + dx's + 1/2 dx'S dx,  V_e = dx's_e,  dx = x - x_nominal(t).
struct RiccatiState {
  Matrix S;
  Vector sv;
  Vector se;
  double s = 0.0;

  static RiccatiState zero(int n);
};

/// Layout of the integrator state: [vec(S), sv, se, s].
Vector packRiccatiState(const RiccatiState& state);
RiccatiState unpackRiccatiState(const Vector& packed, int n);
inline Eigen::Index packedRiccatiSize(int n) { return static_cast<Eigen::Index>(n) * n + 2 * n + 1; }

/// Feedback terms that depend on the value function:
///   L~ = R^-1 (P' + B'S),  l~ = R^-1 (r + B'sv),  l~_e = R^-1 B'se.
struct FeedbackTerms {
  Matrix Ltilde;
  Vector ltilde;
  Vector letilde;
};

FeedbackTerms feedbackTerms(const ProjectedLqCoefficients& c, const RiccatiState& state);

/// Time derivatives (dS/dt, dsv/dt, dse/dt, ds/dt) of the constrained
/// Riccati equations:
///   -dS/dt  = A~'S + S'A~ - L~'R~L~ + Q~
///   -dsv/dt = A~'sv - L~'R~ l~ + q~
///   -dse/dt = A~'se - L~'R~ l~_e + (C~ - L~)'R e~
///   -ds/dt  = q - 1/2 l~'R~ l~
/// dS/dt is returned symmetrized. Throws NonFinite.
RiccatiState riccatiRhs(const ProjectedLqCoefficients& c, const RiccatiState& state);

struct ValueEvaluation {
  double value = 0.0;             // V + V_e
  double quadratic_value = 0.0;   // V
  double constraint_value = 0.0;  // V_e
  Vector gradient;                // d(V + V_e)/dx
  Vector quadratic_gradient;      // dV/dx
  Vector constraint_gradient;     // dV_e/dx
  Matrix hessian;
};

/// Value function of one partition: the Riccati solution over the mode
/// interval and the nominal state trajectory it is expanded around. Copies
/// share the underlying data.
class ValueFunction {
 public:
  ValueFunction() = default;
  ValueFunction(std::size_t mode, int state_dim, ode::DenseTrajectory riccati,
                std::shared_ptr<const ocp::TrajectorySegment> nominal);

  bool empty() const noexcept { return riccati_ == nullptr; }
  std::size_t mode() const noexcept { return mode_; }
  int stateDim() const noexcept { return state_dim_; }
  double startTime() const;
  double endTime() const;

  const ode::DenseTrajectory& riccatiTrajectory() const { return *riccati_; }
  const ocp::TrajectorySegment& nominal() const { return *nominal_; }

  /// Throws OutOfSpan outside [startTime, endTime].
  RiccatiState stateAt(double t) const;
  Vector nominalStateAt(double t) const;
  ValueEvaluation evaluate(const Vector& x, double t) const;

 private:
  std::size_t mode_ = 0;
  int state_dim_ = 0;
  std::shared_ptr<const ode::DenseTrajectory> riccati_;
  std::shared_ptr<const ocp::TrajectorySegment> nominal_;
};

/// Final values of a partition at its end time t_end. With next_vf (the
/// following partition's value function, possibly from the previous
/// iteration) evaluated at x_nominal_end:
///   S = Q_f + S_next,  sv = qv_f + sv_next + S_next dx,  se = se_next,
///   s = q_f + V_next + V_e,next
/// Without next_vf the terminal heuristic (if any) takes its place.
RiccatiState finalValues(const lq::TerminalLqNode& terminal, const ValueFunction* next_vf,
                         const Vector& x_nominal_end, double t_end,
                         const std::optional<ocp::QuadraticValue>& heuristic);

struct BackwardSettings {
  ode::IntegratorSettings integrator{1e-7, 1e-7};
  double rho = kDefaultStateConstraintPenalty;
  double blowup_threshold = 1e12;
};

/// Integrates the Riccati equations backward from coeffs.back().t to
/// coeffs.front().t. Throws RiccatiBlowup when |S| exceeds the threshold.
ValueFunction solvePartitionBackward(const std::vector<ProjectedLqCoefficients>& coeffs, std::size_t mode,
                                     const RiccatiState& finals,
                                     std::shared_ptr<const ocp::TrajectorySegment> nominal,
                                     const BackwardSettings& settings = {});

/// Projects every node of the mode and solves the partition.
std::vector<ProjectedLqCoefficients> projectMode(const lq::ModeLq& mode, double rho);
ValueFunction solvePartitionBackward(const lq::ModeLq& mode, const RiccatiState& finals,
                                     std::shared_ptr<const ocp::TrajectorySegment> nominal,
                                     const BackwardSettings& settings = {});

}  // namespace fastslq::riccati
