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
#include <optional>
#include <vector>

#include "fastslq/ocp/problem.hpp"

namespace fastslq::models {

/// C x + D u + e = 0
struct AffineStateInputConstraint {
  Matrix C, D;
  Vector e;
};

/// F x + h = 0
struct AffineStateConstraint {
  Matrix F;
  Vector h;
};

// dx/dt = A x + B u with optional affine constraints.
class LtiSubsystem : public ocp::SubsystemModel {
 public:
  LtiSubsystem(Matrix A, Matrix B, std::optional<AffineStateInputConstraint> constraint = std::nullopt,
               std::optional<AffineStateConstraint> state_constraint = std::nullopt);

  int stateDim() const override { return static_cast<int>(A_.rows()); }
  int inputDim() const override { return static_cast<int>(B_.cols()); }
  Vector dynamics(const Vector& x, const Vector& u, double t) const override;
  std::optional<ocp::DynamicsJacobian> dynamicsJacobian(const Vector& x, const Vector& u, double t) const override;
  Vector stateInputConstraint(const Vector& x, const Vector& u, double t) const override;
  std::optional<ocp::ConstraintJacobian> stateInputConstraintJacobian(const Vector& x, const Vector& u,
                                                                      double t) const override;
  Vector stateOnlyConstraint(const Vector& x, double t) const override;
  std::optional<Matrix> stateOnlyConstraintJacobian(const Vector& x, double t) const override;

  const Matrix& A() const noexcept { return A_; }
  const Matrix& B() const noexcept { return B_; }

 private:
  Matrix A_, B_;
  std::optional<AffineStateInputConstraint> constraint_;
  std::optional<AffineStateConstraint> state_constraint_;
};

struct LtiModeConstraints {
  std::optional<AffineStateInputConstraint> state_input;
  std::optional<AffineStateConstraint> state_only;
};

/// LTI problem with identical dynamics and running cost 1/2 x'Qx + 1/2 u'Ru in
/// every mode of switching_times, and 1/2 x'Q_f x at the final time. Each
/// mode gets its own subsystem so that constraints may differ per mode;
/// constraints may be empty or hold one entry per mode.
ocp::SwitchedProblem makeLtiProblem(const Matrix& A, const Matrix& B, const Matrix& Q, const Matrix& R,
                                    const Matrix& Q_f, const Vector& x0, const std::vector<double>& switching_times,
                                    const std::vector<LtiModeConstraints>& constraints = {});

struct LtiPair {
  Matrix A, B;
};

/// Random pair with standard normal entries, redrawn until (A, B) is
/// controllable. Deterministic for a given seed.
LtiPair randomStabilizablePair(int state_dim, int input_dim, std::uint64_t seed);

/// Rank of the controllability matrix [B, AB, ..., A^{n-1}B].
int controllabilityRank(const Matrix& A, const Matrix& B);

}  // namespace fastslq::models
