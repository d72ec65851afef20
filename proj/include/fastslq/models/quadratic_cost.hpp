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

#include <functional>
#include <optional>

#include "fastslq/ocp/models.hpp"

namespace fastslq::models {

// L(x, u, t) = 1/2 (x - x_ref(t))'Q(x - x_ref(t)) + 1/2 (u - u_ref)'R(u - u_ref)
// Phi(x)     = 1/2 (x - x_goal)'Q_f(x - x_goal)
// x_ref is constant unless a reference function is given.
class QuadraticCost : public ocp::StageCost {
 public:
  using ReferenceFunction = std::function<Vector(double)>;

  QuadraticCost(Matrix Q, Matrix R, Vector x_ref, Vector u_ref, Matrix Q_f = Matrix(), Vector x_goal = Vector());
  QuadraticCost(Matrix Q, Matrix R, ReferenceFunction x_ref, Vector u_ref, Matrix Q_f, Vector x_goal);

  double intermediate(const Vector& x, const Vector& u, double t) const override;
  double terminal(const Vector& x) const override;
  std::optional<ocp::CostExpansion> intermediateExpansion(const Vector& x, const Vector& u, double t) const override;
  std::optional<ocp::TerminalCostExpansion> terminalExpansion(const Vector& x) const override;

  const Matrix& Q() const noexcept { return Q_; }
  const Matrix& R() const noexcept { return R_; }
  const Matrix& Qf() const noexcept { return Qf_; }
  Vector stateReference(double t) const { return x_ref_fn_ ? x_ref_fn_(t) : x_ref_; }
  const Vector& inputReference() const noexcept { return u_ref_; }

 private:
  Matrix Q_, R_, Qf_;
  Vector x_ref_, u_ref_, x_goal_;
  ReferenceFunction x_ref_fn_;
};

}  // namespace fastslq::models
