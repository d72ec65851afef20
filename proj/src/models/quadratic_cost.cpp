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

#include "fastslq/models/quadratic_cost.hpp"

namespace fastslq::models {

QuadraticCost::QuadraticCost(Matrix Q, Matrix R, Vector x_ref, Vector u_ref, Matrix Q_f, Vector x_goal)
    : Q_(std::move(Q)), R_(std::move(R)), Qf_(std::move(Q_f)), x_ref_(std::move(x_ref)), u_ref_(std::move(u_ref)),
      x_goal_(std::move(x_goal)) {
  const Eigen::Index n = Q_.rows();
  const Eigen::Index m = R_.rows();
  if (Q_.cols() != n || R_.cols() != m || x_ref_.size() != n || u_ref_.size() != m) {
    fail(ErrorCode::DimensionMismatch, "quadratic cost: inconsistent dimensions");
  }
  if (Qf_.size() == 0) Qf_ = Matrix::Zero(n, n);
  if (x_goal_.size() == 0) x_goal_ = x_ref_;
  if (Qf_.rows() != n || Qf_.cols() != n || x_goal_.size() != n) {
    fail(ErrorCode::DimensionMismatch, "quadratic cost: inconsistent terminal dimensions");
  }
}

QuadraticCost::QuadraticCost(Matrix Q, Matrix R, ReferenceFunction x_ref, Vector u_ref, Matrix Q_f, Vector x_goal)
    : QuadraticCost(std::move(Q), std::move(R), x_goal, std::move(u_ref), std::move(Q_f), x_goal) {
  if (!x_ref) fail(ErrorCode::InvalidArgument, "quadratic cost: empty reference function");
  x_ref_fn_ = std::move(x_ref);
}

double QuadraticCost::intermediate(const Vector& x, const Vector& u, double t) const {
  const Vector dx = x - stateReference(t);
  const Vector du = u - u_ref_;
  return 0.5 * dx.dot(Q_ * dx) + 0.5 * du.dot(R_ * du);
}

double QuadraticCost::terminal(const Vector& x) const {
  const Vector dx = x - x_goal_;
  return 0.5 * dx.dot(Qf_ * dx);
}

std::optional<ocp::CostExpansion> QuadraticCost::intermediateExpansion(const Vector& x, const Vector& u,
                                                                       double t) const {
  ocp::CostExpansion out;
  out.value = intermediate(x, u, t);
  out.dx = Q_ * (x - stateReference(t));
  out.du = R_ * (u - u_ref_);
  out.dxx = Q_;
  out.duu = R_;
  out.dxu = Matrix::Zero(x.size(), u.size());
  return out;
}

std::optional<ocp::TerminalCostExpansion> QuadraticCost::terminalExpansion(const Vector& x) const {
  ocp::TerminalCostExpansion out;
  out.value = terminal(x);
  out.dx = Qf_ * (x - x_goal_);
  out.dxx = Qf_;
  return out;
}

}  // namespace fastslq::models
