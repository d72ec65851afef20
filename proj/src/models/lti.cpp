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

#include "fastslq/models/lti.hpp"

#include <memory>
#include <random>

#include "fastslq/models/quadratic_cost.hpp"

namespace fastslq::models {

LtiSubsystem::LtiSubsystem(Matrix A, Matrix B, std::optional<AffineStateInputConstraint> constraint,
                           std::optional<AffineStateConstraint> state_constraint)
    : A_(std::move(A)), B_(std::move(B)), constraint_(std::move(constraint)),
      state_constraint_(std::move(state_constraint)) {
  const Eigen::Index n = A_.rows();
  const Eigen::Index m = B_.cols();
  if (A_.cols() != n || B_.rows() != n) fail(ErrorCode::DimensionMismatch, "LTI: A and B are inconsistent");
  if (constraint_) {
    const auto& c = *constraint_;
    if (c.C.cols() != n || c.D.cols() != m || c.C.rows() != c.D.rows() || c.e.size() != c.C.rows()) {
      fail(ErrorCode::DimensionMismatch, "LTI: state-input constraint is inconsistent");
    }
  }
  if (state_constraint_) {
    const auto& c = *state_constraint_;
    if (c.F.cols() != n || c.h.size() != c.F.rows()) {
      fail(ErrorCode::DimensionMismatch, "LTI: state constraint is inconsistent");
    }
  }
}

Vector LtiSubsystem::dynamics(const Vector& x, const Vector& u, double) const { return A_ * x + B_ * u; }

std::optional<ocp::DynamicsJacobian> LtiSubsystem::dynamicsJacobian(const Vector&, const Vector&, double) const {
  return ocp::DynamicsJacobian{A_, B_};
}

Vector LtiSubsystem::stateInputConstraint(const Vector& x, const Vector& u, double) const {
  if (!constraint_) return Vector(0);
  return constraint_->C * x + constraint_->D * u + constraint_->e;
}

std::optional<ocp::ConstraintJacobian> LtiSubsystem::stateInputConstraintJacobian(const Vector&, const Vector&,
                                                                                  double) const {
  if (!constraint_) return ocp::ConstraintJacobian{Matrix(0, A_.rows()), Matrix(0, B_.cols())};
  return ocp::ConstraintJacobian{constraint_->C, constraint_->D};
}

Vector LtiSubsystem::stateOnlyConstraint(const Vector& x, double) const {
  if (!state_constraint_) return Vector(0);
  return state_constraint_->F * x + state_constraint_->h;
}

std::optional<Matrix> LtiSubsystem::stateOnlyConstraintJacobian(const Vector&, double) const {
  if (!state_constraint_) return Matrix(0, A_.rows());
  return state_constraint_->F;
}

ocp::SwitchedProblem makeLtiProblem(const Matrix& A, const Matrix& B, const Matrix& Q, const Matrix& R,
                                    const Matrix& Q_f, const Vector& x0, const std::vector<double>& switching_times,
                                    const std::vector<LtiModeConstraints>& constraints) {
  if (switching_times.size() < 2) fail(ErrorCode::InvalidArgument, "LTI problem needs at least one mode");
  const std::size_t I = switching_times.size() - 1;
  if (!constraints.empty() && constraints.size() != I) {
    fail(ErrorCode::DimensionMismatch, "LTI problem: one constraint entry per mode expected");
  }
  const Eigen::Index n = A.rows();
  const Eigen::Index m = B.cols();
  std::vector<ocp::SubsystemPtr> subsystems;
  std::vector<ocp::StageCostPtr> costs;
  std::vector<int> ids;
  for (std::size_t i = 0; i < I; ++i) {
    const LtiModeConstraints c = constraints.empty() ? LtiModeConstraints{} : constraints[i];
    subsystems.push_back(std::make_shared<LtiSubsystem>(A, B, c.state_input, c.state_only));
    const Matrix terminal = i + 1 == I ? Q_f : Matrix::Zero(n, n);
    costs.push_back(std::make_shared<QuadraticCost>(Q, R, Vector::Zero(n), Vector::Zero(m), terminal));
    ids.push_back(static_cast<int>(i));
  }
  return ocp::SwitchedProblem(ocp::ModeSchedule(switching_times, ids), std::move(subsystems), std::move(costs), x0);
}

int controllabilityRank(const Matrix& A, const Matrix& B) {
  const Eigen::Index n = A.rows();
  const Eigen::Index m = B.cols();
  Matrix ctrb(n, n * m);
  Matrix block = B;
  for (Eigen::Index k = 0; k < n; ++k) {
    ctrb.middleCols(k * m, m) = block;
    block = A * block;
  }
  Eigen::FullPivLU<Matrix> lu(ctrb);
  lu.setThreshold(1e-9);
  return static_cast<int>(lu.rank());
}

LtiPair randomStabilizablePair(int state_dim, int input_dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (;;) {
    LtiPair p{Matrix(state_dim, state_dim), Matrix(state_dim, input_dim)};
    for (Eigen::Index i = 0; i < p.A.size(); ++i) p.A.data()[i] = normal(rng);
    for (Eigen::Index i = 0; i < p.B.size(); ++i) p.B.data()[i] = normal(rng);
    if (controllabilityRank(p.A, p.B) == state_dim) return p;
  }
}

}  // namespace fastslq::models
