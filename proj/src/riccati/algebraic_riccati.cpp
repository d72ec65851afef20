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

#include "fastslq/riccati/algebraic_riccati.hpp"

#include <cmath>

namespace fastslq::riccati {

namespace {

constexpr int kMaxSignIterations = 100;
constexpr double kSignTolerance = 1e-13;

}  // namespace

AlgebraicRiccatiSolution solveAlgebraicRiccati(const Matrix& A, const Matrix& B, const Matrix& Q, const Matrix& R) {
  const Eigen::Index n = A.rows();
  const Eigen::Index m = B.cols();
  if (A.cols() != n || B.rows() != n || Q.rows() != n || Q.cols() != n || R.rows() != m || R.cols() != m) {
    fail(ErrorCode::DimensionMismatch, "algebraic Riccati: inconsistent dimensions");
  }
  Eigen::LLT<Matrix> r_llt(R);
  if (r_llt.info() != Eigen::Success) fail(ErrorCode::InvalidArgument, "algebraic Riccati: R must be positive definite");
  const Matrix G = B * r_llt.solve(B.transpose());

  Matrix Z(2 * n, 2 * n);
  Z << A, -G, -Q, -A.transpose();

  bool converged = false;
  for (int it = 0; it < kMaxSignIterations; ++it) {
    Eigen::PartialPivLU<Matrix> lu(Z);
    const double det = std::abs(lu.determinant());
    if (!(det > 0.0) || !std::isfinite(det)) {
      fail(ErrorCode::Unstabilizable, "Hamiltonian has eigenvalues on the imaginary axis");
    }
    const double c = std::pow(det, -1.0 / static_cast<double>(2 * n));
    const Matrix next = 0.5 * (c * Z + lu.inverse() / c);
    const double change = (next - Z).norm();
    Z = next;
    if (!Z.allFinite()) fail(ErrorCode::Unstabilizable, "sign iteration diverged");
    if (change <= kSignTolerance * Z.norm()) {
      converged = true;
      break;
    }
  }
  if (!converged) fail(ErrorCode::Unstabilizable, "sign iteration did not converge");

  const Matrix I = Matrix::Identity(n, n);
  Matrix lhs(2 * n, n), rhs(2 * n, n);
  lhs << Z.topRightCorner(n, n), Z.bottomRightCorner(n, n) + I;
  rhs << Z.topLeftCorner(n, n) + I, Z.bottomLeftCorner(n, n);
  AlgebraicRiccatiSolution out;
  out.S = lhs.colPivHouseholderQr().solve(-rhs);
  symmetrize(out.S);
  out.K = -r_llt.solve(B.transpose() * out.S);

  if (!out.S.allFinite()) fail(ErrorCode::Unstabilizable, "algebraic Riccati solution is not finite");
  const Eigen::VectorXcd eig = (A + B * out.K).eigenvalues();
  if (eig.real().maxCoeff() >= 0.0) fail(ErrorCode::Unstabilizable, "closed loop A + BK is not Hurwitz");
  return out;
}

}  // namespace fastslq::riccati
