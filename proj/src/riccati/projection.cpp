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

#include "fastslq/riccati/projection.hpp"

#include <algorithm>
#include <sstream>

namespace fastslq::riccati {

namespace {

constexpr double kMaxCondition = 1e12;
// Right-inverse residual accepted after the Tikhonov retry.
constexpr double kMaxRegularizedResidual = 1e-6;

bool wellConditioned(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(m, Eigen::EigenvaluesOnly);
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  return lo > 0.0 && hi / lo <= kMaxCondition;
}

template <typename A, typename B>
void lerp(Matrix& out, const A& a, const B& b, double w, double s) {
  out.noalias() = w * a + s * b;
}

}  // namespace

ProjectedLqCoefficients projectConstraints(const lq::LqNode& node, double rho) {
  const Eigen::Index n = node.A.rows();
  const Eigen::Index m = node.B.cols();
  const Eigen::Index c1 = node.D.rows();

  ProjectedLqCoefficients out;
  out.t = node.t;
  out.B = node.B;
  out.P = node.P;
  out.R = node.R;
  out.r = node.r;
  out.q = node.q;

  Eigen::LLT<Matrix> r_llt(node.R);
  if (r_llt.info() != Eigen::Success) fail(ErrorCode::RankDeficientConstraint, "input Hessian R is not positive definite");
  out.Rinv = r_llt.solve(Matrix::Identity(m, m));
  symmetrize(out.Rinv);

  if (c1 == 0) {
    out.Dpinv.resize(m, 0);
    out.Atilde = node.A;
    out.Ctilde = Matrix::Zero(m, n);
    out.Dtilde = Matrix::Zero(m, m);
    out.nullProjector = Matrix::Identity(m, m);
    out.etilde = Vector::Zero(m);
    out.Qtilde = node.Q;
    out.qtilde = node.qv;
    out.Rtilde = node.R;
  } else {
    const Matrix RinvDt = out.Rinv * node.D.transpose();
    Matrix M = node.D * RinvDt;
    symmetrize(M);
    const bool regularized = !wellConditioned(M);
    if (regularized) M.diagonal().array() += 1e-10 * M.trace() / static_cast<double>(c1);
    Eigen::LLT<Matrix> m_llt(M);
    const Matrix Minv = m_llt.solve(Matrix::Identity(c1, c1));
    out.Dpinv = RinvDt * Minv;
    // One refinement step on the right-inverse residual.
    const Matrix residual = Matrix::Identity(c1, c1) - node.D * out.Dpinv;
    out.Dpinv += RinvDt * (Minv * residual);
    if (regularized && (Matrix::Identity(c1, c1) - node.D * out.Dpinv).cwiseAbs().maxCoeff() > kMaxRegularizedResidual) {
      std::ostringstream msg;
      msg << "D R^-1 D' is rank deficient at t = " << node.t;
      fail(ErrorCode::RankDeficientConstraint, msg.str());
    }
    out.Ctilde = out.Dpinv * node.C;
    out.Dtilde = out.Dpinv * node.D;
    out.etilde = out.Dpinv * node.e;
    out.Atilde = node.A - node.B * out.Ctilde;
    out.nullProjector = Matrix::Identity(m, m) - out.Dtilde;
    const Matrix PC = node.P * out.Ctilde;
    out.Qtilde = node.Q + out.Ctilde.transpose() * node.R * out.Ctilde - PC - PC.transpose();
    out.qtilde = node.qv - out.Ctilde.transpose() * node.r;
    out.Rtilde = out.nullProjector.transpose() * node.R * out.nullProjector;
  }
  if (node.F.rows() > 0) {
    out.Qtilde += rho * node.F.transpose() * node.F;
    out.qtilde += rho * node.F.transpose() * node.h;
  }
  symmetrize(out.Qtilde);
  symmetrize(out.Rtilde);
  return out;
}

void interpolateProjected(const std::vector<ProjectedLqCoefficients>& nodes, double t, ProjectedLqCoefficients& out) {
  if (nodes.empty()) fail(ErrorCode::OutOfSpan, "no projected coefficients");
  if (nodes.size() == 1) {
    out = nodes.front();
    return;
  }
  constexpr double eps = 1e-9;
  if (t < nodes.front().t - eps || t > nodes.back().t + eps) {
    std::ostringstream msg;
    msg << "t = " << t << " outside coefficient span [" << nodes.front().t << ", " << nodes.back().t << "]";
    fail(ErrorCode::OutOfSpan, msg.str());
  }
  t = std::clamp(t, nodes.front().t, nodes.back().t);
  auto it = std::upper_bound(nodes.begin(), nodes.end(), t,
                             [](double v, const ProjectedLqCoefficients& c) { return v < c.t; });
  std::size_t k = it == nodes.begin() ? 0 : static_cast<std::size_t>(it - nodes.begin()) - 1;
  k = std::min(k, nodes.size() - 2);
  const auto& a = nodes[k];
  const auto& b = nodes[k + 1];
  const double s = (t - a.t) / (b.t - a.t);
  const double w = 1.0 - s;
  out.t = t;
  lerp(out.Dpinv, a.Dpinv, b.Dpinv, w, s);
  lerp(out.Atilde, a.Atilde, b.Atilde, w, s);
  lerp(out.Ctilde, a.Ctilde, b.Ctilde, w, s);
  lerp(out.Dtilde, a.Dtilde, b.Dtilde, w, s);
  lerp(out.nullProjector, a.nullProjector, b.nullProjector, w, s);
  out.etilde.noalias() = w * a.etilde + s * b.etilde;
  lerp(out.Qtilde, a.Qtilde, b.Qtilde, w, s);
  out.qtilde.noalias() = w * a.qtilde + s * b.qtilde;
  lerp(out.Rtilde, a.Rtilde, b.Rtilde, w, s);
  lerp(out.B, a.B, b.B, w, s);
  lerp(out.P, a.P, b.P, w, s);
  lerp(out.R, a.R, b.R, w, s);
  lerp(out.Rinv, a.Rinv, b.Rinv, w, s);
  out.r.noalias() = w * a.r + s * b.r;
  out.q = w * a.q + s * b.q;
}

}  // namespace fastslq::riccati
