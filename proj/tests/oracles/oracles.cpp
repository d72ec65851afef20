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

#include "oracles.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

namespace oracle {

Mat expm(const Mat& A) {
  const double norm = A.cwiseAbs().rowwise().sum().maxCoeff();
  int squarings = 0;
  if (norm > 0.5) squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
  const Mat As = A / std::pow(2.0, squarings);
  Mat term = Mat::Identity(A.rows(), A.cols());
  Mat sum = term;
  for (int k = 1; k <= 20; ++k) {
    term = (term * As / static_cast<double>(k)).eval();
    sum += term;
  }
  for (int i = 0; i < squarings; ++i) sum = (sum * sum).eval();
  return sum;
}

Mat riccatiOdeRk4(const Mat& A, const Mat& B, const Mat& Q, const Mat& R, const Mat& Qf, double horizon,
                  double step) {
  const Mat BRB = B * R.inverse() * B.transpose();
  // Backward time tau = T - t: dS/dtau = A'S + SA - S BRB S + Q.
  auto f = [&](const Mat& S) -> Mat { return A.transpose() * S + S * A - S * BRB * S + Q; };
  const long n = std::lround(horizon / step);
  const double h = horizon / static_cast<double>(n);
  Mat S = Qf;
  for (long k = 0; k < n; ++k) {
    const Mat k1 = f(S);
    const Mat k2 = f(S + 0.5 * h * k1);
    const Mat k3 = f(S + 0.5 * h * k2);
    const Mat k4 = f(S + h * k3);
    S += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return 0.5 * (S + S.transpose());
}

double lqrCostRk4(const Mat& A, const Mat& B, const Mat& Q, const Mat& R, const Mat& Qf, const Vec& x0,
                  double horizon, double step) {
  const Mat S = riccatiOdeRk4(A, B, Q, R, Qf, horizon, step);
  return 0.5 * x0.dot(S * x0);
}

Mat newtonKleinman(const Mat& A, const Mat& B, const Mat& Q, const Mat& R, const Mat& K0, int iterations) {
  const long n = A.rows();
  const Mat I = Mat::Identity(n, n);
  Mat K = K0;
  Mat S = Mat::Zero(n, n);
  for (int it = 0; it < iterations; ++it) {
    const Mat Ac = A - B * K;
    const Mat rhs = -(Q + K.transpose() * R * K);
    // vec(Ac'S + S Ac) = (I kron Ac' + Ac' kron I) vec(S)
    Mat L = Mat::Zero(n * n, n * n);
    for (long i = 0; i < n; ++i) {
      for (long j = 0; j < n; ++j) {
        L.block(i * n, j * n, n, n) += I(i, j) * Ac.transpose();
        L.block(i * n, j * n, n, n) += Ac.transpose()(i, j) * I;
      }
    }
    const Vec s = L.fullPivLu().solve(Eigen::Map<const Vec>(rhs.data(), n * n));
    const Mat S_next = Eigen::Map<const Mat>(s.data(), n, n);
    const double change = (S_next - S).norm();
    S = 0.5 * (S_next + S_next.transpose());
    K = R.ldlt().solve(B.transpose() * S);
    if (change < 1e-14 * (1.0 + S.norm())) break;
  }
  return S;
}

KktSolution kktEuler(const Mat& A, const Mat& B, const Mat& Q, const Mat& R, const Mat& Qf, const Vec& x0,
                     const std::vector<double>& switching_times,
                     const std::vector<std::optional<ModeConstraint>>& constraints, int N) {
  const int n = static_cast<int>(A.rows());
  const int m = static_cast<int>(B.cols());
  const double t0 = switching_times.front();
  const double h = (switching_times.back() - t0) / N;

  auto modeOf = [&](double t) {
    std::size_t i = 0;
    while (i + 2 < switching_times.size() && t >= switching_times[i + 1] - 1e-12) ++i;
    return i;
  };

  // Variables: x_0..x_N then u_0..u_{N-1}.
  const int nx = n * (N + 1);
  const int nz = nx + m * N;
  auto xi = [&](int k) { return n * k; };
  auto ui = [&](int k) { return nx + m * k; };

  std::vector<Eigen::Triplet<double>> H, G;
  std::vector<double> g_rhs;
  auto addBlock = [](std::vector<Eigen::Triplet<double>>& trip, int r0, int c0, const Mat& M) {
    for (int r = 0; r < M.rows(); ++r) {
      for (int c = 0; c < M.cols(); ++c) {
        if (M(r, c) != 0.0) trip.emplace_back(r0 + r, c0 + c, M(r, c));
      }
    }
  };
  for (int k = 0; k < N; ++k) {
    addBlock(H, xi(k), xi(k), h * Q);
    addBlock(H, ui(k), ui(k), h * R);
  }
  addBlock(H, xi(N), xi(N), Qf);

  int row = 0;
  // x_0 = x0
  addBlock(G, row, xi(0), Mat::Identity(n, n));
  for (int i = 0; i < n; ++i) g_rhs.push_back(x0[i]);
  row += n;
  // x_{k+1} - (I + hA) x_k - h B u_k = 0
  const Mat Ad = Mat::Identity(n, n) + h * A;
  for (int k = 0; k < N; ++k) {
    addBlock(G, row, xi(k + 1), Mat::Identity(n, n));
    addBlock(G, row, xi(k), -Ad);
    addBlock(G, row, ui(k), -h * B);
    for (int i = 0; i < n; ++i) g_rhs.push_back(0.0);
    row += n;
  }
  for (int k = 0; k < N; ++k) {
    const auto& c = constraints.empty() ? std::nullopt : constraints[modeOf(t0 + k * h)];
    if (!c) continue;
    addBlock(G, row, xi(k), c->C);
    addBlock(G, row, ui(k), c->D);
    for (int i = 0; i < c->e.size(); ++i) g_rhs.push_back(-c->e[i]);
    row += static_cast<int>(c->D.rows());
  }
  const int nc = row;

  // [H G'; G 0] [z; lambda] = [0; g]
  std::vector<Eigen::Triplet<double>> K;
  K.insert(K.end(), H.begin(), H.end());
  for (const auto& t : G) {
    K.emplace_back(nz + t.row(), t.col(), t.value());
    K.emplace_back(t.col(), nz + t.row(), t.value());
  }
  Eigen::SparseMatrix<double> KKT(nz + nc, nz + nc);
  KKT.setFromTriplets(K.begin(), K.end());
  Vec rhs = Vec::Zero(nz + nc);
  for (int i = 0; i < nc; ++i) rhs[nz + i] = g_rhs[static_cast<std::size_t>(i)];

  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(KKT);
  if (lu.info() != Eigen::Success) throw std::runtime_error("KKT factorization failed");
  const Vec z = lu.solve(rhs);

  KktSolution out;
  for (int k = 0; k <= N; ++k) {
    out.times.push_back(t0 + k * h);
    out.states.push_back(z.segment(xi(k), n));
    if (k < N) out.inputs.push_back(z.segment(ui(k), m));
  }
  Eigen::SparseMatrix<double> Hs(nz, nz);
  Hs.setFromTriplets(H.begin(), H.end());
  const Vec zz = z.head(nz);
  out.cost = 0.5 * zz.dot(Hs * zz);
  return out;
}

std::vector<Vec> richardsonStates(const KktSolution& coarse, const KktSolution& fine) {
  const std::size_t N = coarse.inputs.size();
  if (fine.inputs.size() != 2 * N) throw std::invalid_argument("fine grid must halve the coarse step");
  std::vector<Vec> out;
  for (std::size_t k = 0; k <= N; ++k) out.push_back(2.0 * fine.states[2 * k] - coarse.states[k]);
  return out;
}

}  // namespace oracle
