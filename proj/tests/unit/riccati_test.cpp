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

#include <cmath>
#include <memory>
#include <random>

#include <doctest.h>

#include "central_difference.hpp"
#include "fastslq/riccati/algebraic_riccati.hpp"
#include "fastslq/riccati/projection.hpp"
#include "fastslq/riccati/riccati.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace fastslq;

namespace {

lq::LqNode unconstrainedNode(const Matrix& A, const Matrix& B, const Matrix& Q, const Matrix& R, double t = 0.0) {
  const int n = static_cast<int>(A.rows()), m = static_cast<int>(B.cols());
  lq::LqNode node;
  node.t = t;
  node.A = A;
  node.B = B;
  node.C = Matrix(0, n);
  node.D = Matrix(0, m);
  node.e = Vector(0);
  node.F = Matrix(0, n);
  node.h = Vector(0);
  node.q = 0.0;
  node.qv = Vector::Zero(n);
  node.r = Vector::Zero(m);
  node.P = Matrix::Zero(n, m);
  node.Q = Q;
  node.R = R;
  return node;
}

// Mode LQ model on a uniform grid with a zero nominal trajectory.
struct LtiMode {
  lq::ModeLq mode;
  std::shared_ptr<ocp::TrajectorySegment> nominal;
};

LtiMode ltiMode(const Matrix& A, const Matrix& B, const Matrix& Q, const Matrix& R, double t0, double t1,
                int intervals) {
  LtiMode out;
  out.nominal = std::make_shared<ocp::TrajectorySegment>();
  for (int k = 0; k <= intervals; ++k) {
    const double t = t0 + (t1 - t0) * k / intervals;
    out.mode.nodes.push_back(unconstrainedNode(A, B, Q, R, t));
    out.nominal->times.push_back(t);
    out.nominal->states.push_back(Vector::Zero(A.rows()));
    out.nominal->inputs.push_back(Vector::Zero(B.cols()));
  }
  out.mode.terminal = lq::TerminalLqNode{0.0, Vector::Zero(A.rows()), Matrix::Zero(A.rows(), A.rows())};
  return out;
}

riccati::BackwardSettings tight() {
  riccati::BackwardSettings s;
  s.integrator.abs_tol = 1e-12;
  s.integrator.rel_tol = 1e-12;
  return s;
}

}  // namespace

TEST_SUITE("riccati") {
  TEST_CASE("unconstrained projection leaves the model unchanged") {
    std::mt19937_64 rng(3);
    const Matrix A = testutil::gaussian(3, 3, rng), B = testutil::gaussian(3, 2, rng);
    lq::LqNode node = unconstrainedNode(A, B, testutil::spd(3, rng), testutil::spd(2, rng));
    node.qv = testutil::gaussianVector(3, rng);
    const auto c = riccati::projectConstraints(node, 100.0);
    CHECK(c.Dpinv.size() == 0);
    CHECK(c.Atilde == A);
    CHECK(c.Qtilde.isApprox(node.Q));
    CHECK(c.Rtilde.isApprox(node.R));
    CHECK(c.qtilde.isApprox(node.qv));
  }

  TEST_CASE("identity constraint matrix removes every input direction") {
    std::mt19937_64 rng(4);
    lq::LqNode node = unconstrainedNode(testutil::gaussian(2, 2, rng), testutil::gaussian(2, 2, rng),
                                        Matrix::Identity(2, 2), Matrix::Identity(2, 2));
    node.C = testutil::gaussian(2, 2, rng);
    node.D = Matrix::Identity(2, 2);
    node.e = Vector::Zero(2);
    const auto c = riccati::projectConstraints(node);
    CHECK((c.Dpinv - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((c.Dtilde - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(c.Rtilde.cwiseAbs().maxCoeff() < 1e-12);
  }

  TEST_CASE("right inverse and null-space projector hold for random full-row-rank draws") {
    std::mt19937_64 rng(11);
    for (int draw = 0; draw < 200; ++draw) {
      const int m = 2 + draw % 5;
      const int c1 = 1 + draw % m;
      lq::LqNode node = unconstrainedNode(testutil::gaussian(3, 3, rng), testutil::gaussian(3, m, rng),
                                          testutil::spd(3, rng), testutil::spd(m, rng));
      node.C = testutil::gaussian(c1, 3, rng);
      node.D = testutil::gaussian(c1, m, rng);
      node.e = testutil::gaussianVector(c1, rng);
      const auto c = riccati::projectConstraints(node);
      CHECK((node.D * c.Dpinv - Matrix::Identity(c1, c1)).cwiseAbs().maxCoeff() < 1e-10);
      CHECK((node.D * c.Dpinv * node.D - node.D).cwiseAbs().maxCoeff() < 1e-10);
      const Matrix& N = c.nullProjector;
      CHECK((N * N - N).cwiseAbs().maxCoeff() < 1e-8);
      CHECK((c.Rtilde - c.Rtilde.transpose()).cwiseAbs().maxCoeff() == 0.0);
      Eigen::SelfAdjointEigenSolver<Matrix> eig(c.Rtilde);
      CHECK(eig.eigenvalues().minCoeff() > -1e-10);
    }
  }

  TEST_CASE("rank-deficient constraints are rejected") {
    lq::LqNode node = unconstrainedNode(Matrix::Identity(2, 2), Matrix::Identity(2, 2), Matrix::Identity(2, 2),
                                        Matrix::Identity(2, 2));
    node.C = Matrix::Zero(2, 2);
    node.D = Matrix::Ones(2, 2);
    node.e = Vector::Zero(2);
    try {
      riccati::projectConstraints(node);
      FAIL("expected an exception");
    } catch (const SolverError& e) {
      CHECK(e.code() == ErrorCode::RankDeficientConstraint);
    }
  }

  TEST_CASE("state-only penalty enters Q and q with weight rho") {
    lq::LqNode node = unconstrainedNode(Matrix::Zero(2, 2), Matrix::Identity(2, 1), Matrix::Identity(2, 2),
                                        Matrix::Identity(1, 1));
    node.F = Matrix::Constant(1, 2, 1.0);
    node.h = Vector::Constant(1, 0.5);
    const auto c = riccati::projectConstraints(node, 10.0);
    CHECK(c.Qtilde.isApprox(Matrix::Identity(2, 2) + 10.0 * Matrix::Ones(2, 2)));
    CHECK(c.qtilde.isApprox(Vector::Constant(2, 5.0)));
  }

  TEST_CASE("packing round-trips the Riccati state") {
    std::mt19937_64 rng(5);
    riccati::RiccatiState st{testutil::symmetric(3, rng), testutil::gaussianVector(3, rng),
                             testutil::gaussianVector(3, rng), 1.25};
    const Vector packed = riccati::packRiccatiState(st);
    CHECK(packed.size() == riccati::packedRiccatiSize(3));
    const auto back = riccati::unpackRiccatiState(packed, 3);
    CHECK(back.S == st.S);
    CHECK(back.sv == st.sv);
    CHECK(back.se == st.se);
    CHECK(back.s == st.s);
  }

  TEST_CASE("zero value function and zero cost leave only Q in the derivative") {
    std::mt19937_64 rng(6);
    const Matrix Q = testutil::spd(3, rng);
    const auto node = unconstrainedNode(testutil::gaussian(3, 3, rng), testutil::gaussian(3, 2, rng), Q,
                                        testutil::spd(2, rng));
    const auto c = riccati::projectConstraints(node);
    const auto d = riccati::riccatiRhs(c, riccati::RiccatiState::zero(3));
    CHECK((-d.S - Q).cwiseAbs().maxCoeff() < 1e-14);
    CHECK(d.sv.isZero(0.0));
    CHECK(d.se.isZero(0.0));
    CHECK(d.s == 0.0);
  }

  TEST_CASE("scalar derivative matches the hand-written scalar Riccati equation") {
    const double a = 0.7, b = 1.3, q = 2.0, r = 0.4;
    const auto node = unconstrainedNode(Matrix::Constant(1, 1, a), Matrix::Constant(1, 1, b),
                                        Matrix::Constant(1, 1, q), Matrix::Constant(1, 1, r));
    const auto c = riccati::projectConstraints(node);
    for (double S : {0.0, 0.3, 1.7, 5.0}) {
      riccati::RiccatiState st = riccati::RiccatiState::zero(1);
      st.S(0, 0) = S;
      const double expected = 2.0 * a * S - b * b * S * S / r + q;
      CHECK(std::abs(-riccati::riccatiRhs(c, st).S(0, 0) - expected) < 1e-12);
    }
  }

  TEST_CASE("symmetric S stays exactly symmetric in the derivative") {
    std::mt19937_64 rng(8);
    lq::LqNode node = unconstrainedNode(testutil::gaussian(4, 4, rng), testutil::gaussian(4, 2, rng),
                                        testutil::spd(4, rng), testutil::spd(2, rng));
    node.P = 0.1 * testutil::gaussian(4, 2, rng);
    node.C = testutil::gaussian(1, 4, rng);
    node.D = testutil::gaussian(1, 2, rng);
    node.e = testutil::gaussianVector(1, rng);
    const auto c = riccati::projectConstraints(node);
    riccati::RiccatiState st{testutil::spd(4, rng), testutil::gaussianVector(4, rng),
                             testutil::gaussianVector(4, rng), 0.0};
    const auto d = riccati::riccatiRhs(c, st);
    CHECK(d.S == d.S.transpose());
  }

  TEST_CASE("non-finite Riccati state is reported") {
    const auto node = unconstrainedNode(Matrix::Identity(1, 1), Matrix::Identity(1, 1), Matrix::Identity(1, 1),
                                        Matrix::Identity(1, 1));
    const auto c = riccati::projectConstraints(node);
    riccati::RiccatiState st = riccati::RiccatiState::zero(1);
    st.S(0, 0) = std::nan("");
    try {
      riccati::riccatiRhs(c, st);
      FAIL("expected an exception");
    } catch (const SolverError& e) {
      CHECK(e.code() == ErrorCode::NonFinite);
    }
  }

  TEST_CASE("zero cost and zero final values give a zero value function") {
    auto m = ltiMode(Matrix::Identity(2, 2), Matrix::Identity(2, 1), Matrix::Zero(2, 2), Matrix::Identity(1, 1),
                     0.0, 1.0, 10);
    const auto vf = riccati::solvePartitionBackward(m.mode, riccati::RiccatiState::zero(2), m.nominal);
    for (double t : {0.0, 0.3, 1.0}) {
      const auto st = vf.stateAt(t);
      CHECK(st.S.isZero(0.0));
      CHECK(st.sv.isZero(0.0));
      CHECK(st.s == 0.0);
    }
  }

  TEST_CASE("scalar backward sweep matches the fixed-step oracle") {
    const Matrix A = Matrix::Constant(1, 1, 0.4), B = Matrix::Constant(1, 1, 1.0);
    const Matrix Q = Matrix::Constant(1, 1, 1.0), R = Matrix::Constant(1, 1, 0.5);
    auto m = ltiMode(A, B, Q, R, 0.0, 1.0, 4);
    riccati::RiccatiState finals = riccati::RiccatiState::zero(1);
    finals.S(0, 0) = 2.0;
    const auto vf = riccati::solvePartitionBackward(m.mode, finals, m.nominal, tight());
    const Matrix S0 = oracle::riccatiOdeRk4(A, B, Q, R, finals.S, 1.0, 1e-5);
    CHECK(std::abs(vf.stateAt(0.0).S(0, 0) - S0(0, 0)) / S0(0, 0) < 1e-8);
  }

  TEST_CASE("unconstrained LTI sweep reproduces the standard Riccati solution") {
    std::mt19937_64 rng(21);
    const Matrix A = testutil::gaussian(3, 3, rng), B = testutil::gaussian(3, 2, rng);
    const Matrix Q = testutil::spd(3, rng), R = testutil::spd(2, rng), Qf = testutil::spd(3, rng);
    auto m = ltiMode(A, B, Q, R, 0.0, 1.0, 4);
    riccati::RiccatiState finals = riccati::RiccatiState::zero(3);
    finals.S = Qf;
    const auto vf = riccati::solvePartitionBackward(m.mode, finals, m.nominal, tight());
    for (double t : {0.0, 0.5}) {
      const Matrix ref = oracle::riccatiOdeRk4(A, B, Q, R, Qf, 1.0 - t, 1e-5);
      CHECK(oracle::relativeError(vf.stateAt(t).S, ref) < 1e-8);
    }
  }

  TEST_CASE("S stays symmetric and positive semidefinite along the sweep") {
    std::mt19937_64 rng(22);
    const Matrix A = testutil::gaussian(4, 4, rng), B = testutil::gaussian(4, 2, rng);
    auto m = ltiMode(A, B, testutil::spd(4, rng), testutil::spd(2, rng), 0.0, 2.0, 8);
    riccati::RiccatiState finals = riccati::RiccatiState::zero(4);
    finals.S = testutil::spd(4, rng, 0.0);
    const auto vf = riccati::solvePartitionBackward(m.mode, finals, m.nominal);
    for (const auto& packed : vf.riccatiTrajectory().values()) {
      const auto st = riccati::unpackRiccatiState(packed, 4);
      CHECK(st.S == st.S.transpose());
      Eigen::SelfAdjointEigenSolver<Matrix> eig(st.S);
      CHECK(eig.eigenvalues().minCoeff() >= -1e-8);
    }
  }

  TEST_CASE("long horizon approaches the algebraic Riccati fixed point") {
    Matrix A(2, 2), B(2, 1);
    A << 0.0, 1.0, 0.0, 0.0;
    B << 0.0, 1.0;
    const Matrix Q = Matrix::Identity(2, 2), R = Matrix::Identity(1, 1);
    auto m = ltiMode(A, B, Q, R, 0.0, 30.0, 30);
    const auto vf = riccati::solvePartitionBackward(m.mode, riccati::RiccatiState::zero(2), m.nominal, tight());
    Matrix K0(1, 2);
    K0 << 1.0, 1.0;
    const Matrix S_are = oracle::newtonKleinman(A, B, Q, R, K0);
    CHECK((vf.stateAt(0.0).S - S_are).cwiseAbs().maxCoeff() < 1e-6);
  }

  TEST_CASE("Riccati blow-up is reported") {
    // Finite escape: dS/dtau = -1 - S^2 with a negative state weight.
    auto m = ltiMode(Matrix::Zero(1, 1), Matrix::Identity(1, 1), -Matrix::Identity(1, 1),
                     Matrix::Identity(1, 1), 0.0, 5.0, 5);
    try {
      riccati::solvePartitionBackward(m.mode, riccati::RiccatiState::zero(1), m.nominal);
      FAIL("expected an exception");
    } catch (const SolverError& e) {
      CHECK(e.code() == ErrorCode::RiccatiBlowup);
    }
  }

  TEST_CASE("final values shift the gradient by S times the nominal change") {
    std::mt19937_64 rng(31);
    const int n = 3;
    auto m = ltiMode(Matrix::Zero(n, n), Matrix::Identity(n, 1), Matrix::Zero(n, n), Matrix::Identity(1, 1), 1.0,
                     2.0, 2);
    riccati::RiccatiState finals{testutil::spd(n, rng), testutil::gaussianVector(n, rng),
                                 testutil::gaussianVector(n, rng), 0.7};
    const auto next = riccati::solvePartitionBackward(m.mode, finals, m.nominal);
    const auto at1 = next.stateAt(1.0);

    lq::TerminalLqNode terminal{0.1, testutil::gaussianVector(n, rng), testutil::spd(n, rng)};
    const Vector d = testutil::gaussianVector(n, rng);
    const auto f = riccati::finalValues(terminal, &next, d, 1.0, std::nullopt);
    CHECK(f.S.isApprox(terminal.Q + at1.S));
    CHECK(f.sv.isApprox(terminal.qv + at1.sv + at1.S * d));
    CHECK(f.se.isApprox(at1.se));
    const double V = at1.s + d.dot(at1.sv) + 0.5 * d.dot(at1.S * d) + d.dot(at1.se);
    CHECK(f.s == doctest::Approx(terminal.q + V));

    const auto f0 = riccati::finalValues(terminal, &next, Vector::Zero(n), 1.0, std::nullopt);
    CHECK(f0.sv.isApprox(terminal.qv + at1.sv));
    CHECK(f0.s == doctest::Approx(terminal.q + at1.s));
  }

  TEST_CASE("the heuristic supplies final values of the last partition") {
    ocp::QuadraticValue h;
    h.x_ref = Vector::Zero(2);
    h.value = 3.0;
    h.gradient = Vector::Constant(2, 1.0);
    h.hessian = 2.0 * Matrix::Identity(2, 2);
    lq::TerminalLqNode terminal{0.0, Vector::Zero(2), Matrix::Zero(2, 2)};
    const Vector x = Vector::Constant(2, 0.5);
    const auto f = riccati::finalValues(terminal, nullptr, x, 1.0, h);
    CHECK(f.S.isApprox(h.hessian));
    CHECK(f.sv.isApprox(h.gradientAt(x)));
    CHECK(f.s == doctest::Approx(h.evaluate(x)));
    CHECK(f.se.isZero(0.0));
  }

  TEST_CASE("value function evaluation is consistent with its gradient") {
    std::mt19937_64 rng(41);
    const int n = 3;
    auto m = ltiMode(testutil::gaussian(n, n, rng), testutil::gaussian(n, 2, rng), testutil::spd(n, rng),
                     testutil::spd(2, rng), 0.0, 1.0, 4);
    riccati::RiccatiState finals{testutil::spd(n, rng), testutil::gaussianVector(n, rng),
                                 testutil::gaussianVector(n, rng), 0.5};
    const auto vf = riccati::solvePartitionBackward(m.mode, finals, m.nominal);

    const auto st = vf.stateAt(0.4);
    const auto at_nominal = vf.evaluate(Vector::Zero(n), 0.4);
    CHECK(at_nominal.value == doctest::Approx(st.s));
    CHECK(at_nominal.gradient.isApprox(st.sv + st.se));
    CHECK(at_nominal.hessian.isApprox(st.S));

    for (int k = 0; k < 20; ++k) {
      const Vector x = testutil::gaussianVector(n, rng);
      const Vector fd = oracle::centralGradient([&](const Vector& y) { return vf.evaluate(y, 0.4).value; }, x);
      CHECK((vf.evaluate(x, 0.4).gradient - fd).cwiseAbs().maxCoeff() < 1e-7);
    }
    CHECK_THROWS_AS(vf.evaluate(Vector::Zero(n), 1.5), SolverError);
  }

  TEST_CASE("scalar algebraic Riccati equation has S = 1 and K = -1") {
    const auto sol = riccati::solveAlgebraicRiccati(Matrix::Zero(1, 1), Matrix::Identity(1, 1),
                                                    Matrix::Identity(1, 1), Matrix::Identity(1, 1));
    CHECK(sol.S(0, 0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(sol.K(0, 0) == doctest::Approx(-1.0).epsilon(1e-12));
  }

  TEST_CASE("stable system without input weight has zero Riccati solution") {
    const auto sol = riccati::solveAlgebraicRiccati(-Matrix::Identity(2, 2), Matrix::Zero(2, 1), Matrix::Zero(2, 2),
                                                    Matrix::Identity(1, 1));
    CHECK(sol.S.cwiseAbs().maxCoeff() < 1e-10);
  }

  TEST_CASE("double integrator matches the Newton-Kleinman solution") {
    Matrix A(2, 2), B(2, 1), K0(1, 2);
    A << 0.0, 1.0, 0.0, 0.0;
    B << 0.0, 1.0;
    K0 << 1.0, 1.0;
    const auto sol =
        riccati::solveAlgebraicRiccati(A, B, Matrix::Identity(2, 2), Matrix::Identity(1, 1));
    const Matrix ref = oracle::newtonKleinman(A, B, Matrix::Identity(2, 2), Matrix::Identity(1, 1), K0);
    CHECK((sol.S - ref).cwiseAbs().maxCoeff() < 1e-8);
  }

  TEST_CASE("random stabilizable pairs give Hurwitz closed loops") {
    std::mt19937_64 rng(51);
    for (int draw = 0; draw < 20; ++draw) {
      const Matrix A = testutil::gaussian(4, 4, rng), B = testutil::gaussian(4, 2, rng);
      const auto sol = riccati::solveAlgebraicRiccati(A, B, Matrix::Identity(4, 4), Matrix::Identity(2, 2));
      Eigen::EigenSolver<Matrix> eig(A + B * sol.K);
      CHECK(eig.eigenvalues().real().maxCoeff() < 0.0);
      const Matrix residual = A.transpose() * sol.S + sol.S * A - sol.S * B * B.transpose() * sol.S +
                              Matrix::Identity(4, 4);
      CHECK(residual.cwiseAbs().maxCoeff() < 1e-8 * (1.0 + sol.S.norm()));
    }
  }

  TEST_CASE("uncontrollable unstable modes are rejected") {
    try {
      riccati::solveAlgebraicRiccati(Matrix::Identity(1, 1), Matrix::Zero(1, 1), Matrix::Identity(1, 1),
                                     Matrix::Identity(1, 1));
      FAIL("expected an exception");
    } catch (const SolverError& e) {
      CHECK(e.code() == ErrorCode::Unstabilizable);
    }
  }
}
