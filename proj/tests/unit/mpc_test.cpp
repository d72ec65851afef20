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
#include <sstream>

#include <doctest.h>

#include "fastslq/models/lti.hpp"
#include "fastslq/models/planar_mode_factory.hpp"
#include "fastslq/models/quadratic_cost.hpp"
#include "fastslq/mpc/closed_loop.hpp"
#include "fastslq/mpc/mpc.hpp"
#include "fastslq/mpc/terminal_lqr.hpp"
#include "oracles.hpp"

using namespace fastslq;

namespace {

// Same LTI subsystem and quadratic cost for every mode type.
class LtiFactory : public mpc::ModeFactory {
 public:
  LtiFactory(Matrix A, Matrix B, Matrix Q, Matrix R) : A_(std::move(A)), B_(std::move(B)), Q_(std::move(Q)), R_(std::move(R)) {}
  int stateDim() const override { return static_cast<int>(A_.rows()); }
  int inputDim() const override { return static_cast<int>(B_.cols()); }
  ocp::SubsystemPtr makeSubsystem(int, double, double) const override { return terminalSubsystem(); }
  ocp::StageCostPtr makeCost(int, double, double) const override {
    return std::make_shared<models::QuadraticCost>(Q_, R_, Vector::Zero(stateDim()), Vector::Zero(inputDim()));
  }
  ocp::SubsystemPtr terminalSubsystem() const override { return std::make_shared<models::LtiSubsystem>(A_, B_); }
  Vector nominalInput(int) const override { return Vector::Zero(inputDim()); }
  Vector terminalNominalInput() const override { return Vector::Zero(inputDim()); }
  Matrix lqrStateWeight() const override { return Q_; }
  Matrix lqrInputWeight() const override { return R_; }

  Matrix A_, B_, Q_, R_;
};

struct LtiSetup {
  Matrix A{2, 2}, B{2, 1};
  Matrix Q = Matrix::Identity(2, 2), R = Matrix::Identity(1, 1);
  std::shared_ptr<LtiFactory> factory;
  mpc::GaitPattern gait{{0, 1}, {0.4, 0.4}};
  mpc::MpcSettings settings;

  LtiSetup() {
    A << 0.0, 1.0, 0.5, -0.1;
    B << 0.0, 1.0;
    factory = std::make_shared<LtiFactory>(A, B, Q, R);
    settings.solver.rollout.integrator = {1e-11, 1e-11, 0.005};
    settings.solver.backward.integrator = {1e-11, 1e-11};
    settings.solver.convergence_tol = 1e-10;
    settings.initial_iterations = 5;
  }
};

// Optimal cost of the LTI problem over [0, T] with running cost
// 1/2 x'Qx + 1/2 u'Ru and terminal 1/2 (x - r)'S(x - r), S the ARE solution:
// the quadratic part stays S, the linear part obeys -dsv/dt = Acl' sv.
double ltiOptimalCost(const LtiSetup& s, const Matrix& S, const Vector& r, const Vector& x0, double T) {
  const Matrix Acl = s.A - s.B * s.R.inverse() * s.B.transpose() * S;
  const Matrix G = s.B * s.R.inverse() * s.B.transpose();
  const Vector svT = -S * r;
  const int N = 20000;
  double integral = 0.0;
  for (int k = 0; k <= N; ++k) {
    const double tau = T * k / N;  // time to go
    const Vector sv = oracle::expm(Acl.transpose() * tau) * svT;
    const double w = (k == 0 || k == N) ? 0.5 : 1.0;
    integral += w * sv.dot(G * sv) * T / N;
  }
  const Vector sv0 = oracle::expm(Acl.transpose() * T) * svT;
  const double s0 = 0.5 * r.dot(S * r) - 0.5 * integral;
  return 0.5 * x0.dot(S * x0) + x0.dot(sv0) + s0;
}

}  // namespace

TEST_SUITE("mpc") {
  TEST_CASE("gait pattern validation") {
    mpc::GaitPattern g{{0, 1}, {0.4, 0.3}};
    CHECK_NOTHROW(g.validate());
    CHECK(g.shortestPhase() == 0.3);
    CHECK_THROWS_AS((mpc::GaitPattern{{}, {}}.validate()), SolverError);
    CHECK_THROWS_AS((mpc::GaitPattern{{0}, {0.0}}.validate()), SolverError);
    CHECK_THROWS_AS((mpc::GaitPattern{{0, 1}, {0.4}}.validate()), SolverError);
  }

  TEST_CASE("terminal LQR of a double integrator") {
    Matrix A(2, 2), B(2, 1), K0(1, 2);
    A << 0.0, 1.0, 0.0, 0.0;
    B << 0.0, 1.0;
    K0 << 1.0, 1.0;
    const models::LtiSubsystem sys(A, B);
    const Vector x_lin = Vector::Constant(2, 0.3);
    const auto lqr = mpc::designTerminalLqr(sys, x_lin, Vector::Zero(1), Matrix::Identity(2, 2), Matrix::Identity(1, 1));
    const Matrix ref = oracle::newtonKleinman(A, B, Matrix::Identity(2, 2), Matrix::Identity(1, 1), K0);
    CHECK((lqr.S - ref).cwiseAbs().maxCoeff() < 1e-8);
    CHECK((lqr.K + B.transpose() * ref).cwiseAbs().maxCoeff() < 1e-8);
    Eigen::EigenSolver<Matrix> eig(A + B * lqr.K);
    CHECK(eig.eigenvalues().real().maxCoeff() < 0.0);
    CHECK(lqr.value.evaluate(x_lin) == 0.0);
    CHECK(lqr.value.evaluate(x_lin + Vector::Ones(2)) == doctest::Approx(0.5 * ref.sum()));
  }

  TEST_CASE("horizon stays at n or n + 1 modes ahead") {
    LtiSetup s;
    mpc::MpcController ctrl(s.factory, s.gait, s.settings, 0.0, Vector::Ones(2));
    CHECK(ctrl.finalTime() == doctest::Approx(0.8));
    CHECK(ctrl.horizonTriggerTime() == doctest::Approx(0.8));
    for (double t = 0.0; t < 3.0; t += 0.05) {
      ctrl.extendHorizon(t);
      const int ahead = ctrl.modesAhead(t);
      CHECK((ahead == 2 || ahead == 3));
      const double horizon = ctrl.finalTime() - t;
      CHECK(horizon >= 0.8 - 1e-9);
      CHECK(horizon <= 1.2 + 1e-9);
    }
  }

  TEST_CASE("extension is a no-op far from the horizon end") {
    LtiSetup s;
    mpc::MpcController ctrl(s.factory, s.gait, s.settings, 0.0, Vector::Ones(2));
    const std::size_t before = ctrl.timeline().size();
    CHECK_FALSE(ctrl.extendHorizon(0.0));
    CHECK(ctrl.timeline().size() == before);
    CHECK(ctrl.finalTime() == doctest::Approx(0.8));
  }

  TEST_CASE("rebasing at the planned state reproduces the plan") {
    LtiSetup s;
    mpc::MpcController ctrl(s.factory, s.gait, s.settings, 0.0, Vector::Ones(2));
    const ocp::Trajectory plan = ctrl.lastPlan();
    const auto rb = ctrl.rebasePolicy(0.0, Vector::Ones(2));
    CHECK((rb.trajectory.finalState() - plan.finalState()).cwiseAbs().maxCoeff() < 1e-8);
    const auto& seg = rb.trajectory.segments[1];
    CHECK((seg.stateAt(0.6) - plan.segments[1].stateAt(0.6)).cwiseAbs().maxCoeff() < 1e-8);
  }

  TEST_CASE("rebased LQR policy follows the closed-loop response from a new state") {
    LtiSetup s;
    // Started at the origin, the terminal value is 1/2 x'S x with the ARE
    // solution S, so one step from any state yields the stationary LQR law.
    s.settings.initial_iterations = 0;
    mpc::MpcController ctrl(s.factory, s.gait, s.settings, 0.0, Vector::Zero(2));
    REQUIRE(ctrl.terminalLqr().x_ref.isZero(0.0));
    ctrl.step(0.0, Vector::Ones(2));
    const Matrix Acl = s.A + s.B * ctrl.terminalLqr().K;
    Vector x0(2);
    x0 << 0.4, -0.2;
    const auto rb = ctrl.rebasePolicy(0.0, x0);
    for (const auto& seg : rb.trajectory.segments) {
      for (std::size_t k = 0; k < seg.size(); k += 5) {
        CHECK((seg.states[k] - oracle::expm(Acl * seg.times[k]) * x0).cwiseAbs().maxCoeff() < 1e-6);
      }
    }
  }

  TEST_CASE("one step on an LTI problem reaches the optimal plan") {
    LtiSetup s;
    mpc::MpcController ctrl(s.factory, s.gait, s.settings, 0.0, Vector::Ones(2));
    Vector x0(2);
    x0 << 1.3, -0.4;
    const Vector r = ctrl.terminalLqr().x_ref;
    const Matrix S = ctrl.terminalLqr().S;
    const auto stats = ctrl.step(0.0, x0);
    CHECK(stats.accepted);
    CHECK(stats.horizon == doctest::Approx(0.8));
    const double ref = ltiOptimalCost(s, S, r, x0, 0.8);
    CHECK(std::abs(stats.plan_cost - ref) / ref < 1e-6);
    CHECK(stats.latency > 0.0);
    CHECK(stats.timings.total() <= stats.latency);
    CHECK(stats.timings.total() >= 0.9 * stats.latency);
  }

  TEST_CASE("without replanning the stored feedback keeps the state bounded") {
    LtiSetup s;
    mpc::MpcController ctrl(s.factory, s.gait, s.settings, 0.0, Vector::Ones(2));
    mpc::ClosedLoopSettings cl;
    cl.duration = 4.0;
    cl.mpc_rate = 0.0;
    const auto log = mpc::runClosedLoop(ctrl, cl);
    CHECK_FALSE(log.diverged);
    CHECK(log.steps.empty());
    double peak = 0.0;
    for (const auto& x : log.states) peak = std::max(peak, x.norm());
    CHECK(peak < 10.0);
  }

  TEST_CASE("closed loop with replanning pulls the LTI state back") {
    LtiSetup s;
    s.settings.initial_iterations = 0;
    mpc::MpcController ctrl(s.factory, s.gait, s.settings, 0.0, Vector::Zero(2));
    mpc::ClosedLoopSettings cl;
    cl.duration = 3.0;
    cl.mpc_rate = 20.0;
    cl.disturbances = mpc::parseDisturbances("0:0:1.0");
    const auto log = mpc::runClosedLoop(ctrl, cl);
    CHECK_FALSE(log.diverged);
    // One step per period including the final sample.
    CHECK(log.steps.size() == 61);
    CHECK(log.states.front()[0] == 1.0);
    // The terminal value is anchored at the previous plan's final state, so
    // the decay is slow but monotone.
    for (std::size_t k = 20; k < log.times.size(); k += 20) {
      CHECK(log.states[k].norm() < log.states[k - 20].norm());
    }
    CHECK(log.states.back().norm() < 0.7);
    for (const auto& st : log.steps) {
      CHECK((st.modes_ahead == 2 || st.modes_ahead == 3));
      CHECK(st.latency > 0.0);
    }
    CHECK(log.achievableRate() > 0.0);
    std::ostringstream csv;
    mpc::writeClosedLoopCsv(log, csv);
    const std::string text = csv.str();
    CHECK(text.rfind("# fastslq-csv v1\ntime,x0,x1,u0,plan_id,latency_ms\n", 0) == 0);
  }

  TEST_CASE("disturbance lists") {
    const auto d = mpc::parseDisturbances("2.5:2:0.5,1.0:0:-0.1");
    REQUIRE(d.size() == 2);
    CHECK(d[0].time == 1.0);
    CHECK(d[0].state_index == 0);
    CHECK(d[0].delta == -0.1);
    CHECK(d[1].time == 2.5);
    CHECK(mpc::parseDisturbances("").empty());
    CHECK_THROWS_AS(mpc::parseDisturbances("1.0:2"), SolverError);
    CHECK_THROWS_AS(mpc::parseDisturbances("a:b:c"), SolverError);
  }

  TEST_CASE("stride reference advances by at most one stride per cycle") {
    const models::StrideReference ref{0.0, 1.0, 0.8, 0.35, 0.8};
    CHECK(ref(0.0) == 0.0);
    CHECK(ref(0.8) == 0.0);
    CHECK(ref(1.6) == doctest::Approx(0.35));
    CHECK(ref(100.0) == doctest::Approx(1.0));
    for (double t = 0.0; t < 5.0; t += 0.1) CHECK(ref(t + 0.8) - ref(t) <= 0.35 + 1e-12);
  }

  TEST_CASE("repeated planar steps at a fixed state do not increase the plan cost") {
    models::PlanarParameters p;
    auto factory = std::make_shared<models::PlanarModeFactory>(p, models::PlanarWeights{},
                                                               [](double) { return 0.0; });
    mpc::MpcSettings settings;
    settings.solver.rollout.integrator = {1e-6, 1e-6, 0.005};
    settings.solver.backward.integrator = {1e-6, 1e-6};
    settings.initial_iterations = 3;
    const Vector x0 = models::planarStandingState(p);
    mpc::MpcController ctrl(factory, models::planarTrotGait(0.4), settings, 0.0, x0);
    double last = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 6; ++k) {
      const auto st = ctrl.step(0.0, x0);
      CHECK(st.plan_cost <= last + 1e-9);
      last = st.plan_cost;
    }
  }

  TEST_CASE("a rejected step leaves the stored plan reproducible") {
    models::PlanarParameters p;
    auto factory = std::make_shared<models::PlanarModeFactory>(p, models::PlanarWeights{},
                                                               [](double) { return 0.0; });
    mpc::MpcSettings settings;
    settings.solver.rollout.integrator = {1e-6, 1e-6, 0.005};
    settings.solver.backward.integrator = {1e-6, 1e-6};
    settings.initial_iterations = 3;
    Vector x0 = models::planarStandingState(p);
    x0[models::planar::kVx] += 0.2;
    mpc::MpcController ctrl(factory, models::planarTrotGait(0.4), settings, 0.0, x0);
    double previous = ctrl.step(0.0, x0).plan_cost;
    int rejected = 0;
    for (int k = 0; k < 20; ++k) {
      const auto st = ctrl.step(0.0, x0);
      CHECK(st.rebased_cost == doctest::Approx(previous).epsilon(1e-12));
      if (!st.accepted) {
        ++rejected;
        CHECK(st.plan_cost == st.rebased_cost);
      }
      previous = st.plan_cost;
    }
    CHECK(rejected > 0);
  }
}
