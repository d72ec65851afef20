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
#include <random>

#include <doctest.h>

#include "central_difference.hpp"
#include "fastslq/models/lti.hpp"
#include "fastslq/models/planar_legged.hpp"
#include "fastslq/solver/rollout.hpp"
#include "fastslq/solver/slq_solver.hpp"
#include "test_util.hpp"

using namespace fastslq;
namespace planar = fastslq::models::planar;

namespace {

constexpr double kFdTol = 1e-5;

double relErr(const Matrix& analytic, const Matrix& numeric) {
  return (analytic - numeric).cwiseAbs().maxCoeff() / std::max(1.0, numeric.cwiseAbs().maxCoeff());
}

Vector randomPlanarState(std::mt19937_64& rng) {
  Vector x = models::planarStandingState(models::PlanarParameters{}) + testutil::gaussianVector(planar::kStateDim, rng, 0.05);
  return x;
}

solver::SolverSettings gridSolver() {
  solver::SolverSettings s;
  s.max_iterations = 50;
  s.convergence_tol = 1e-6;
  s.rollout.integrator.abs_tol = 1e-6;
  s.rollout.integrator.rel_tol = 1e-6;
  s.rollout.integrator.max_step = 0.005;
  s.backward.integrator.abs_tol = 1e-6;
  s.backward.integrator.rel_tol = 1e-6;
  return s;
}

}  // namespace

TEST_SUITE("models") {
  TEST_CASE("swing profile endpoints and apex") {
    const models::SwingProfile p(0.4, 0.8, 0.1);
    const auto lift = p.evaluate(0.4);
    const auto touch = p.evaluate(0.8);
    CHECK(lift[0] == 0.0);
    CHECK(touch[0] == 0.0);
    CHECK(touch[1] == 0.0);
    CHECK(std::abs(p.evaluate(0.4 + 0.4 * 0.4)[0] - 0.1) < 1e-9);
    CHECK(std::abs(p.evaluate(0.4 + 0.4 * 0.4)[1]) < 1e-9);
    for (double s = 0.01; s < 1.0; s += 0.01) CHECK(p.evaluate(0.4 + 0.4 * s)[0] <= 0.1 + 1e-12);
    // Velocity is the derivative of height.
    const double t = 0.63, h = 1e-6;
    CHECK(p.evaluate(t)[1] == doctest::Approx((p.evaluate(t + h)[0] - p.evaluate(t - h)[0]) / (2 * h)).epsilon(1e-6));
    CHECK_THROWS_AS(p.evaluate(0.81), SolverError);
    CHECK_THROWS_AS(p.evaluate(0.39), SolverError);
    CHECK_THROWS_AS(models::SwingProfile(0.8, 0.4, 0.1), SolverError);
  }

  TEST_CASE("equality constraint count is four plus the number of swing legs") {
    const models::PlanarParameters p;
    const models::SwingProfile swing(0.0, 0.4, 0.1);
    const models::PlanarLeggedSubsystem stance(p, models::contactsOf(models::PlanarModeType::Stance));
    const models::PlanarLeggedSubsystem swing0(p, models::contactsOf(models::PlanarModeType::SwingFoot0), swing);
    const models::PlanarLeggedSubsystem swing1(p, models::contactsOf(models::PlanarModeType::SwingFoot1), swing);
    CHECK(stance.numStateInputConstraints() == 4);
    CHECK(swing0.numStateInputConstraints() == 5);
    CHECK(swing1.numStateInputConstraints() == 5);
    const Vector x = models::planarStandingState(p);
    const Vector u = Vector::Zero(planar::kInputDim);
    CHECK(stance.inequalityConstraint(x, u, 0.1).size() == 6);
    CHECK(swing0.inequalityConstraint(x, u, 0.1).size() == 3);
    CHECK(swing0.stateInputConstraint(x, u, 0.1).size() == 5);
  }

  TEST_CASE("swing constraint ties the vertical foot velocity to the profile and zeroes its force") {
    const models::PlanarParameters p;
    const models::SwingProfile swing(0.0, 0.4, 0.1);
    const models::PlanarLeggedSubsystem model(p, models::contactsOf(models::PlanarModeType::SwingFoot0), swing);
    const Vector x = models::planarStandingState(p);
    Vector u = Vector::Zero(planar::kInputDim);
    const double t = 0.1;
    u[planar::footVelocityIndex(0, 1)] = swing.evaluate(t)[1];
    u[planar::footVelocityIndex(0, 0)] = 0.3;  // free horizontal swing velocity
    u[planar::forceIndex(1, 1)] = 100.0;        // stance foot force is free
    CHECK(model.stateInputConstraint(x, u, t).cwiseAbs().maxCoeff() < 1e-15);
    u[planar::forceIndex(0, 1)] = 1.0;
    CHECK(model.stateInputConstraint(x, u, t).cwiseAbs().maxCoeff() == doctest::Approx(1.0));
  }

  TEST_CASE("friction cone inequalities") {
    const models::PlanarParameters p;
    const models::PlanarLeggedSubsystem model(p, models::contactsOf(models::PlanarModeType::Stance));
    const Vector x = models::planarStandingState(p);
    Vector u = Vector::Zero(planar::kInputDim);
    u[planar::forceIndex(0, 1)] = 100.0;
    u[planar::forceIndex(0, 0)] = 50.0;
    u[planar::forceIndex(1, 1)] = 100.0;
    CHECK(model.inequalityConstraint(x, u, 0.0).minCoeff() >= 0.0);
    u[planar::forceIndex(0, 0)] = 80.0;  // beyond mu * 100
    CHECK(model.inequalityConstraint(x, u, 0.0).minCoeff() < 0.0);
    u[planar::forceIndex(0, 0)] = 0.0;
    u[planar::forceIndex(1, 1)] = -1.0;  // pulling on the ground
    CHECK(model.inequalityConstraint(x, u, 0.0).minCoeff() < 0.0);
  }

  TEST_CASE("weight compensation balances gravity at the standing state") {
    const models::PlanarParameters p;
    for (auto type : {models::PlanarModeType::Stance, models::PlanarModeType::SwingFoot0}) {
      const auto contacts = models::contactsOf(type);
      const models::PlanarLeggedSubsystem model(p, contacts, models::SwingProfile(0.0, 0.4, 0.1));
      const Vector x = models::planarStandingState(p);
      Vector u = models::planarWeightCompensation(p, contacts);
      const Vector dx = model.dynamics(x, u, 0.0);
      CHECK(std::abs(dx[planar::kVz]) < 1e-12);
      CHECK(std::abs(dx[planar::kVx]) < 1e-12);
    }
  }

  TEST_CASE("analytic derivatives match central differences") {
    std::mt19937_64 rng(17);
    const models::PlanarParameters p;
    for (auto type : {models::PlanarModeType::Stance, models::PlanarModeType::SwingFoot0,
                      models::PlanarModeType::SwingFoot1}) {
      const auto mode = models::makePlanarMode(p, models::PlanarWeights{}, type, 0.0, 0.4, 0.1, true);
      const auto& model = *mode.subsystem;
      const auto& cost = *mode.cost;
      for (int k = 0; k < 20; ++k) {
        const Vector x = randomPlanarState(rng);
        const Vector u = testutil::gaussianVector(planar::kInputDim, rng, 20.0);
        const double t = 0.02 + 0.36 * k / 20.0;

        const auto jac = *model.dynamicsJacobian(x, u, t);
        CHECK(relErr(jac.A, oracle::centralJacobian([&](const Vector& y) { return model.dynamics(y, u, t); }, x)) <
              kFdTol);
        CHECK(relErr(jac.B, oracle::centralJacobian([&](const Vector& v) { return model.dynamics(x, v, t); }, u)) <
              kFdTol);

        const auto g = *model.stateInputConstraintJacobian(x, u, t);
        CHECK(relErr(g.dx, oracle::centralJacobian(
                               [&](const Vector& y) { return model.stateInputConstraint(y, u, t); }, x)) < kFdTol);
        CHECK(relErr(g.du, oracle::centralJacobian(
                               [&](const Vector& v) { return model.stateInputConstraint(x, v, t); }, u)) < kFdTol);

        const auto h = *model.inequalityConstraintJacobian(x, u, t);
        CHECK(relErr(h.dx, oracle::centralJacobian(
                               [&](const Vector& y) { return model.inequalityConstraint(y, u, t); }, x)) < kFdTol);
        CHECK(relErr(h.du, oracle::centralJacobian(
                               [&](const Vector& v) { return model.inequalityConstraint(x, v, t); }, u)) < kFdTol);

        const auto c = *cost.intermediateExpansion(x, u, t);
        CHECK(c.value == doctest::Approx(cost.intermediate(x, u, t)));
        CHECK(relErr(c.dx, oracle::centralGradient([&](const Vector& y) { return cost.intermediate(y, u, t); }, x)) <
              kFdTol);
        CHECK(relErr(c.du, oracle::centralGradient([&](const Vector& v) { return cost.intermediate(x, v, t); }, u)) <
              kFdTol);
        const auto phi = *cost.terminalExpansion(x);
        CHECK(relErr(phi.dx, oracle::centralGradient([&](const Vector& y) { return cost.terminal(y); }, x)) <
              kFdTol);
      }
    }
  }

  TEST_CASE("random stabilizable pairs are controllable and reproducible") {
    const auto a = models::randomStabilizablePair(4, 2, 5);
    const auto b = models::randomStabilizablePair(4, 2, 5);
    CHECK(a.A == b.A);
    CHECK(a.B == b.B);
    CHECK(models::controllabilityRank(a.A, a.B) == 4);
    CHECK(models::controllabilityRank(Matrix::Identity(2, 2), Matrix::Zero(2, 1)) == 0);
  }

  TEST_CASE("LTI problem dimensions are checked") {
    CHECK_THROWS_AS(models::makeLtiProblem(Matrix::Identity(2, 2), Matrix::Identity(3, 1), Matrix::Identity(2, 2),
                                           Matrix::Identity(1, 1), Matrix::Zero(2, 2), Vector::Ones(2), {0.0, 1.0}),
                    SolverError);
    CHECK_THROWS_AS(models::makeLtiProblem(Matrix::Identity(2, 2), Matrix::Identity(2, 1), Matrix::Identity(2, 2),
                                           Matrix::Identity(1, 1), Matrix::Zero(2, 2), Vector::Ones(3), {0.0, 1.0}),
                    SolverError);
  }

  TEST_CASE("without gravity and cost the zero input is optimal") {
    models::PlanarTrotSettings s;
    s.num_modes = 2;
    s.params.gravity = 0.0;
    s.weights.state.assign(planar::kStateDim, 0.0);
    s.weights.input.assign(planar::kInputDim, 0.0);
    s.weights.terminal.assign(planar::kStateDim, 0.0);
    const auto problem = models::makePlanarTrotProblem(s);
    auto settings = gridSolver();
    settings.max_iterations = 3;
    const auto sol = solver::SlqSolver(settings).solve(
        problem, solver::LinearFeedbackPolicy::zero(problem.schedule(), planar::kStateDim, planar::kInputDim));
    CHECK(std::abs(sol.cost()) < 1e-12);
    for (const auto& seg : sol.trajectory.segments) {
      for (const auto& u : seg.inputs) {
        Vector forces = u.head(4);
        CHECK(forces.cwiseAbs().maxCoeff() < 1e-9);
      }
    }
  }

  TEST_CASE("converged in-place trot: force balance and foot constraints") {
    models::PlanarTrotSettings s;
    const auto problem = models::makePlanarTrotProblem(s);
    auto settings = gridSolver();
    settings.num_threads = 2;
    const auto sol = solver::SlqSolver(settings).solve(problem, models::planarInitialPolicy(problem, s.params));
    REQUIRE(sol.report.converged);

    // Average vertical force over the two full gait cycles of the horizon,
    // which starts and ends at rest.
    double impulse = 0.0;
    for (const auto& seg : sol.trajectory.segments) {
      for (std::size_t k = 0; k + 1 < seg.size(); ++k) {
        const double fz0 = seg.inputs[k][planar::kForce0z] + seg.inputs[k][planar::kForce1z];
        const double fz1 = seg.inputs[k + 1][planar::kForce0z] + seg.inputs[k + 1][planar::kForce1z];
        impulse += 0.5 * (fz0 + fz1) * (seg.times[k + 1] - seg.times[k]);
      }
    }
    const double weight = s.params.mass * s.params.gravity;
    CHECK(std::abs(impulse / 1.6 - weight) / weight < 0.02);

    double swing_err = 0.0, stance_speed = 0.0;
    for (std::size_t i = 0; i < sol.trajectory.segments.size(); ++i) {
      const auto& seg = sol.trajectory.segments[i];
      const int swing_foot = (i % 2 == 0) ? 0 : 1;
      const int stance_foot = 1 - swing_foot;
      const models::SwingProfile profile(seg.startTime(), seg.endTime(), s.params.swing_apex);
      for (std::size_t k = 0; k < seg.size(); ++k) {
        const Vector& u = seg.inputs[k];
        swing_err = std::max(swing_err,
                             std::abs(u[planar::footVelocityIndex(swing_foot, 1)] - profile.evaluate(seg.times[k])[1]));
        stance_speed = std::max(stance_speed, u.segment(planar::footVelocityIndex(stance_foot, 0), 2).cwiseAbs().maxCoeff());
      }
    }
    CHECK(swing_err < 1e-4);
    CHECK(stance_speed < 1e-4);
  }
}
