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

#include "fastslq/models/planar_legged.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace fastslq::models {

using namespace planar;

namespace {

constexpr double kSwingNormalizer = 0.03456;  // max of s^2 (1 - s)^3

Matrix diagonalOf(const std::vector<double>& d, int size) {
  if (static_cast<int>(d.size()) != size) fail(ErrorCode::DimensionMismatch, "planar weights have wrong length");
  Matrix out = Matrix::Zero(size, size);
  for (int i = 0; i < size; ++i) out(i, i) = d[static_cast<std::size_t>(i)];
  return out;
}

}  // namespace

void PlanarParameters::validate() const {
  if (!(mass > 0.0 && inertia > 0.0 && friction > 0.0 && swing_apex > 0.0 && aux_time_constant > 0.0 &&
        gravity >= 0.0)) {
    fail(ErrorCode::InvalidArgument, "planar model parameters must be positive");
  }
}

SwingProfile::SwingProfile(double lift_off_, double touch_down_, double apex_)
    : lift_off(lift_off_), touch_down(touch_down_), apex(apex_) {
  if (!(touch_down > lift_off)) fail(ErrorCode::InvalidArgument, "swing touch-down must follow lift-off");
  if (!(apex > 0.0)) fail(ErrorCode::InvalidArgument, "swing apex must be positive");
}

std::array<double, 2> SwingProfile::evaluate(double t) const {
  constexpr double eps = 1e-9;
  if (t < lift_off - eps || t > touch_down + eps) {
    std::ostringstream msg;
    msg << "t = " << t << " outside swing [" << lift_off << ", " << touch_down << "]";
    fail(ErrorCode::OutOfSpan, msg.str());
  }
  const double T = touch_down - lift_off;
  const double s = std::clamp((t - lift_off) / T, 0.0, 1.0);
  const double r = 1.0 - s;
  const double k = apex / kSwingNormalizer;
  const double height = k * s * s * r * r * r;
  const double velocity = k * (2.0 * s * r * r * r - 3.0 * s * s * r * r) / T;
  return {height, velocity};
}

PlanarLeggedSubsystem::PlanarLeggedSubsystem(PlanarParameters params, ContactFlags contacts,
                                             std::optional<SwingProfile> swing)
    : params_(params), contacts_(contacts), swing_(swing) {
  params_.validate();
  if (contacts_.numStance() < 2 && !swing_) fail(ErrorCode::InvalidArgument, "swing foot needs a swing profile");
}

int PlanarLeggedSubsystem::numStateInputConstraints() const {
  int count = 0;
  for (int foot = 0; foot < 2; ++foot) count += contacts_.stance(foot) ? 2 : 3;
  return count;
}

Vector PlanarLeggedSubsystem::dynamics(const Vector& x, const Vector& u, double) const {
  Vector dx(kStateDim);
  const double m = params_.mass;
  dx[kPx] = x[kVx];
  dx[kPz] = x[kVz];
  dx[kVx] = (u[kForce0x] + u[kForce1x]) / m;
  dx[kVz] = -params_.gravity + (u[kForce0z] + u[kForce1z]) / m;
  dx[kPitch] = x[kPitchRate];
  double moment = 0.0;
  for (int foot = 0; foot < 2; ++foot) {
    const double rx = x[footIndex(foot, 0)] - x[kPx];
    const double rz = x[footIndex(foot, 1)] - x[kPz];
    moment += rx * u[forceIndex(foot, 1)] - rz * u[forceIndex(foot, 0)];
  }
  dx[kPitchRate] = moment / params_.inertia;
  for (int j = 0; j < 4; ++j) {
    dx[kFoot0x + j] = u[kFootVel0x + j];
    dx[kAux0x + j] = (u[kFootVel0x + j] - x[kAux0x + j]) / params_.aux_time_constant;
  }
  return dx;
}

std::optional<ocp::DynamicsJacobian> PlanarLeggedSubsystem::dynamicsJacobian(const Vector& x, const Vector& u,
                                                                             double) const {
  Matrix A = Matrix::Zero(kStateDim, kStateDim);
  Matrix B = Matrix::Zero(kStateDim, kInputDim);
  const double m = params_.mass;
  const double I = params_.inertia;
  A(kPx, kVx) = 1.0;
  A(kPz, kVz) = 1.0;
  A(kPitch, kPitchRate) = 1.0;
  B(kVx, kForce0x) = B(kVx, kForce1x) = 1.0 / m;
  B(kVz, kForce0z) = B(kVz, kForce1z) = 1.0 / m;
  for (int foot = 0; foot < 2; ++foot) {
    const double lx = u[forceIndex(foot, 0)];
    const double lz = u[forceIndex(foot, 1)];
    const double rx = x[footIndex(foot, 0)] - x[kPx];
    const double rz = x[footIndex(foot, 1)] - x[kPz];
    A(kPitchRate, kPx) -= lz / I;
    A(kPitchRate, kPz) += lx / I;
    A(kPitchRate, footIndex(foot, 0)) += lz / I;
    A(kPitchRate, footIndex(foot, 1)) -= lx / I;
    B(kPitchRate, forceIndex(foot, 0)) = -rz / I;
    B(kPitchRate, forceIndex(foot, 1)) = rx / I;
  }
  const double tau = params_.aux_time_constant;
  for (int j = 0; j < 4; ++j) {
    B(kFoot0x + j, kFootVel0x + j) = 1.0;
    A(kAux0x + j, kAux0x + j) = -1.0 / tau;
    B(kAux0x + j, kFootVel0x + j) = 1.0 / tau;
  }
  return ocp::DynamicsJacobian{A, B};
}

Vector PlanarLeggedSubsystem::stateInputConstraint(const Vector&, const Vector& u, double t) const {
  Vector g(numStateInputConstraints());
  int row = 0;
  for (int foot = 0; foot < 2; ++foot) {
    if (contacts_.stance(foot)) {
      g[row++] = u[footVelocityIndex(foot, 0)];
      g[row++] = u[footVelocityIndex(foot, 1)];
    } else {
      g[row++] = u[footVelocityIndex(foot, 1)] - swing_->evaluate(t)[1];
      g[row++] = u[forceIndex(foot, 0)];
      g[row++] = u[forceIndex(foot, 1)];
    }
  }
  return g;
}

std::optional<ocp::ConstraintJacobian> PlanarLeggedSubsystem::stateInputConstraintJacobian(const Vector&,
                                                                                          const Vector&,
                                                                                          double) const {
  const int rows = numStateInputConstraints();
  ocp::ConstraintJacobian J{Matrix::Zero(rows, kStateDim), Matrix::Zero(rows, kInputDim)};
  int row = 0;
  for (int foot = 0; foot < 2; ++foot) {
    if (contacts_.stance(foot)) {
      J.du(row++, footVelocityIndex(foot, 0)) = 1.0;
      J.du(row++, footVelocityIndex(foot, 1)) = 1.0;
    } else {
      J.du(row++, footVelocityIndex(foot, 1)) = 1.0;
      J.du(row++, forceIndex(foot, 0)) = 1.0;
      J.du(row++, forceIndex(foot, 1)) = 1.0;
    }
  }
  return J;
}

Vector PlanarLeggedSubsystem::inequalityConstraint(const Vector&, const Vector& u, double) const {
  Vector h(3 * contacts_.numStance());
  int row = 0;
  const double mu = params_.friction;
  for (int foot = 0; foot < 2; ++foot) {
    if (!contacts_.stance(foot)) continue;
    const double lx = u[forceIndex(foot, 0)];
    const double lz = u[forceIndex(foot, 1)];
    h[row++] = lz;
    h[row++] = mu * lz - lx;
    h[row++] = mu * lz + lx;
  }
  return h;
}

std::optional<ocp::ConstraintJacobian> PlanarLeggedSubsystem::inequalityConstraintJacobian(const Vector&,
                                                                                          const Vector&,
                                                                                          double) const {
  const int rows = 3 * contacts_.numStance();
  ocp::ConstraintJacobian J{Matrix::Zero(rows, kStateDim), Matrix::Zero(rows, kInputDim)};
  int row = 0;
  const double mu = params_.friction;
  for (int foot = 0; foot < 2; ++foot) {
    if (!contacts_.stance(foot)) continue;
    const int ix = forceIndex(foot, 0);
    const int iz = forceIndex(foot, 1);
    J.du(row, iz) = 1.0;
    ++row;
    J.du(row, iz) = mu;
    J.du(row, ix) = -1.0;
    ++row;
    J.du(row, iz) = mu;
    J.du(row, ix) = 1.0;
    ++row;
  }
  return J;
}

Matrix PlanarWeights::stateMatrix() const { return diagonalOf(state, kStateDim); }
Matrix PlanarWeights::inputMatrix() const { return diagonalOf(input, kInputDim); }
Matrix PlanarWeights::terminalMatrix() const { return diagonalOf(terminal, kStateDim); }

Vector planarStandingState(const PlanarParameters& params, double px) {
  Vector x = Vector::Zero(kStateDim);
  x[kPx] = px;
  x[kPz] = params.body_height;
  x[kFoot0x] = px - params.foot_offset;
  x[kFoot1x] = px + params.foot_offset;
  return x;
}

Vector planarWeightCompensation(const PlanarParameters& params, const ContactFlags& contacts) {
  Vector u = Vector::Zero(kInputDim);
  const int n = contacts.numStance();
  if (n == 0) return u;
  for (int foot = 0; foot < 2; ++foot) {
    if (contacts.stance(foot)) u[forceIndex(foot, 1)] = params.mass * params.gravity / n;
  }
  return u;
}

ContactFlags contactsOf(PlanarModeType type) {
  switch (type) {
    case PlanarModeType::SwingFoot0:
      return {false, true};
    case PlanarModeType::SwingFoot1:
      return {true, false};
    case PlanarModeType::Stance:
      break;
  }
  return {true, true};
}

PlanarModeInstance makePlanarMode(const PlanarParameters& params, const PlanarWeights& weights, PlanarModeType type,
                                  double start, double end, double reference_px, bool with_terminal_cost) {
  const ContactFlags contacts = contactsOf(type);
  std::optional<SwingProfile> swing;
  if (contacts.numStance() < 2) swing = SwingProfile(start, end, params.swing_apex);
  PlanarModeInstance out;
  out.subsystem = std::make_shared<PlanarLeggedSubsystem>(params, contacts, swing);
  const Vector x_ref = planarStandingState(params, reference_px);
  const Vector u_ref = planarWeightCompensation(params, contacts);
  const Matrix Qf = with_terminal_cost ? weights.terminalMatrix() : Matrix::Zero(kStateDim, kStateDim);
  out.cost = std::make_shared<QuadraticCost>(weights.stateMatrix(), weights.inputMatrix(), x_ref, u_ref, Qf, x_ref);
  return out;
}

ocp::SwitchedProblem makePlanarTrotProblem(const PlanarTrotSettings& s) {
  if (s.gait.empty()) fail(ErrorCode::InvalidArgument, "gait pattern is empty");
  if (s.num_modes < 1) fail(ErrorCode::InvalidArgument, "num_modes must be positive");
  if (!(s.phase_duration > 0.0)) fail(ErrorCode::InvalidArgument, "phase duration must be positive");
  std::vector<double> times{s.start_time};
  std::vector<int> ids;
  std::vector<ocp::SubsystemPtr> subsystems;
  std::vector<ocp::StageCostPtr> costs;
  for (int i = 0; i < s.num_modes; ++i) {
    const double start = s.start_time + i * s.phase_duration;
    const double end = s.start_time + (i + 1) * s.phase_duration;
    const PlanarModeType type = s.gait[static_cast<std::size_t>(i) % s.gait.size()];
    PlanarModeInstance mode = makePlanarMode(s.params, s.weights, type, start, end, s.goal_px, i + 1 == s.num_modes);
    times.push_back(end);
    ids.push_back(i);
    subsystems.push_back(mode.subsystem);
    costs.push_back(mode.cost);
  }
  return ocp::SwitchedProblem(ocp::ModeSchedule(times, ids), std::move(subsystems), std::move(costs),
                              planarStandingState(s.params, s.initial_px));
}

solver::LinearFeedbackPolicy planarInitialPolicy(const ocp::SwitchedProblem& problem,
                                                 const PlanarParameters& params) {
  std::vector<solver::PolicySegment> segments;
  const auto& schedule = problem.schedule();
  for (std::size_t i = 0; i < problem.numModes(); ++i) {
    const auto* model = dynamic_cast<const PlanarLeggedSubsystem*>(&problem.subsystem(i));
    const ContactFlags contacts = model != nullptr ? model->contacts() : ContactFlags{};
    const Vector u = planarWeightCompensation(params, contacts);
    solver::PolicySegment seg;
    seg.mode = i;
    seg.times = {schedule.modeStart(i), schedule.modeEnd(i)};
    seg.feedforward = {u, u};
    seg.gains = {Matrix::Zero(kInputDim, kStateDim), Matrix::Zero(kInputDim, kStateDim)};
    segments.push_back(std::move(seg));
  }
  return solver::LinearFeedbackPolicy(std::move(segments));
}

}  // namespace fastslq::models
