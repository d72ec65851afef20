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

#include <array>
#include <memory>
#include <optional>
#include <vector>

#include "fastslq/models/quadratic_cost.hpp"
#include "fastslq/ocp/problem.hpp"
#include "fastslq/solver/policy.hpp"

namespace fastslq::models {

// Planar rigid body on two point feet.
//
// State (14): px pz vx vz pitch pitch_rate | f0x f0z f1x f1z | a0x a0z a1x a1z
// Input (8):  l0x l0z l1x l1z | v0x v0z v1x v1z
//
// Contact forces l act at the feet, foot positions f follow the commanded
// foot velocities v, and the auxiliary states a are first-order filtered
// foot velocities.
namespace planar {

inline constexpr int kStateDim = 14;
inline constexpr int kInputDim = 8;

enum StateIndex : int {
  kPx = 0, kPz, kVx, kVz, kPitch, kPitchRate,
  kFoot0x, kFoot0z, kFoot1x, kFoot1z,
  kAux0x, kAux0z, kAux1x, kAux1z,
};

enum InputIndex : int {
  kForce0x = 0, kForce0z, kForce1x, kForce1z,
  kFootVel0x, kFootVel0z, kFootVel1x, kFootVel1z,
};

inline int forceIndex(int foot, int axis) { return 2 * foot + axis; }
inline int footVelocityIndex(int foot, int axis) { return 4 + 2 * foot + axis; }
inline int footIndex(int foot, int axis) { return kFoot0x + 2 * foot + axis; }
inline int auxIndex(int foot, int axis) { return kAux0x + 2 * foot + axis; }

}  // namespace planar

struct PlanarParameters {
  double mass = 20.0;
  double inertia = 1.0;
  double gravity = 9.81;
  double friction = 0.7;
  double swing_apex = 0.1;
  double body_height = 0.45;
  double foot_offset = 0.15;
  double aux_time_constant = 0.05;

  void validate() const;
};

/// Vertical swing-foot height c(t) = apex * s^2 (1 - s)^3 / 0.03456 with
/// s = (t - lift_off) / (touch_down - lift_off). Zero height at both ends,
/// zero velocity and acceleration at touch-down, maximum apex at s = 0.4.
struct SwingProfile {
  double lift_off = 0.0;
  double touch_down = 0.4;
  double apex = 0.1;

  SwingProfile(double lift_off, double touch_down, double apex);

  /// (height, vertical velocity). Throws OutOfSpan outside [lift_off, touch_down]
  /// beyond a 1e-9 margin.
  std::array<double, 2> evaluate(double t) const;
};

/// Contact configuration of one mode: which feet are in stance.
struct ContactFlags {
  bool stance0 = true;
  bool stance1 = true;

  bool stance(int foot) const { return foot == 0 ? stance0 : stance1; }
  int numStance() const { return static_cast<int>(stance0) + static_cast<int>(stance1); }
};

class PlanarLeggedSubsystem : public ocp::SubsystemModel {
 public:
  /// A swing foot needs a profile; the profile is ignored for stance feet.
  PlanarLeggedSubsystem(PlanarParameters params, ContactFlags contacts,
                        std::optional<SwingProfile> swing = std::nullopt);

  int stateDim() const override { return planar::kStateDim; }
  int inputDim() const override { return planar::kInputDim; }

  Vector dynamics(const Vector& x, const Vector& u, double t) const override;
  std::optional<ocp::DynamicsJacobian> dynamicsJacobian(const Vector& x, const Vector& u, double t) const override;

  /// Stance foot: both foot velocities zero. Swing foot: vertical velocity
  /// equals the profile velocity and both force components are zero.
  Vector stateInputConstraint(const Vector& x, const Vector& u, double t) const override;
  std::optional<ocp::ConstraintJacobian> stateInputConstraintJacobian(const Vector& x, const Vector& u,
                                                                      double t) const override;

  /// Per stance foot: l_z >= 0, mu l_z - l_x >= 0, mu l_z + l_x >= 0.
  Vector inequalityConstraint(const Vector& x, const Vector& u, double t) const override;
  std::optional<ocp::ConstraintJacobian> inequalityConstraintJacobian(const Vector& x, const Vector& u,
                                                                      double t) const override;

  const PlanarParameters& parameters() const noexcept { return params_; }
  const ContactFlags& contacts() const noexcept { return contacts_; }
  int numStateInputConstraints() const;

 private:
  PlanarParameters params_;
  ContactFlags contacts_;
  std::optional<SwingProfile> swing_;
};

/// Diagonal weights of the planar quadratic cost.
struct PlanarWeights {
  std::vector<double> state{200.0, 200.0, 10.0, 10.0, 200.0, 10.0, 20.0, 20.0, 20.0, 20.0, 0.1, 0.1, 0.1, 0.1};
  std::vector<double> input{1e-3, 1e-3, 1e-3, 1e-3, 0.5, 0.5, 0.5, 0.5};
  std::vector<double> terminal{2000.0, 2000.0, 100.0, 100.0, 2000.0, 100.0, 200.0, 200.0, 200.0, 200.0,
                               1.0,    1.0,    1.0,   1.0};

  Matrix stateMatrix() const;
  Matrix inputMatrix() const;
  Matrix terminalMatrix() const;
};

/// Standing state with the CoM at horizontal position px and the feet at
/// px -/+ foot_offset on the ground.
Vector planarStandingState(const PlanarParameters& params, double px = 0.0);

/// Input that carries the weight equally on the stance feet.
Vector planarWeightCompensation(const PlanarParameters& params, const ContactFlags& contacts);

/// Gait mode types used by the planar model.
enum class PlanarModeType : int { Stance = 0, SwingFoot0 = 1, SwingFoot1 = 2 };
ContactFlags contactsOf(PlanarModeType type);

struct PlanarModeInstance {
  ocp::SubsystemPtr subsystem;
  ocp::StageCostPtr cost;
};

/// Subsystem and running cost of one gait mode over [start, end] tracking the
/// standing state at reference_px. Pass terminal weights to add Phi.
PlanarModeInstance makePlanarMode(const PlanarParameters& params, const PlanarWeights& weights, PlanarModeType type,
                                  double start, double end, double reference_px, bool with_terminal_cost);

struct PlanarTrotSettings {
  PlanarParameters params;
  PlanarWeights weights;
  /// Gait cycle of mode types; each phase lasts phase_duration.
  std::vector<PlanarModeType> gait{PlanarModeType::SwingFoot0, PlanarModeType::SwingFoot1};
  double phase_duration = 0.4;
  int num_modes = 4;
  double start_time = 0.0;
  /// Horizontal goal of the CoM; the standing state there is the reference.
  double goal_px = 0.0;
  double initial_px = 0.0;
};

/// Trot problem with num_modes phases; the last mode carries the terminal
/// cost toward the goal.
ocp::SwitchedProblem makePlanarTrotProblem(const PlanarTrotSettings& settings);

/// Weight-compensating feedforward with zero feedback in every mode.
solver::LinearFeedbackPolicy planarInitialPolicy(const ocp::SwitchedProblem& problem, const PlanarParameters& params);

}  // namespace fastslq::models
