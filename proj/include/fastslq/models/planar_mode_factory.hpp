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

#include <functional>

#include "fastslq/models/planar_legged.hpp"
#include "fastslq/mpc/mpc.hpp"

namespace fastslq::models {

/// Horizontal CoM reference moving toward goal at most stride_length per
/// gait cycle, starting at start_time from start_px.
struct StrideReference {
  double start_px = 0.0;
  double goal_px = 0.0;
  double start_time = 0.0;
  double stride_length = 0.35;
  double cycle_duration = 0.8;

  double operator()(double t) const;
};

// Planar trot modes for the MPC timeline. Mode types are PlanarModeType
// values; every mode tracks the standing state at reference(t).
class PlanarModeFactory : public mpc::ModeFactory {
 public:
  PlanarModeFactory(PlanarParameters params, PlanarWeights weights, std::function<double(double)> reference_px);

  int stateDim() const override { return planar::kStateDim; }
  int inputDim() const override { return planar::kInputDim; }
  ocp::SubsystemPtr makeSubsystem(int mode_type, double start, double end) const override;
  ocp::StageCostPtr makeCost(int mode_type, double start, double end) const override;
  ocp::SubsystemPtr terminalSubsystem() const override;
  Vector nominalInput(int mode_type) const override;
  Vector terminalNominalInput() const override;
  Matrix lqrStateWeight() const override { return weights_.stateMatrix(); }
  Matrix lqrInputWeight() const override { return weights_.inputMatrix(); }

  const PlanarParameters& parameters() const noexcept { return params_; }

 private:
  PlanarParameters params_;
  PlanarWeights weights_;
  std::function<double(double)> reference_px_;
};

/// Alternating swing-foot-0 / swing-foot-1 phases of equal duration.
mpc::GaitPattern planarTrotGait(double phase_duration = 0.4);

}  // namespace fastslq::models
