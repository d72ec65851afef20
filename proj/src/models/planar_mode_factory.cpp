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

#include "fastslq/models/planar_mode_factory.hpp"

#include <algorithm>
#include <cmath>

namespace fastslq::models {

double StrideReference::operator()(double t) const {
  const double speed = stride_length / cycle_duration;
  const double travelled = speed * std::max(0.0, t - start_time);
  const double distance = goal_px - start_px;
  return start_px + std::copysign(std::min(travelled, std::abs(distance)), distance);
}

PlanarModeFactory::PlanarModeFactory(PlanarParameters params, PlanarWeights weights,
                                     std::function<double(double)> reference_px)
    : params_(params), weights_(std::move(weights)), reference_px_(std::move(reference_px)) {
  params_.validate();
  if (!reference_px_) reference_px_ = [](double) { return 0.0; };
}

ocp::SubsystemPtr PlanarModeFactory::makeSubsystem(int mode_type, double start, double end) const {
  return makePlanarMode(params_, weights_, static_cast<PlanarModeType>(mode_type), start, end, 0.0, false).subsystem;
}

ocp::StageCostPtr PlanarModeFactory::makeCost(int mode_type, double, double) const {
  const ContactFlags contacts = contactsOf(static_cast<PlanarModeType>(mode_type));
  const PlanarParameters params = params_;
  const auto reference = reference_px_;
  auto x_ref = [params, reference](double t) { return planarStandingState(params, reference(t)); };
  const Matrix zero = Matrix::Zero(planar::kStateDim, planar::kStateDim);
  return std::make_shared<QuadraticCost>(weights_.stateMatrix(), weights_.inputMatrix(), x_ref,
                                         planarWeightCompensation(params_, contacts), zero,
                                         planarStandingState(params_, 0.0));
}

ocp::SubsystemPtr PlanarModeFactory::terminalSubsystem() const {
  return std::make_shared<PlanarLeggedSubsystem>(params_, ContactFlags{true, true});
}

Vector PlanarModeFactory::nominalInput(int mode_type) const {
  return planarWeightCompensation(params_, contactsOf(static_cast<PlanarModeType>(mode_type)));
}

Vector PlanarModeFactory::terminalNominalInput() const {
  return planarWeightCompensation(params_, ContactFlags{true, true});
}

mpc::GaitPattern planarTrotGait(double phase_duration) {
  return {{static_cast<int>(PlanarModeType::SwingFoot0), static_cast<int>(PlanarModeType::SwingFoot1)},
          {phase_duration, phase_duration}};
}

}  // namespace fastslq::models
