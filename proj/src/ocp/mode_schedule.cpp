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

#include "fastslq/ocp/mode_schedule.hpp"

#include <algorithm>
#include <sstream>

#include "fastslq/common.hpp"

namespace fastslq::ocp {

ModeSchedule::ModeSchedule(std::vector<double> switching_times, std::vector<int> subsystem_ids)
    : times_(std::move(switching_times)), subsystem_ids_(std::move(subsystem_ids)) {
  if (subsystem_ids_.empty()) fail(ErrorCode::InvalidArgument, "mode schedule needs at least one mode");
  if (times_.size() != subsystem_ids_.size() + 1) {
    fail(ErrorCode::DimensionMismatch, "mode schedule needs one more switching time than modes");
  }
  for (std::size_t i = 1; i < times_.size(); ++i) {
    if (!(times_[i] > times_[i - 1])) fail(ErrorCode::InvalidArgument, "switching times must be strictly increasing");
  }
  for (int id : subsystem_ids_) {
    if (id < 0) fail(ErrorCode::InvalidArgument, "negative subsystem id");
  }
}

std::size_t ModeSchedule::modeAt(double t) const {
  if (t < times_.front() || t > times_.back()) {
    std::ostringstream msg;
    msg << "t = " << t << " outside [" << times_.front() << ", " << times_.back() << "]";
    fail(ErrorCode::OutOfHorizon, msg.str());
  }
  auto it = std::upper_bound(times_.begin(), times_.end(), t);
  const auto i = static_cast<std::size_t>(it - times_.begin());
  return std::min(i - 1, numModes() - 1);
}

}  // namespace fastslq::ocp
