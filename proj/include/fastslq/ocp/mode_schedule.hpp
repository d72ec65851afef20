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

#include <cstddef>
#include <vector>

namespace fastslq::ocp {

/// Switching times t_0 < t_1 < ... < t_I and the subsystem active in each of
/// the I modes. Mode i covers the half-open interval [t_i, t_{i+1}); the final
/// time t_I belongs to the last mode.
class ModeSchedule {
 public:
  ModeSchedule() = default;
  ModeSchedule(std::vector<double> switching_times, std::vector<int> subsystem_ids);

  std::size_t numModes() const noexcept { return subsystem_ids_.size(); }
  const std::vector<double>& switchingTimes() const noexcept { return times_; }
  const std::vector<int>& subsystemIds() const noexcept { return subsystem_ids_; }

  double startTime() const { return times_.front(); }
  double endTime() const { return times_.back(); }
  double modeStart(std::size_t mode) const { return times_.at(mode); }
  double modeEnd(std::size_t mode) const { return times_.at(mode + 1); }
  int subsystemId(std::size_t mode) const { return subsystem_ids_.at(mode); }

  /// Index i with t_i <= t < t_{i+1}; I - 1 at t = t_I. Throws OutOfHorizon.
  std::size_t modeAt(double t) const;

 private:
  std::vector<double> times_;
  std::vector<int> subsystem_ids_;
};

}  // namespace fastslq::ocp
