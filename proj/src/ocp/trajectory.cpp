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

#include "fastslq/ocp/trajectory.hpp"

#include <algorithm>

namespace fastslq::ocp {

namespace {

std::size_t bracket(const std::vector<double>& times, double t) {
  auto it = std::upper_bound(times.begin(), times.end(), t);
  std::size_t k = it == times.begin() ? 0 : static_cast<std::size_t>(it - times.begin()) - 1;
  return std::min(k, times.size() - 2);
}

}  // namespace

Vector TrajectorySegment::stateAt(double t) const {
  if (times.size() == 1) return states.front();
  t = std::clamp(t, times.front(), times.back());
  const std::size_t k = bracket(times, t);
  if (t == times[k]) return states[k];
  if (t == times[k + 1]) return states[k + 1];
  const double h = times[k + 1] - times[k];
  const double s = (t - times[k]) / h;
  if (state_derivatives.size() != times.size()) return (1.0 - s) * states[k] + s * states[k + 1];
  const double s2 = s * s;
  const double s3 = s2 * s;
  return (2.0 * s3 - 3.0 * s2 + 1.0) * states[k] + ((s3 - 2.0 * s2 + s) * h) * state_derivatives[k] +
         (-2.0 * s3 + 3.0 * s2) * states[k + 1] + ((s3 - s2) * h) * state_derivatives[k + 1];
}

Vector TrajectorySegment::inputAt(double t) const {
  if (times.size() == 1) return inputs.front();
  t = std::clamp(t, times.front(), times.back());
  const std::size_t k = bracket(times, t);
  if (t == times[k]) return inputs[k];
  const double s = (t - times[k]) / (times[k + 1] - times[k]);
  return (1.0 - s) * inputs[k] + s * inputs[k + 1];
}

std::size_t Trajectory::numNodes() const {
  std::size_t count = 0;
  for (const auto& seg : segments) count += seg.size();
  return count;
}

}  // namespace fastslq::ocp
