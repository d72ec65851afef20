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

#include "fastslq/common.hpp"

namespace fastslq::ocp {

/// Rollout data of one mode: integrator nodes with the applied inputs. The
/// segment covers the closed interval [t_i, t_{i+1}]; the input at t_{i+1} is
/// the left limit from this mode.
struct TrajectorySegment {
  std::size_t mode = 0;
  std::vector<double> times;
  std::vector<Vector> states;
  std::vector<Vector> inputs;
  std::vector<Vector> state_derivatives;
  // Integral of L_i from the segment start to each node.
  std::vector<double> running_cost;

  std::size_t size() const noexcept { return times.size(); }
  double startTime() const { return times.front(); }
  double endTime() const { return times.back(); }

  /// Cubic Hermite state interpolation (linear if derivatives are absent).
  Vector stateAt(double t) const;
  /// Linear input interpolation.
  Vector inputAt(double t) const;
};

struct Trajectory {
  std::vector<TrajectorySegment> segments;

  bool empty() const noexcept { return segments.empty(); }
  double startTime() const { return segments.front().startTime(); }
  double endTime() const { return segments.back().endTime(); }
  const Vector& initialState() const { return segments.front().states.front(); }
  const Vector& finalState() const { return segments.back().states.back(); }
  std::size_t numNodes() const;
};

}  // namespace fastslq::ocp
