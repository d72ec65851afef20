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

namespace fastslq::ode {

enum class Direction { Forward, Backward };

/// Accepted integrator nodes with cubic Hermite dense output. Node times are
/// strictly monotone in the integration direction; derivatives are dy/dt in
/// physical time regardless of direction.
class DenseTrajectory {
 public:
  /// Tolerance on the span check of interpolate().
  static constexpr double kSpanEpsilon = 1e-9;
  static constexpr int kInterpolationOrder = 3;

  DenseTrajectory() = default;
  DenseTrajectory(Direction direction, std::vector<double> times, std::vector<Vector> values,
                  std::vector<Vector> derivatives);

  Direction direction() const noexcept { return direction_; }
  int interpolationOrder() const noexcept { return kInterpolationOrder; }
  std::size_t size() const noexcept { return times_.size(); }
  bool empty() const noexcept { return times_.empty(); }

  const std::vector<double>& times() const noexcept { return times_; }
  const std::vector<Vector>& values() const noexcept { return values_; }
  const std::vector<Vector>& derivatives() const noexcept { return derivatives_; }

  double startTime() const { return times_.front(); }
  double endTime() const { return times_.back(); }
  double spanMin() const;
  double spanMax() const;
  bool contains(double t) const;

  /// Value at t; exact at nodes, C1 between them. Throws OutOfSpan.
  Vector interpolate(double t) const;
  void interpolate(double t, Vector& out) const;

 private:
  // Index k such that t lies in [times_[k], times_[k+1]] (physical order).
  std::size_t bracket(double t) const;

  Direction direction_ = Direction::Forward;
  std::vector<double> times_;
  std::vector<Vector> values_;
  std::vector<Vector> derivatives_;
};

}  // namespace fastslq::ode
