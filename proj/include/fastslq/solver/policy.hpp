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
#include "fastslq/ocp/mode_schedule.hpp"

namespace fastslq::solver {

/// u(x, t) = u_ff(t) + K(t) x over one mode, both linear in t between nodes.
struct PolicySegment {
  std::size_t mode = 0;
  std::vector<double> times;
  std::vector<Vector> feedforward;
  std::vector<Matrix> gains;

  double startTime() const { return times.front(); }
  double endTime() const { return times.back(); }
  /// Writes the input into u. t outside the node span is clamped.
  void evaluate(const Vector& x, double t, Vector& u) const;
  /// Gain K(t), clamped like evaluate().
  Matrix gainAt(double t) const;
};

/// Piecewise affine state feedback, one segment per mode of the problem.
class LinearFeedbackPolicy {
 public:
  LinearFeedbackPolicy() = default;
  explicit LinearFeedbackPolicy(std::vector<PolicySegment> segments);

  /// Zero feedforward and gain over every mode of the schedule.
  static LinearFeedbackPolicy zero(const ocp::ModeSchedule& schedule, int state_dim, int input_dim);
  /// Constant u = u0 + K (x - x0) over every mode.
  static LinearFeedbackPolicy constant(const ocp::ModeSchedule& schedule, const Vector& u0, const Matrix& K,
                                       const Vector& x0);

  bool empty() const noexcept { return segments_.empty(); }
  std::size_t numSegments() const noexcept { return segments_.size(); }
  const std::vector<PolicySegment>& segments() const noexcept { return segments_; }
  std::vector<PolicySegment>& segments() noexcept { return segments_; }
  const PolicySegment& segment(std::size_t mode) const;

  double startTime() const { return segments_.front().startTime(); }
  double endTime() const { return segments_.back().endTime(); }

  /// Input of the given mode's segment.
  Vector evaluate(std::size_t mode, const Vector& x, double t) const;
  /// Input of the segment covering t (the later one at a shared boundary).
  Vector evaluate(const Vector& x, double t) const;

 private:
  std::vector<PolicySegment> segments_;
};

}  // namespace fastslq::solver
