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

#include "fastslq/solver/policy.hpp"

#include <algorithm>

namespace fastslq::solver {

void PolicySegment::evaluate(const Vector& x, double t, Vector& u) const {
  if (times.size() == 1 || t <= times.front()) {
    u.noalias() = feedforward.front() + gains.front() * x;
    return;
  }
  if (t >= times.back()) {
    u.noalias() = feedforward.back() + gains.back() * x;
    return;
  }
  auto it = std::upper_bound(times.begin(), times.end(), t);
  const std::size_t k = static_cast<std::size_t>(it - times.begin()) - 1;
  if (t == times[k]) {
    u.noalias() = feedforward[k] + gains[k] * x;
    return;
  }
  const double s = (t - times[k]) / (times[k + 1] - times[k]);
  u.noalias() = (1.0 - s) * feedforward[k] + s * feedforward[k + 1];
  u.noalias() += (1.0 - s) * (gains[k] * x);
  u.noalias() += s * (gains[k + 1] * x);
}

Matrix PolicySegment::gainAt(double t) const {
  if (times.size() == 1 || t <= times.front()) return gains.front();
  if (t >= times.back()) return gains.back();
  auto it = std::upper_bound(times.begin(), times.end(), t);
  const std::size_t k = static_cast<std::size_t>(it - times.begin()) - 1;
  if (t == times[k]) return gains[k];
  const double s = (t - times[k]) / (times[k + 1] - times[k]);
  return (1.0 - s) * gains[k] + s * gains[k + 1];
}

LinearFeedbackPolicy::LinearFeedbackPolicy(std::vector<PolicySegment> segments) : segments_(std::move(segments)) {
  for (const auto& seg : segments_) {
    if (seg.times.empty() || seg.times.size() != seg.feedforward.size() || seg.times.size() != seg.gains.size()) {
      fail(ErrorCode::DimensionMismatch, "policy segment with inconsistent node counts");
    }
    for (std::size_t k = 1; k < seg.times.size(); ++k) {
      if (!(seg.times[k] > seg.times[k - 1])) fail(ErrorCode::InvalidArgument, "policy times must increase");
    }
  }
}

LinearFeedbackPolicy LinearFeedbackPolicy::zero(const ocp::ModeSchedule& schedule, int state_dim, int input_dim) {
  return constant(schedule, Vector::Zero(input_dim), Matrix::Zero(input_dim, state_dim), Vector::Zero(state_dim));
}

LinearFeedbackPolicy LinearFeedbackPolicy::constant(const ocp::ModeSchedule& schedule, const Vector& u0,
                                                    const Matrix& K, const Vector& x0) {
  std::vector<PolicySegment> segments;
  const Vector uff = u0 - K * x0;
  for (std::size_t i = 0; i < schedule.numModes(); ++i) {
    PolicySegment seg;
    seg.mode = i;
    seg.times = {schedule.modeStart(i), schedule.modeEnd(i)};
    seg.feedforward = {uff, uff};
    seg.gains = {K, K};
    segments.push_back(std::move(seg));
  }
  return LinearFeedbackPolicy(std::move(segments));
}

const PolicySegment& LinearFeedbackPolicy::segment(std::size_t mode) const {
  if (mode >= segments_.size()) fail(ErrorCode::OutOfHorizon, "policy has no segment for mode " + std::to_string(mode));
  return segments_[mode];
}

Vector LinearFeedbackPolicy::evaluate(std::size_t mode, const Vector& x, double t) const {
  Vector u;
  segment(mode).evaluate(x, t, u);
  return u;
}

Vector LinearFeedbackPolicy::evaluate(const Vector& x, double t) const {
  if (segments_.empty()) fail(ErrorCode::OutOfHorizon, "empty policy");
  std::size_t k = 0;
  while (k + 1 < segments_.size() && t >= segments_[k + 1].startTime()) ++k;
  Vector u;
  segments_[k].evaluate(x, t, u);
  return u;
}

}  // namespace fastslq::solver
