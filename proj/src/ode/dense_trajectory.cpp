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

#include "fastslq/ode/dense_trajectory.hpp"

#include <algorithm>
#include <sstream>

namespace fastslq::ode {

DenseTrajectory::DenseTrajectory(Direction direction, std::vector<double> times, std::vector<Vector> values,
                                 std::vector<Vector> derivatives)
    : direction_(direction),
      times_(std::move(times)),
      values_(std::move(values)),
      derivatives_(std::move(derivatives)) {
  if (times_.size() != values_.size() || times_.size() != derivatives_.size()) {
    fail(ErrorCode::DimensionMismatch, "dense trajectory: node arrays differ in length");
  }
  const double sign = direction_ == Direction::Forward ? 1.0 : -1.0;
  for (std::size_t k = 1; k < times_.size(); ++k) {
    if (!(sign * (times_[k] - times_[k - 1]) > 0.0)) {
      fail(ErrorCode::InvalidArgument, "dense trajectory: node times not strictly monotone");
    }
  }
}

double DenseTrajectory::spanMin() const { return std::min(times_.front(), times_.back()); }
double DenseTrajectory::spanMax() const { return std::max(times_.front(), times_.back()); }

bool DenseTrajectory::contains(double t) const {
  return !times_.empty() && t >= spanMin() - kSpanEpsilon && t <= spanMax() + kSpanEpsilon;
}

std::size_t DenseTrajectory::bracket(double t) const {
  const std::size_t n = times_.size();
  if (direction_ == Direction::Forward) {
    auto it = std::upper_bound(times_.begin(), times_.end(), t);
    std::size_t k = it == times_.begin() ? 0 : static_cast<std::size_t>(it - times_.begin()) - 1;
    return std::min(k, n - 2);
  }
  auto it = std::upper_bound(times_.begin(), times_.end(), t, [](double a, double b) { return a > b; });
  std::size_t k = it == times_.begin() ? 0 : static_cast<std::size_t>(it - times_.begin()) - 1;
  return std::min(k, n - 2);
}

Vector DenseTrajectory::interpolate(double t) const {
  Vector out;
  interpolate(t, out);
  return out;
}

void DenseTrajectory::interpolate(double t, Vector& out) const {
  if (!contains(t)) {
    std::ostringstream msg;
    msg << "t = " << t << " outside [" << (empty() ? 0.0 : spanMin()) << ", " << (empty() ? 0.0 : spanMax()) << "]";
    fail(ErrorCode::OutOfSpan, msg.str());
  }
  if (times_.size() == 1) {
    out = values_.front();
    return;
  }
  t = std::clamp(t, spanMin(), spanMax());
  const std::size_t k = bracket(t);
  const double t0 = times_[k];
  const double t1 = times_[k + 1];
  if (t == t0) {
    out = values_[k];
    return;
  }
  if (t == t1) {
    out = values_[k + 1];
    return;
  }
  const double h = t1 - t0;
  const double s = (t - t0) / h;
  const double s2 = s * s;
  const double s3 = s2 * s;
  const double h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
  const double h10 = s3 - 2.0 * s2 + s;
  const double h01 = -2.0 * s3 + 3.0 * s2;
  const double h11 = s3 - s2;
  out = h00 * values_[k] + (h10 * h) * derivatives_[k] + h01 * values_[k + 1] + (h11 * h) * derivatives_[k + 1];
}

}  // namespace fastslq::ode
