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
#include <limits>

#include "fastslq/ode/dense_trajectory.hpp"

namespace fastslq::ode {

struct IntegratorSettings {
  double abs_tol = 1e-6;
  double rel_tol = 1e-6;
  double max_step = std::numeric_limits<double>::infinity();
  double min_step = 1e-12;
  long max_num_steps = 1000000;

  void validate() const;
};

/// dy/dt = f(t, y). Writes into dy, which is already sized like y.
using Rhs = std::function<void(double t, const Vector& y, Vector& dy)>;

/// Dormand-Prince 5(4) with PI step-size control. Backward integration
/// (t_end < t_start) runs the same forward stepper on the time-reversed
/// right-hand side. Both endpoints are nodes of the result.
DenseTrajectory integrateAdaptive(const Rhs& rhs, double t_start, double t_end, const Vector& y0,
                                  const IntegratorSettings& settings = {});

}  // namespace fastslq::ode
