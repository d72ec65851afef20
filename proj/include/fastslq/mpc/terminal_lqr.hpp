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

#include "fastslq/ocp/models.hpp"

namespace fastslq::mpc {

struct TerminalLqr {
  Matrix K;      // u = u_ref + K (x - x_ref)
  Matrix S;      // infinite-horizon Riccati solution
  Vector x_ref;  // linearization state
  Vector u_ref;  // linearization input
  ocp::QuadraticValue value;  // 1/2 (x - x_ref)'S(x - x_ref)
};

/// Infinite-horizon LQR on the linearization of subsystem at (x_lin, u_lin),
/// ignoring the subsystem's constraints. Throws Unstabilizable.
TerminalLqr designTerminalLqr(const ocp::SubsystemModel& subsystem, const Vector& x_lin, const Vector& u_lin,
                              const Matrix& Q, const Matrix& R, double t = 0.0);

}  // namespace fastslq::mpc
