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

#include "fastslq/mpc/terminal_lqr.hpp"

#include "fastslq/lq/lq_approximation.hpp"
#include "fastslq/riccati/algebraic_riccati.hpp"

namespace fastslq::mpc {

TerminalLqr designTerminalLqr(const ocp::SubsystemModel& subsystem, const Vector& x_lin, const Vector& u_lin,
                              const Matrix& Q, const Matrix& R, double t) {
  const ocp::DynamicsJacobian jac = lq::linearizeDynamics(subsystem, x_lin, u_lin, t);
  const riccati::AlgebraicRiccatiSolution are = riccati::solveAlgebraicRiccati(jac.A, jac.B, Q, R);
  TerminalLqr out;
  out.K = are.K;
  out.S = are.S;
  out.x_ref = x_lin;
  out.u_ref = u_lin;
  out.value.x_ref = x_lin;
  out.value.value = 0.0;
  out.value.hessian = are.S;
  return out;
}

}  // namespace fastslq::mpc
