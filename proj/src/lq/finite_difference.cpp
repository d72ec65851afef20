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

#include "fastslq/lq/finite_difference.hpp"

namespace fastslq::lq {

Matrix finiteDifferenceJacobian(const std::function<Vector(const Vector&)>& fn, const Vector& x, double eta) {
  const Vector f0 = fn(x);
  Matrix jac(f0.size(), x.size());
  Vector xp = x;
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    const double h = fdStep(x[j], eta);
    xp[j] = x[j] + h;
    const Vector fp = fn(xp);
    xp[j] = x[j] - h;
    const Vector fm = fn(xp);
    xp[j] = x[j];
    jac.col(j) = (fp - fm) / (2.0 * h);
  }
  return jac;
}

void finiteDifferenceGradientHessian(const std::function<double(const Vector&)>& fn, const Vector& x, Vector& gradient,
                                     Matrix& hessian, double eta) {
  const Eigen::Index n = x.size();
  gradient.resize(n);
  hessian.resize(n, n);
  const double f0 = fn(x);
  Vector xp = x;
  Vector steps(n);
  for (Eigen::Index j = 0; j < n; ++j) steps[j] = fdStep(x[j], eta);

  for (Eigen::Index j = 0; j < n; ++j) {
    const double h = steps[j];
    xp[j] = x[j] + h;
    const double fp = fn(xp);
    xp[j] = x[j] - h;
    const double fm = fn(xp);
    xp[j] = x[j];
    gradient[j] = (fp - fm) / (2.0 * h);
    hessian(j, j) = (fp - 2.0 * f0 + fm) / (h * h);
  }
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index k = j + 1; k < n; ++k) {
      const double hj = steps[j];
      const double hk = steps[k];
      xp[j] = x[j] + hj;
      xp[k] = x[k] + hk;
      const double fpp = fn(xp);
      xp[k] = x[k] - hk;
      const double fpm = fn(xp);
      xp[j] = x[j] - hj;
      const double fmm = fn(xp);
      xp[k] = x[k] + hk;
      const double fmp = fn(xp);
      xp[j] = x[j];
      xp[k] = x[k];
      hessian(j, k) = hessian(k, j) = (fpp - fpm - fmp + fmm) / (4.0 * hj * hk);
    }
  }
}

ocp::DynamicsJacobian finiteDifferenceDynamics(const ocp::SubsystemModel& model, const Vector& x, const Vector& u,
                                               double t) {
  ocp::DynamicsJacobian jac;
  jac.A = finiteDifferenceJacobian([&](const Vector& xx) { return model.dynamics(xx, u, t); }, x);
  jac.B = finiteDifferenceJacobian([&](const Vector& uu) { return model.dynamics(x, uu, t); }, u);
  return jac;
}

ocp::ConstraintJacobian finiteDifferenceStateInputConstraint(const ocp::SubsystemModel& model, const Vector& x,
                                                             const Vector& u, double t) {
  ocp::ConstraintJacobian jac;
  jac.dx = finiteDifferenceJacobian([&](const Vector& xx) { return model.stateInputConstraint(xx, u, t); }, x);
  jac.du = finiteDifferenceJacobian([&](const Vector& uu) { return model.stateInputConstraint(x, uu, t); }, u);
  return jac;
}

Matrix finiteDifferenceStateOnlyConstraint(const ocp::SubsystemModel& model, const Vector& x, double t) {
  return finiteDifferenceJacobian([&](const Vector& xx) { return model.stateOnlyConstraint(xx, t); }, x);
}

ocp::ConstraintJacobian finiteDifferenceInequality(const ocp::SubsystemModel& model, const Vector& x, const Vector& u,
                                                   double t) {
  ocp::ConstraintJacobian jac;
  jac.dx = finiteDifferenceJacobian([&](const Vector& xx) { return model.inequalityConstraint(xx, u, t); }, x);
  jac.du = finiteDifferenceJacobian([&](const Vector& uu) { return model.inequalityConstraint(x, uu, t); }, u);
  return jac;
}

ocp::CostExpansion finiteDifferenceCostExpansion(const ocp::StageCost& cost, const Vector& x, const Vector& u,
                                                 double t) {
  const Eigen::Index n = x.size();
  const Eigen::Index m = u.size();
  Vector z(n + m);
  z << x, u;
  Vector g;
  Matrix H;
  finiteDifferenceGradientHessian(
      [&](const Vector& zz) { return cost.intermediate(zz.head(n), zz.tail(m), t); }, z, g, H);
  ocp::CostExpansion out;
  out.value = cost.intermediate(x, u, t);
  out.dx = g.head(n);
  out.du = g.tail(m);
  out.dxx = H.topLeftCorner(n, n);
  out.duu = H.bottomRightCorner(m, m);
  out.dxu = H.topRightCorner(n, m);
  return out;
}

ocp::TerminalCostExpansion finiteDifferenceTerminalExpansion(const ocp::StageCost& cost, const Vector& x) {
  ocp::TerminalCostExpansion out;
  out.value = cost.terminal(x);
  finiteDifferenceGradientHessian([&](const Vector& xx) { return cost.terminal(xx); }, x, out.dx, out.dxx);
  return out;
}

}  // namespace fastslq::lq
