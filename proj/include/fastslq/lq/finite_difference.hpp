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

#include "fastslq/common.hpp"
#include "fastslq/ocp/models.hpp"

namespace fastslq::lq {

/// Relative central-difference step: h_j = eta * max(1, |x_j|), eta = 2^-17.
inline constexpr double kFiniteDifferenceEta = 1.0 / 131072.0;

inline double fdStep(double x, double eta = kFiniteDifferenceEta) { return eta * std::max(1.0, std::abs(x)); }

/// Central-difference Jacobian of fn at x (rows = output dimension).
Matrix finiteDifferenceJacobian(const std::function<Vector(const Vector&)>& fn, const Vector& x,
                                double eta = kFiniteDifferenceEta);

/// Central-difference gradient and Hessian of a scalar function.
void finiteDifferenceGradientHessian(const std::function<double(const Vector&)>& fn, const Vector& x, Vector& gradient,
                                     Matrix& hessian, double eta = kFiniteDifferenceEta);

ocp::DynamicsJacobian finiteDifferenceDynamics(const ocp::SubsystemModel& model, const Vector& x, const Vector& u,
                                               double t);
ocp::ConstraintJacobian finiteDifferenceStateInputConstraint(const ocp::SubsystemModel& model, const Vector& x,
                                                             const Vector& u, double t);
Matrix finiteDifferenceStateOnlyConstraint(const ocp::SubsystemModel& model, const Vector& x, double t);
ocp::ConstraintJacobian finiteDifferenceInequality(const ocp::SubsystemModel& model, const Vector& x, const Vector& u,
                                                   double t);
ocp::CostExpansion finiteDifferenceCostExpansion(const ocp::StageCost& cost, const Vector& x, const Vector& u,
                                                 double t);
ocp::TerminalCostExpansion finiteDifferenceTerminalExpansion(const ocp::StageCost& cost, const Vector& x);

}  // namespace fastslq::lq
