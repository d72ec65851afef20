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

#include <optional>

#include "fastslq/common.hpp"

namespace fastslq::ocp {

struct DynamicsJacobian {
  Matrix A;  // df/dx
  Matrix B;  // df/du
};

/// Jacobian of a constraint g(x, u, t) with respect to state and input.
struct ConstraintJacobian {
  Matrix dx;
  Matrix du;
};

/// Second-order expansion of the intermediate cost L(x, u, t).
struct CostExpansion {
  double value = 0.0;
  Vector dx;   // dL/dx
  Vector du;   // dL/du
  Matrix dxx;  // d2L/dx2
  Matrix duu;  // d2L/du2
  Matrix dxu;  // d2L/dxdu, n x m
};

struct TerminalCostExpansion {
  double value = 0.0;
  Vector dx;
  Matrix dxx;
};

// One subsystem f_i of the switched system with its constraints:
//   g1(x, u, t) = 0   state-input equalities
//   g2(x, t)    = 0   state-only equalities
//   h(x, u, t) >= 0   inequalities
// Jacobians are optional; callers fall back to central differences.
class SubsystemModel {
 public:
  virtual ~SubsystemModel() = default;

  virtual int stateDim() const = 0;
  virtual int inputDim() const = 0;

  virtual Vector dynamics(const Vector& x, const Vector& u, double t) const = 0;
  virtual std::optional<DynamicsJacobian> dynamicsJacobian(const Vector& /*x*/, const Vector& /*u*/,
                                                           double /*t*/) const {
    return std::nullopt;
  }

  virtual Vector stateInputConstraint(const Vector& /*x*/, const Vector& /*u*/, double /*t*/) const {
    return Vector(0);
  }
  virtual std::optional<ConstraintJacobian> stateInputConstraintJacobian(const Vector& /*x*/, const Vector& /*u*/,
                                                                         double /*t*/) const {
    return std::nullopt;
  }

  virtual Vector stateOnlyConstraint(const Vector& /*x*/, double /*t*/) const { return Vector(0); }
  virtual std::optional<Matrix> stateOnlyConstraintJacobian(const Vector& /*x*/, double /*t*/) const {
    return std::nullopt;
  }

  virtual Vector inequalityConstraint(const Vector& /*x*/, const Vector& /*u*/, double /*t*/) const {
    return Vector(0);
  }
  virtual std::optional<ConstraintJacobian> inequalityConstraintJacobian(const Vector& /*x*/, const Vector& /*u*/,
                                                                         double /*t*/) const {
    return std::nullopt;
  }
};

// Intermediate cost L_i and terminal cost Phi_i of one subsystem.
class StageCost {
 public:
  virtual ~StageCost() = default;

  virtual double intermediate(const Vector& x, const Vector& u, double t) const = 0;
  virtual double terminal(const Vector& /*x*/) const { return 0.0; }

  virtual std::optional<CostExpansion> intermediateExpansion(const Vector& /*x*/, const Vector& /*u*/,
                                                             double /*t*/) const {
    return std::nullopt;
  }
  virtual std::optional<TerminalCostExpansion> terminalExpansion(const Vector& /*x*/) const { return std::nullopt; }
};

/// V(x) = value + gradient^T dx + 1/2 dx^T hessian dx with dx = x - x_ref.
/// Used as the terminal heuristic of the last mode.
struct QuadraticValue {
  Vector x_ref;
  double value = 0.0;
  Vector gradient;
  Matrix hessian;

  double evaluate(const Vector& x) const;
  Vector gradientAt(const Vector& x) const;
};

}  // namespace fastslq::ocp
