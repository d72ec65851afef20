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

#include <vector>

#include "fastslq/lq/lq_approximation.hpp"

namespace fastslq::riccati {

/// Default weight of the state-only constraint penalty rho * F'F.
inline constexpr double kDefaultStateConstraintPenalty = 100.0;

// Time-invariant part of the constrained LQR coefficients at one node. The
// raw terms (B, P, R^-1, r, q) are carried along because the feedback terms
// L~, l~, l~_e also depend on the value function.
//
//   D+ = R^-1 D' (D R^-1 D')^-1
//   A~ = A - B D+ C,  C~ = D+ C,  D~ = D+ D,  e~ = D+ e
//   Q~ = Q + C~'R C~ - P C~ - (P C~)' + rho F'F
//   q~ = qv - C~'r + rho F'h
//   R~ = (I - D~)' R (I - D~)
struct ProjectedLqCoefficients {
  double t = 0.0;
  Matrix Dpinv;
  Matrix Atilde;
  Matrix Ctilde;
  Matrix Dtilde;
  Matrix nullProjector;  // I - D~
  Vector etilde;
  Matrix Qtilde;
  Vector qtilde;
  Matrix Rtilde;

  Matrix B;
  Matrix P;
  Matrix R;
  Matrix Rinv;
  Vector r;
  double q = 0.0;
};

/// Throws RankDeficientConstraint when D R^-1 D' stays ill-conditioned
/// (condition number above 1e12) after one Tikhonov retry.
ProjectedLqCoefficients projectConstraints(const lq::LqNode& node, double rho = kDefaultStateConstraintPenalty);

/// Linear interpolation of projected coefficients, writing into out so that
/// repeated calls reuse its storage.
void interpolateProjected(const std::vector<ProjectedLqCoefficients>& nodes, double t, ProjectedLqCoefficients& out);

}  // namespace fastslq::riccati
