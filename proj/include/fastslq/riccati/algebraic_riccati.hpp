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

#include "fastslq/common.hpp"

namespace fastslq::riccati {

struct AlgebraicRiccatiSolution {
  Matrix S;  // stabilizing solution of A'S + SA - SBR^-1B'S + Q = 0
  Matrix K;  // u = K x, K = -R^-1 B'S
};

/// Continuous-time algebraic Riccati equation via the matrix sign function of
/// the Hamiltonian. Throws Unstabilizable when the Hamiltonian has eigenvalues
/// on the imaginary axis or A + BK is not Hurwitz.
AlgebraicRiccatiSolution solveAlgebraicRiccati(const Matrix& A, const Matrix& B, const Matrix& Q, const Matrix& R);

}  // namespace fastslq::riccati
