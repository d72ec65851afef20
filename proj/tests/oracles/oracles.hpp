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

// Reference solutions used by the tests. They are written independently of
// the library (fixed-step schemes, dense linear algebra) and share only the
// Eigen types with it.

#include <optional>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Matrix exponential by scaling and squaring with a 20-term Taylor series.
Mat expm(const Mat& A);

/// Fixed-step RK4 solution of -dS/dt = A'S + SA - SBR^-1B'S + Q, S(T) = Q_f,
/// integrated from T back to 0. Returns S(0).
Mat riccatiOdeRk4(const Mat& A, const Mat& B, const Mat& Q, const Mat& R, const Mat& Qf, double horizon,
                  double step);

/// Optimal cost 1/2 x0' S(0) x0 of the finite-horizon LQR problem.
double lqrCostRk4(const Mat& A, const Mat& B, const Mat& Q, const Mat& R, const Mat& Qf, const Vec& x0,
                  double horizon, double step);

/// Newton-Kleinman iteration for A'S + SA - SBR^-1B'S + Q = 0 from a
/// stabilizing initial gain (u = -K0 x); Lyapunov steps by Kronecker solves.
Mat newtonKleinman(const Mat& A, const Mat& B, const Mat& Q, const Mat& R, const Mat& K0, int iterations = 60);

/// Affine mode constraint C x + D u + e = 0.
struct ModeConstraint {
  Mat C, D;
  Vec e;
};

struct KktSolution {
  std::vector<double> times;  // N + 1 nodes
  std::vector<Vec> states;
  std::vector<Vec> inputs;  // N entries, input held on [t_k, t_k+1)
  double cost = 0.0;
};

/// Direct transcription with explicit Euler on N uniform intervals of
/// [switching_times.front(), switching_times.back()]. Node k obeys the
/// constraint of the mode containing t_k (left-closed intervals). The KKT
/// system is assembled sparse and solved by LU.
KktSolution kktEuler(const Mat& A, const Mat& B, const Mat& Q, const Mat& R, const Mat& Qf, const Vec& x0,
                     const std::vector<double>& switching_times,
                     const std::vector<std::optional<ModeConstraint>>& constraints, int N);

/// Richardson extrapolation 2 x_2N - x_N of the states at the N + 1 coarse
/// nodes, removing the first-order Euler error.
std::vector<Vec> richardsonStates(const KktSolution& coarse, const KktSolution& fine);

}  // namespace oracle
