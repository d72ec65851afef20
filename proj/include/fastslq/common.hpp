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

#include <stdexcept>
#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace fastslq {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

enum class ErrorCode {
  InvalidArgument,
  DimensionMismatch,
  StepSizeUnderflow,
  NonFiniteRhs,
  MaxStepsExceeded,
  OutOfSpan,
  OutOfHorizon,
  NonFiniteCost,
  NonFiniteJacobian,
  NonFiniteDerivative,
  RankDeficientConstraint,
  NonFinite,
  RiccatiBlowup,
  DivergentRollout,
  StepRejected,
  MaxIterationsReached,
  Unstabilizable,
  ConfigError,
};

std::string_view errorCodeName(ErrorCode code);

/// Single exception type for the library. The code identifies the failure
/// class; the message carries context such as the offending time or index.
class SolverError : public std::runtime_error {
 public:
  SolverError(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& message);

inline bool allFinite(const Eigen::Ref<const Matrix>& m) { return m.allFinite(); }

/// Replaces m by its symmetric part.
inline void symmetrize(Matrix& m) { m = 0.5 * (m + m.transpose()).eval(); }

}  // namespace fastslq
