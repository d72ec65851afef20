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

#include "fastslq/common.hpp"

namespace fastslq {

std::string_view errorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::StepSizeUnderflow: return "StepSizeUnderflow";
    case ErrorCode::NonFiniteRhs: return "NonFiniteRhs";
    case ErrorCode::MaxStepsExceeded: return "MaxStepsExceeded";
    case ErrorCode::OutOfSpan: return "OutOfSpan";
    case ErrorCode::OutOfHorizon: return "OutOfHorizon";
    case ErrorCode::NonFiniteCost: return "NonFiniteCost";
    case ErrorCode::NonFiniteJacobian: return "NonFiniteJacobian";
    case ErrorCode::NonFiniteDerivative: return "NonFiniteDerivative";
    case ErrorCode::RankDeficientConstraint: return "RankDeficientConstraint";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::RiccatiBlowup: return "RiccatiBlowup";
    case ErrorCode::DivergentRollout: return "DivergentRollout";
    case ErrorCode::StepRejected: return "StepRejected";
    case ErrorCode::MaxIterationsReached: return "MaxIterationsReached";
    case ErrorCode::Unstabilizable: return "Unstabilizable";
    case ErrorCode::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

SolverError::SolverError(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(errorCodeName(code)) + ": " + message), code_(code) {}

void fail(ErrorCode code, const std::string& message) { throw SolverError(code, message); }

}  // namespace fastslq
