// Copyright 2026 The hyperfill Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "hyperfill/error.hpp"

namespace hyperfill {

std::string_view ErrorKindName(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kParseError: return "ParseError";
    case ErrorKind::kInvariantViolation: return "InvariantViolation";
    case ErrorKind::kCapacityExceeded: return "CapacityExceeded";
    case ErrorKind::kInvalidParameter: return "InvalidParameter";
    case ErrorKind::kUnknownVertex: return "UnknownVertex";
    case ErrorKind::kUnknownEdge: return "UnknownEdge";
    case ErrorKind::kUnknownBoundaryPoint: return "UnknownBoundaryPoint";
    case ErrorKind::kMismatchedTargets: return "MismatchedTargets";
    case ErrorKind::kQuadratureFailure: return "QuadratureFailure";
    case ErrorKind::kInsufficientMass: return "InsufficientMass";
    case ErrorKind::kTailUnknown: return "TailUnknown";
    case ErrorKind::kHypothesisViolation: return "HypothesisViolation";
    case ErrorKind::kRegimeMismatch: return "RegimeMismatch";
    case ErrorKind::kConstructionFailure: return "ConstructionFailure";
    case ErrorKind::kHorizonExhausted: return "HorizonExhausted";
    case ErrorKind::kPreconditionFailure: return "PreconditionFailure";
    case ErrorKind::kShellExhaustion: return "ShellExhaustion";
  }
  return "Unknown";
}

}  // namespace hyperfill
