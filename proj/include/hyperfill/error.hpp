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

#ifndef HYPERFILL_ERROR_HPP_
#define HYPERFILL_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace hyperfill {

enum class ErrorKind {
  kParseError,
  kInvariantViolation,
  kCapacityExceeded,
  kInvalidParameter,
  kUnknownVertex,
  kUnknownEdge,
  kUnknownBoundaryPoint,
  kMismatchedTargets,
  kQuadratureFailure,
  kInsufficientMass,
  kTailUnknown,
  kHypothesisViolation,
  kRegimeMismatch,
  kConstructionFailure,
  kHorizonExhausted,
  kPreconditionFailure,
  kShellExhaustion,
};

std::string_view ErrorKindName(ErrorKind kind);

// Single exception type for the library; `kind()` is the machine-readable
// tag the CLI reports.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace hyperfill

#endif  // HYPERFILL_ERROR_HPP_
