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

// Sampling-based detection of local blow-up of a positive function given
// by its logarithm.

#ifndef HYPERFILL_SINGULARITY_HPP_
#define HYPERFILL_SINGULARITY_HPP_

#include <functional>

namespace hyperfill {

inline constexpr int kSamplesPerUnit = 4096;
// Exponent s of a |t - c|^-s blow-up above which the function is treated
// as non-integrable / unbounded. Sampling noise keeps these off 1 and 0.
inline constexpr double kIntegrableExponent = 0.9;
inline constexpr double kBoundedExponent = 0.1;

struct BlowupReport {
  double log_max = 0.0;   // largest log value seen (dense + zoom samples)
  double location = 0.0;  // where it was seen
  // Estimated s in f ~ |t - c|^-s near the worst local maximum.
  double exponent = 0.0;
  // An isolated sample more than kSpikeJump above both neighbours.
  bool spike = false;
};

// Samples log_f at kSamplesPerUnit points per unit on [a, b], then zooms
// into the largest local maxima to estimate the blow-up exponent.
BlowupReport DetectBlowup(const std::function<double(double)>& log_f, double a,
                          double b);

}  // namespace hyperfill

#endif  // HYPERFILL_SINGULARITY_HPP_
