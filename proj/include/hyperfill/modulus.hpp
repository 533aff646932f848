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

// p-modulus of a single vertical segment [a, b]: positive exactly when
// w = exp(-eps p t/(p-1)) rho^(1/(1-p)) is integrable on [a, b] (p > 1) or
// g = exp(-eps t)/rho is bounded there (p = 1). Certificates only; the
// modulus itself is never optimised.

#ifndef HYPERFILL_MODULUS_HPP_
#define HYPERFILL_MODULUS_HPP_

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hyperfill/filling.hpp"
#include "hyperfill/radial_weight.hpp"

namespace hyperfill {

struct Condition1 {
  bool holds = true;
  // int_a^b w (p > 1) or sup g (p = 1); +inf when it fails.
  double norm = 0.0;
  double log_norm = 0.0;
  std::optional<double> singular_at;
};

Condition1 CheckCondition1(const RadialWeight& rho, double p, double alpha,
                           double a, double b);

struct WitnessShell {
  // Parts of [a, b] (one per side of the singular point).
  std::vector<std::pair<double, double>> pieces;
  double lambda = 0.0;         // int_shell w (p > 1) or int exp(-eps t)
  double line_integral = 0.0;  // int phi exp(-eps t) dt, 1 by normalisation
  double energy = 0.0;         // int phi^p rho dt
  int level = 0;               // k: 2^k < lambda, or g in (2^k, 2^(k+1)]
};

struct ZeroModulusWitness {
  double singular_at = 0.0;
  std::vector<WitnessShell> shells;
  std::vector<double> line_partial;
  std::vector<double> energy_partial;
  // The admissible density along the segment.
  std::function<double(double)> phi;
};

ZeroModulusWitness WitnessZeroModulus(const RadialWeight& rho, double p,
                                      double alpha, double a, double b,
                                      int depth = 8);

struct ModulusCertificate {
  bool positive = true;
  double lower_bound = 0.0;  // Mod_p >= lower_bound when positive
  Condition1 condition;
  std::optional<ZeroModulusWitness> witness;
};

ModulusCertificate ProbeModulus(const RadialWeight& rho, double p, double alpha,
                                double a, double b, int depth = 8);

struct HolderCheck {
  double lhs = 0.0;   // int_curve phi ds
  double rhs = 0.0;   // (int_curve phi^p dmu)^(1/p)
  double holder_constant = 0.0;     // best C in lhs <= C rhs for this curve
  double empirical_constant = 0.0;  // lhs / rhs
  double ratio = 0.0;               // lhs / (C rhs), <= 1
  // min vertex mass along the curve over nu(Z).
  double mass_lower_bound = 0.0;
};

// phi(i, t): density at fraction t of the i-th curve edge (from edge.a to
// edge.b). Edges must lie below level N.
HolderCheck HolderBoundCheck(
    const Filling& filling, const RadialWeight& rho, double p,
    const std::vector<EdgeId>& curve,
    const std::function<double(std::size_t, double)>& phi, int max_level = -1);

}  // namespace hyperfill

#endif  // HYPERFILL_MODULUS_HPP_
