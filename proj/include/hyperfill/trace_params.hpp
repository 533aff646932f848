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

// Regime parameters built from the weight
//   w(t) = exp(-eps p t / (p-1)) rho(t)^(1/(1-p))      (p > 1)
//   g(t) = exp(-eps t) / rho(t)                          (p = 1)
// R = int_0^inf w (ess sup g when p = 1) and calR = sup over unit
// rho-mass cells of int_cell w.

#ifndef HYPERFILL_TRACE_PARAMS_HPP_
#define HYPERFILL_TRACE_PARAMS_HPP_

#include <optional>
#include <string>
#include <vector>

#include "hyperfill/radial_weight.hpp"

namespace hyperfill {

// Where an "infinite" verdict comes from.
enum class Provenance {
  kNone,          // finite value
  kAnalytic,      // closed-form certificate from the family
  kDeclared,      // table declared its tail divergent
  kNumericGuard,  // partial values passed kDivergenceGuard
};

std::string ProvenanceName(Provenance p);

inline constexpr double kDivergenceGuard = 1e12;

struct Quantity {
  double value = 0.0;
  bool infinite = false;
  Provenance provenance = Provenance::kNone;
  // Set when the tail could not be certified; value is then a lower bound.
  bool lower_bound = false;
};

struct ParamOptions {
  double alpha = 2.0;
  double t_max = 80.0;
  double tol = 1e-12;
  int max_cells = 200;
};

// log w(t) (p > 1) or log g(t) (p = 1).
double LogRpIntegrand(const RadialWeight& rho, double p, double epsilon,
                      double t);

struct FpCertificate {
  bool member = true;
  // Per unit cell [k, k+1) up to the horizon: log of int w (p > 1) or of
  // sup g (p = 1). Logs because gaussian weights overflow a double.
  std::vector<double> log_local_norms;
  std::optional<double> singular_at;
  std::string reason;
};

FpCertificate FpMembership(const RadialWeight& rho, double p, double alpha,
                           double horizon);

// Local quantity on [a, b]: int_a^b w (p > 1) or sup_[a,b] g (p = 1),
// +inf when the quadrature or sampling blows up.
struct LocalNorm {
  double log_value = 0.0;
  bool finite = true;
  std::optional<double> singular_at;

  double value() const;  // +inf when not finite or on overflow
};
LocalNorm LocalRpNorm(const RadialWeight& rho, double p, double epsilon,
                      double a, double b);

Quantity ParamR(const RadialWeight& rho, double p, const ParamOptions& opt);

struct UnitMassPartition {
  std::vector<double> breakpoints;  // t_1 = 0 < t_2 < ... < t_{K+1}
  std::vector<double> masses;       // int over O_k
  // Mass left over [t_{K+1}, horizon) when it is below 1.
  double partial_from = 0.0;
  double partial_mass = 0.0;

  std::size_t cells() const { return masses.size(); }
};

UnitMassPartition PartitionUnitMass(const RadialWeight& rho, int max_cells,
                                    double t_max, double tol = 1e-12);

struct CalRResult {
  Quantity value;
  std::vector<double> cell_values;
  bool eventually_monotone = false;
  bool used_R = false;  // finite measure or p = 1
};

CalRResult ParamCalR(const RadialWeight& rho, double p, const ParamOptions& opt);

enum class MeasureRegime { kFinite, kInfinite, kUnknown };

struct RegimeReport {
  double p = 2.0;
  double alpha = 2.0;
  std::string rho;
  MeasureRegime mu = MeasureRegime::kUnknown;
  Quantity R;
  CalRResult calR;
  bool traces_exist_N = false;       // calR < inf
  bool traces_exist_dotN = false;    // R < inf
  bool traces_vanish = false;        // mu infinite and calR < inf
};

RegimeReport ClassifyRegime(const RadialWeight& rho, double p,
                            const ParamOptions& opt);

}  // namespace hyperfill

#endif  // HYPERFILL_TRACE_PARAMS_HPP_
