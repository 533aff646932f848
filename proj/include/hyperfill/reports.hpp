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

// The verification matrix: for each scenario, classify the regime, predict
// how traces behave, run the matching test functions and compare.

#ifndef HYPERFILL_REPORTS_HPP_
#define HYPERFILL_REPORTS_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hyperfill/documents.hpp"
#include "hyperfill/radial_weight.hpp"
#include "hyperfill/trace_params.hpp"

namespace hyperfill {

enum class ScenarioCheck { kTraces, kModulus };

struct Scenario {
  std::string name;
  std::string rho;  // spec string, see ParseRhoSpec
  double p = 2.0;
  double alpha = 2.0;
  double tau = 1.5;
  std::string space = "cantor:depth=4,scale=0.9";
  int levels = 16;
  ScenarioCheck check = ScenarioCheck::kTraces;
  double a = 0.0;  // modulus segment
  double b = 2.0;
  // When set, the row also fails if the computed regime disagrees.
  std::optional<bool> expect_calR_finite;
  std::optional<bool> expect_modulus_positive;
};

std::vector<Scenario> DefaultScenarios();
// [{"name", "rho", "p", "alpha", "tau", "space", "levels", "check",
//   "interval": [a, b], "expect_calR_finite", "expect_modulus_positive"}]
std::vector<Scenario> ScenariosFromJson(const Json& doc);

struct FunctionOutcome {
  std::string name;
  std::string expected;  // converged | converged_zero | oscillating | diverged
  int points = 0;
  int converged = 0;
  int oscillating = 0;
  int diverged = 0;
  int undetermined = 0;
  bool ray_independent = true;
  double max_abs_value = 0.0;  // over converged T values
  double max_gap = 0.0;        // |T - tilde| where both converge
  double min_band = 0.0;       // min limsup - liminf over oscillating T
  double N_norm = 0.0;
  bool agree = false;
};

struct VerificationRow {
  Scenario scenario;
  std::string rho_label;
  std::optional<bool> mu_finite;
  Quantity R;
  Quantity calR;
  std::string predicted;
  std::string observed;
  std::vector<FunctionOutcome> functions;
  Json modulus;  // certificate for modulus rows
  std::string error;
  bool agree = false;
};

struct VerificationMatrix {
  std::vector<VerificationRow> rows;
  bool all_agree() const;
};

struct VerifyOptions {
  std::uint64_t seed = 7;
  int smooth_per_row = 4;
  double tmax = 80.0;
  double tol = 1e-4;
  double zero_tol = 1e-3;
};

// Rows run concurrently; output order follows the input.
VerificationMatrix RunVerification(const std::vector<Scenario>& scenarios,
                                   const VerifyOptions& opt = {});

Json ToJson(const VerificationRow& row);
Json ToJson(const VerificationMatrix& m);

}  // namespace hyperfill

#endif  // HYPERFILL_REPORTS_HPP_
