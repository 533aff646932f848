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

// Adaptive Simpson quadrature, plus a log-space variant for integrands of
// the form exp(g(t)) whose magnitude over- or underflows a double.

#ifndef HYPERFILL_QUADRATURE_HPP_
#define HYPERFILL_QUADRATURE_HPP_

#include <functional>
#include <limits>
#include <span>

namespace hyperfill::quad {

using Integrand = std::function<double(double)>;

struct Result {
  double value = 0.0;
  double error_estimate = 0.0;
  bool converged = true;
  // Left end of the first panel that hit the depth limit (NaN if none).
  double failed_at = std::numeric_limits<double>::quiet_NaN();
};

struct Options {
  double abs_tol = 1e-10;
  double rel_tol = 0.0;
  int max_depth = 40;
  int initial_panels = 8;
};

Result AdaptiveSimpson(const Integrand& f, double a, double b,
                       const Options& options = {});

// Same, but splits [a, b] at every point of `cuts` lying strictly inside.
Result AdaptiveSimpsonSplit(const Integrand& f, double a, double b,
                            std::span<const double> cuts,
                            const Options& options = {});

struct LogResult {
  // log of the integral; -inf for an identically zero integrand.
  double log_value = -std::numeric_limits<double>::infinity();
  bool converged = true;
  double failed_at = std::numeric_limits<double>::quiet_NaN();

  double value() const;
};

// Integrates exp(log_f(t)) over [a, b] with relative tolerance `rel_tol`.
LogResult IntegrateExp(const Integrand& log_f, double a, double b,
                       double rel_tol = 1e-12, int max_depth = 40);

LogResult IntegrateExpSplit(const Integrand& log_f, double a, double b,
                            std::span<const double> cuts,
                            double rel_tol = 1e-12, int max_depth = 40);

double LogAddExp(double x, double y);

// Bisection for a root of a monotone function on [lo, hi] with
// f(lo), f(hi) of opposite sign. Stops when the bracket is below `x_tol`
// or cannot shrink further.
double Bisect(const std::function<double(double)>& f, double lo, double hi,
              double x_tol = 0.0, int max_iter = 200);

}  // namespace hyperfill::quad

#endif  // HYPERFILL_QUADRATURE_HPP_
