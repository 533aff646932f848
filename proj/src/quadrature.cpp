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

#include "hyperfill/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace hyperfill::quad {
namespace {

constexpr double kRoundoff = 64.0 * std::numeric_limits<double>::epsilon();

struct Panel {
  double a, b, fa, fm, fb, whole;
};

double SimpsonOf(double a, double b, double fa, double fm, double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

// Classic recursive adaptive Simpson with tolerance splitting.
double Refine(const Integrand& f, const Panel& p, double eps, int depth,
              Result& out) {
  const double m = 0.5 * (p.a + p.b);
  const double lm = 0.5 * (p.a + m);
  const double rm = 0.5 * (m + p.b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = SimpsonOf(p.a, m, p.fa, flm, p.fm);
  const double right = SimpsonOf(m, p.b, p.fm, frm, p.fb);
  const double delta = left + right - p.whole;
  const double floor = kRoundoff * (std::abs(left) + std::abs(right));
  if (std::abs(delta) <= std::max(15.0 * eps, floor) || !std::isfinite(delta)) {
    if (!std::isfinite(delta)) {
      out.converged = false;
      if (std::isnan(out.failed_at)) out.failed_at = p.a;
    }
    out.error_estimate += std::abs(delta) / 15.0;
    return left + right + delta / 15.0;
  }
  if (depth <= 0) {
    out.converged = false;
    if (std::isnan(out.failed_at)) out.failed_at = p.a;
    out.error_estimate += std::abs(delta) / 15.0;
    return left + right + delta / 15.0;
  }
  return Refine(f, {p.a, m, p.fa, flm, p.fm, left}, 0.5 * eps, depth - 1,
                out) +
         Refine(f, {m, p.b, p.fm, frm, p.fb, right}, 0.5 * eps, depth - 1,
                out);
}

}  // namespace

Result AdaptiveSimpson(const Integrand& f, double a, double b,
                       const Options& options) {
  Result out;
  if (!(b > a)) return out;
  const int panels = std::max(1, options.initial_panels);
  const double h = (b - a) / panels;

  std::vector<double> nodes(2 * panels + 1);
  std::vector<double> values(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    nodes[i] = (i + 1 == nodes.size()) ? b : a + 0.5 * h * static_cast<double>(i);
    values[i] = f(nodes[i]);
  }
  double coarse = 0.0;
  for (int k = 0; k < panels; ++k) {
    coarse += SimpsonOf(nodes[2 * k], nodes[2 * k + 2], values[2 * k],
                        values[2 * k + 1], values[2 * k + 2]);
  }
  const double eps =
      std::max(options.abs_tol, options.rel_tol * std::abs(coarse)) / panels;
  double total = 0.0;
  for (int k = 0; k < panels; ++k) {
    const Panel p{nodes[2 * k],      nodes[2 * k + 2],
                  values[2 * k],     values[2 * k + 1],
                  values[2 * k + 2], 0.0};
    Panel seeded = p;
    seeded.whole = SimpsonOf(p.a, p.b, p.fa, p.fm, p.fb);
    total += Refine(f, seeded, eps, options.max_depth, out);
  }
  out.value = total;
  return out;
}

namespace {

// f with its endpoint values replaced by the one-sided limits just inside
// [lo, hi], so a jump sitting on a cut does not stall the refinement.
Integrand Inward(const Integrand& f, double lo, double hi) {
  const double l = std::nextafter(lo, hi);
  const double h = std::nextafter(hi, lo);
  if (!(l < h)) return f;
  return [&f, l, h](double t) { return f(std::clamp(t, l, h)); };
}

}  // namespace

Result AdaptiveSimpsonSplit(const Integrand& f, double a, double b,
                            std::span<const double> cuts,
                            const Options& options) {
  std::vector<double> points{a};
  for (double c : cuts) {
    if (c > a && c < b) points.push_back(c);
  }
  points.push_back(b);
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());

  Result out;
  const double pieces = static_cast<double>(points.size() - 1);
  Options per_piece = options;
  per_piece.abs_tol = options.abs_tol / std::max(1.0, pieces);
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    const Result r = AdaptiveSimpson(Inward(f, points[i], points[i + 1]),
                                     points[i], points[i + 1], per_piece);
    out.value += r.value;
    out.error_estimate += r.error_estimate;
    if (!r.converged && out.converged) {
      out.converged = false;
      out.failed_at = r.failed_at;
    }
  }
  return out;
}

double LogResult::value() const { return std::exp(log_value); }

double LogAddExp(double x, double y) {
  if (x == -std::numeric_limits<double>::infinity()) return y;
  if (y == -std::numeric_limits<double>::infinity()) return x;
  const double hi = std::max(x, y);
  const double lo = std::min(x, y);
  return hi + std::log1p(std::exp(lo - hi));
}

LogResult IntegrateExp(const Integrand& log_f, double a, double b,
                       double rel_tol, int max_depth) {
  LogResult out;
  if (!(b > a)) return out;
  constexpr int kProbe = 64;
  double shift = -std::numeric_limits<double>::infinity();
  for (int i = 0; i <= kProbe; ++i) {
    const double t = (i == kProbe) ? b : a + (b - a) * i / kProbe;
    const double g = log_f(t);
    if (std::isnan(g) || g == std::numeric_limits<double>::infinity()) {
      out.log_value = std::numeric_limits<double>::infinity();
      out.converged = false;
      out.failed_at = t;
      return out;
    }
    shift = std::max(shift, g);
  }
  if (shift == -std::numeric_limits<double>::infinity()) return out;

  const auto shifted = [&](double t) { return std::exp(log_f(t) - shift); };
  Options options;
  options.abs_tol = 0.0;
  options.rel_tol = rel_tol;
  options.max_depth = max_depth;
  Result r = AdaptiveSimpson(shifted, a, b, options);
  // A zero coarse estimate gives a zero tolerance; retry with an absolute
  // floor relative to the probed maximum (which is exp(0) = 1).
  if (!r.converged && r.value > 0.0 && r.value < 1e-300) {
    options.abs_tol = rel_tol * (b - a) * 1e-30;
    r = AdaptiveSimpson(shifted, a, b, options);
  }
  out.converged = r.converged;
  out.failed_at = r.failed_at;
  out.log_value = r.value > 0.0 ? shift + std::log(r.value)
                                : -std::numeric_limits<double>::infinity();
  return out;
}

LogResult IntegrateExpSplit(const Integrand& log_f, double a, double b,
                            std::span<const double> cuts, double rel_tol,
                            int max_depth) {
  std::vector<double> points{a};
  for (double c : cuts) {
    if (c > a && c < b) points.push_back(c);
  }
  points.push_back(b);
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());

  LogResult out;
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    const LogResult r = IntegrateExp(Inward(log_f, points[i], points[i + 1]),
                                     points[i], points[i + 1], rel_tol,
                                     max_depth);
    out.log_value = LogAddExp(out.log_value, r.log_value);
    if (!r.converged && out.converged) {
      out.converged = false;
      out.failed_at = r.failed_at;
    }
  }
  return out;
}

double Bisect(const std::function<double(double)>& f, double lo, double hi,
              double x_tol, int max_iter) {
  double f_lo = f(lo);
  if (f_lo == 0.0) return lo;
  for (int i = 0; i < max_iter; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi || hi - lo <= x_tol) break;
    const double f_mid = f(mid);
    if (f_mid == 0.0) return mid;
    if ((f_mid < 0.0) == (f_lo < 0.0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace hyperfill::quad
