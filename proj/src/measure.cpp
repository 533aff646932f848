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

#include "hyperfill/measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "hyperfill/error.hpp"
#include "hyperfill/quadrature.hpp"

namespace hyperfill {
namespace {

constexpr double kEdgeTol = 1e-10;

int Truncation(const Filling& filling, int max_level) {
  return (max_level < 0 || max_level > filling.levels()) ? filling.levels()
                                                          : max_level;
}

[[noreturn]] void QuadFail(const char* where, double at) {
  std::ostringstream msg;
  msg << where << ": quadrature tolerance not met near t = " << at;
  throw Error(ErrorKind::kQuadratureFailure, msg.str());
}

double PairwiseSum(const std::vector<double>& v, std::size_t lo,
                   std::size_t hi) {
  if (hi - lo <= 8) {
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += v[i];
    return s;
  }
  const std::size_t mid = lo + (hi - lo) / 2;
  return PairwiseSum(v, lo, mid) + PairwiseSum(v, mid, hi);
}

std::vector<double> Merge(std::vector<double> a, const std::vector<double>& b) {
  a.insert(a.end(), b.begin(), b.end());
  std::sort(a.begin(), a.end());
  a.erase(std::unique(a.begin(), a.end()), a.end());
  return a;
}

// int_lo^hi f(t) rho(t) dt with signed f.
double SignedIntegral(const RadialWeight& rho,
                      const std::function<double(double)>& f, double lo,
                      double hi, const char* where) {
  const auto cuts = rho.Breakpoints(lo, hi);
  quad::Options opt;
  opt.abs_tol = kEdgeTol;
  opt.rel_tol = 1e-12;
  const auto r = quad::AdaptiveSimpsonSplit(
      [&](double t) { return f(t) * rho.value(t); }, lo, hi, cuts, opt);
  if (!r.converged) QuadFail(where, r.failed_at);
  return r.value;
}

}  // namespace

bool EdgeBelow(const Filling& filling, EdgeId e, int max_level) {
  const int n = filling.vertex(filling.edge(e).a).level;
  return n < Truncation(filling, max_level);
}

double EdgeMeasure(const Filling& filling, const RadialWeight& rho,
                   EdgeId id) {
  const Edge& e = filling.edge(id);
  const int n = filling.vertex(e.a).level;
  const double masses = filling.vertex(e.a).mass + filling.vertex(e.b).mass;
  if (e.kind == EdgeKind::kVertical) return masses * rho.Integral(n, n + 1.0);
  return masses * 2.0 * rho.Integral(n, n + 0.5);
}

double VertexDensity(const Filling& filling, const RadialWeight& rho,
                     VertexId v) {
  const Vertex& vx = filling.vertex(v);
  return 2.0 * rho.value(vx.level) * vx.mass;
}

double IntegrateOverFilling(const Filling& filling, const RadialWeight& rho,
                            const EdgeFunction& f, int max_level) {
  std::vector<double> parts;
  parts.reserve(filling.num_edges());
  for (EdgeId id = 0; id < filling.num_edges(); ++id) {
    if (!EdgeBelow(filling, id, max_level)) continue;
    const Edge& e = filling.edge(id);
    const int n = filling.vertex(e.a).level;
    const double masses = filling.vertex(e.a).mass + filling.vertex(e.b).mass;
    std::vector<double> cuts;
    for (double b : rho.Breakpoints(n, n + 1.0)) {
      cuts.push_back(b - n);
      if (e.kind == EdgeKind::kHorizontal) cuts.push_back(1.0 - (b - n));
    }
    if (e.kind == EdgeKind::kHorizontal) cuts.push_back(0.5);
    quad::Options opt;
    opt.abs_tol = kEdgeTol;
    opt.rel_tol = 1e-12;
    const auto r = quad::AdaptiveSimpsonSplit(
        [&](double t) {
          const EdgePoint x{id, t};
          return f(x) * rho.value(GraphHeight(filling, x));
        },
        0.0, 1.0, cuts, opt);
    if (!r.converged) QuadFail("integrate_over_filling", n + r.failed_at);
    parts.push_back(masses * r.value);
  }
  return parts.empty() ? 0.0 : PairwiseSum(parts, 0, parts.size());
}

LevelMassSums ComputeLevelMassSums(const Filling& filling) {
  LevelMassSums sums;
  const auto levels = static_cast<std::size_t>(filling.levels()) + 1;
  sums.vertical.assign(levels, 0.0);
  sums.horizontal.assign(levels, 0.0);
  for (const Edge& e : filling.edges()) {
    const Vertex& a = filling.vertex(e.a);
    const double m = a.mass + filling.vertex(e.b).mass;
    auto& bucket = e.kind == EdgeKind::kVertical ? sums.vertical : sums.horizontal;
    bucket[static_cast<std::size_t>(a.level)] += m;
  }
  return sums;
}

std::vector<double> RadialLevelIntegrals(
    const Filling& filling, const RadialWeight& rho,
    const std::function<double(double)>& log_phi,
    const std::vector<double>& cuts, int max_level) {
  const int top = Truncation(filling, max_level);
  const LevelMassSums sums = ComputeLevelMassSums(filling);
  const auto log_integrand = [&](double t) {
    const double lp = log_phi(t);
    if (lp == -std::numeric_limits<double>::infinity()) return lp;
    return lp + rho.log_value(t);
  };
  const auto piece = [&](double lo, double hi) {
    const auto splits = Merge(rho.Breakpoints(lo, hi), cuts);
    const auto r = quad::IntegrateExpSplit(log_integrand, lo, hi, splits, 1e-12);
    if (!r.converged) QuadFail("radial integral", r.failed_at);
    return r.value();
  };
  std::vector<double> out;
  for (int n = 0; n < top; ++n) {
    const auto idx = static_cast<std::size_t>(n);
    double v = 0.0;
    if (sums.vertical[idx] > 0.0) v += sums.vertical[idx] * piece(n, n + 1.0);
    if (sums.horizontal[idx] > 0.0) {
      v += sums.horizontal[idx] * 2.0 * piece(n, n + 0.5);
    }
    out.push_back(v);
  }
  return out;
}

double IntegrateRadial(const Filling& filling, const RadialWeight& rho,
                       const std::function<double(double)>& phi,
                       int max_level) {
  const auto parts = RadialLevelIntegrals(
      filling, rho,
      [&](double t) {
        const double v = phi(t);
        if (v < 0.0) {
          throw Error(ErrorKind::kInvalidParameter, "radial integrand must be >= 0");
        }
        return v == 0.0 ? -std::numeric_limits<double>::infinity() : std::log(v);
      },
      {}, max_level);
  return parts.empty() ? 0.0 : PairwiseSum(parts, 0, parts.size());
}

double IntegrateAlongRay(const Filling& filling, const GeodesicRay& ray,
                         const RadialWeight& rho,
                         const std::function<double(double)>& f, RayMode mode,
                         double p) {
  if (!(p >= 1.0)) throw Error(ErrorKind::kInvalidParameter, "p must be >= 1");
  double total = 0.0;
  for (std::size_t n = 0; n + 1 < ray.vertices.size(); ++n) {
    const Vertex& lower = filling.vertex(ray.vertices[n]);
    const Vertex& upper = filling.vertex(ray.vertices[n + 1]);
    const double masses = lower.mass + upper.mass;
    const double h = static_cast<double>(n);
    if (mode == RayMode::kPlain) {
      total += masses * SignedIntegral(rho, f, h, h + 1.0, "integrate_along_ray");
      continue;
    }
    const auto fp = [&](double t) { return std::pow(std::abs(f(t)), p); };
    // Nearest vertex: lower half (midpoint included) to the lower end.
    total += masses / lower.mass *
             SignedIntegral(rho, fp, h, h + 0.5, "integrate_along_ray");
    total += masses / upper.mass *
             SignedIntegral(rho, fp, h + 0.5, h + 1.0, "integrate_along_ray");
  }
  return total;
}

RayAverageResult RayAverageRatio(const Filling& filling, const RadialWeight& rho,
                           const std::function<double(double)>& phi, double p,
                           int max_level) {
  const int top = Truncation(filling, max_level);
  RayAverageResult out;
  const MetricSpaceSample& z = filling.space();
  for (PointIndex xi = 0; xi < z.size(); ++xi) {
    const auto rays = EnumerateRays(filling, xi, 1, top);
    out.lhs += z.weight(xi) * IntegrateAlongRay(filling, rays.front(), rho, phi,
                                                RayMode::kMassNormalized, p);
  }
  out.rhs = IntegrateRadial(
      filling, rho, [&](double t) { return std::pow(phi(t), p); }, top);
  out.ratio = out.rhs > 0.0 ? out.lhs / out.rhs
                            : std::numeric_limits<double>::quiet_NaN();
  return out;
}

TotalMassResult TotalMass(const Filling& filling, const RadialWeight& rho,
                          int max_level) {
  if (max_level < 0 || max_level > filling.levels()) {
    throw Error(ErrorKind::kInvalidParameter, "N exceeds the filling depth");
  }
  TotalMassResult out;
  double mu = 0.0;
  for (EdgeId e = 0; e < filling.num_edges(); ++e) {
    if (EdgeBelow(filling, e, max_level)) mu += EdgeMeasure(filling, rho, e);
  }
  out.mu_XN = mu;
  out.nuZ_times_intrho = filling.space().total_mass() * rho.Integral(0.0, max_level);
  out.ratio = out.nuZ_times_intrho > 0.0 ? out.mu_XN / out.nuZ_times_intrho
                                         : std::numeric_limits<double>::quiet_NaN();
  return out;
}

ComparabilityReport CheckEdgeComparability(const Filling& filling) {
  ComparabilityReport r;
  for (const Edge& e : filling.edges()) {
    const double ma = filling.vertex(e.a).mass;
    const double mb = filling.vertex(e.b).mass;
    r.min_ratio = std::min(r.min_ratio, std::min(ma, mb) / (ma + mb));
    r.max_neighbor_ratio =
        std::max(r.max_neighbor_ratio, std::max(ma, mb) / std::min(ma, mb));
  }
  r.lower_bound = 1.0 / (1.0 + r.max_neighbor_ratio);
  return r;
}

}  // namespace hyperfill
