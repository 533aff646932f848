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

#include "hyperfill/trace_lab.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <future>
#include <limits>
#include <numbers>
#include <thread>

#include "hyperfill/error.hpp"
#include "hyperfill/measure.hpp"
#include "hyperfill/quadrature.hpp"
#include "hyperfill/trace_params.hpp"

namespace hyperfill {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kStep = 1.0 / 64.0;

struct GaussRule {
  std::array<double, 16> x{};
  std::array<double, 16> w{};
};

// Gauss-Legendre nodes on [-1, 1] by Newton iteration on P_16.
const GaussRule& Gauss16() {
  static const GaussRule rule = [] {
    GaussRule r;
    constexpr int n = 16;
    for (int i = 0; i < n; ++i) {
      double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
      double dp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0;
        double p1 = x;
        for (int k = 2; k <= n; ++k) {
          const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double dx = p1 / dp;
        x -= dx;
        if (std::abs(dx) < 1e-16) break;
      }
      r.x[i] = x;
      r.w[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return r;
  }();
  return rule;
}

// log int_lo^hi exp(lw) for lw smooth on [lo, hi].
double LogGauss(const std::function<double(double)>& lw, double lo, double hi) {
  if (!(hi > lo)) return -kInf;
  const GaussRule& g = Gauss16();
  const double mid = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  std::array<double, 16> v{};
  double m = -kInf;
  for (int i = 0; i < 16; ++i) {
    v[i] = lw(mid + half * g.x[i]);
    m = std::max(m, v[i]);
  }
  if (m == -kInf) return -kInf;
  double s = 0.0;
  for (int i = 0; i < 16; ++i) s += g.w[i] * std::exp(v[i] - m);
  return m + std::log(s * half);
}

// t -> log int_a^t exp(lw) on [a, b], tabulated at nodes no further apart
// than kStep and at every kink of lw.
class LogPrimitive {
 public:
  LogPrimitive(std::function<double(double)> lw, double a, double b,
               const std::vector<double>& breaks)
      : lw_(std::move(lw)) {
    const int steps = std::max(1, static_cast<int>(std::ceil((b - a) / kStep)));
    nodes_.reserve(steps + breaks.size() + 1);
    for (int i = 0; i < steps; ++i) nodes_.push_back(a + (b - a) * i / steps);
    for (double x : breaks) {
      if (x > a && x < b) nodes_.push_back(x);
    }
    nodes_.push_back(b);
    std::sort(nodes_.begin(), nodes_.end());
    nodes_.erase(std::unique(nodes_.begin(), nodes_.end()), nodes_.end());
    prefix_.assign(nodes_.size(), -kInf);
    for (std::size_t i = 1; i < nodes_.size(); ++i) {
      prefix_[i] = quad::LogAddExp(prefix_[i - 1],
                                   LogGauss(lw_, nodes_[i - 1], nodes_[i]));
    }
    suffix_.assign(nodes_.size(), -kInf);
    for (std::size_t i = nodes_.size() - 1; i-- > 0;) {
      suffix_[i] = quad::LogAddExp(suffix_[i + 1],
                                   LogGauss(lw_, nodes_[i], nodes_[i + 1]));
    }
  }

  double a() const { return nodes_.front(); }
  double b() const { return nodes_.back(); }
  double log_total() const { return prefix_.back(); }
  double lw(double t) const { return lw_(t); }

  double LogIntegral(double t) const {
    if (t <= a()) return -kInf;
    if (t >= b()) return log_total();
    const auto it = std::upper_bound(nodes_.begin(), nodes_.end(), t);
    const auto i = static_cast<std::size_t>(it - nodes_.begin()) - 1;
    if (t == nodes_[i]) return prefix_[i];
    return quad::LogAddExp(prefix_[i], LogGauss(lw_, nodes_[i], t));
  }

  // log int_t^b exp(lw); avoids 1 - F cancelling near the right end.
  double LogTail(double t) const {
    if (t <= a()) return suffix_.front();
    if (t >= b()) return -kInf;
    const auto it = std::upper_bound(nodes_.begin(), nodes_.end(), t);
    const auto i = static_cast<std::size_t>(it - nodes_.begin());
    if (t == nodes_[i - 1]) return suffix_[i - 1];
    return quad::LogAddExp(suffix_[i], LogGauss(lw_, t, nodes_[i]));
  }

  // Smallest t with LogIntegral(t) >= target.
  double Solve(double target) const {
    if (target <= -kInf) return a();
    if (target >= log_total()) return b();
    const auto it = std::lower_bound(prefix_.begin(), prefix_.end(), target);
    const auto i = static_cast<std::size_t>(it - prefix_.begin());
    if (prefix_[i] == target) return nodes_[i];
    return quad::Bisect([&](double t) { return LogIntegral(t) - target; },
                        nodes_[i - 1], nodes_[i]);
  }

 private:
  std::function<double(double)> lw_;
  std::vector<double> nodes_;
  std::vector<double> prefix_;
  std::vector<double> suffix_;
};

// Cells on which U rises by `mass / 2` and falls back (tents) or rises by
// `mass` (staircase), with |U'| proportional to exp(lw).
struct CellProfile {
  std::vector<TentCell> cells;
  std::vector<LogPrimitive> prims;
  std::vector<double> starts;
  double epsilon = 0.0;
  bool staircase = false;

  // Index of the cell holding t, or -1.
  int Find(double t) const {
    const auto it = std::upper_bound(starts.begin(), starts.end(), t);
    if (it == starts.begin()) return -1;
    const auto i = static_cast<std::size_t>(it - starts.begin()) - 1;
    return t <= cells[i].b ? static_cast<int>(i) : -1;
  }

  double Value(double t) const {
    const int i = Find(t);
    if (staircase) {
      if (i < 0) {
        const auto done = std::upper_bound(starts.begin(), starts.end(), t) -
                          starts.begin();
        return static_cast<double>(done);
      }
      const LogPrimitive& pr = prims[i];
      return i + std::exp(pr.LogIntegral(t) - pr.log_total());
    }
    if (i < 0) return 0.0;
    const LogPrimitive& pr = prims[i];
    const double f = std::exp(pr.LogIntegral(t) - pr.log_total());
    if (f <= 0.5) return 2.0 * f;
    return std::min(1.0, 2.0 * std::exp(pr.LogTail(t) - pr.log_total()));
  }

  double LogDensity(double t) const {
    const int i = Find(t);
    if (i < 0) return -kInf;
    const LogPrimitive& pr = prims[i];
    const double mass = staircase ? 0.0 : std::numbers::ln2;
    return mass + pr.lw(t) - pr.log_total() + epsilon * t;
  }
};

RadialFunction FromCells(std::string tag, double epsilon,
                         const std::vector<std::pair<double, double>>& spans,
                         const std::function<double(double)>& lw,
                         const RadialWeight* rho, bool staircase) {
  auto prof = std::make_shared<CellProfile>();
  prof->epsilon = epsilon;
  prof->staircase = staircase;
  for (const auto& [a, b] : spans) {
    const std::vector<double> breaks =
        rho != nullptr ? rho->Breakpoints(a, b) : std::vector<double>{};
    LogPrimitive pr(lw, a, b, breaks);
    const double c = pr.Solve(pr.log_total() - std::numbers::ln2);
    prof->cells.push_back({a, c, b});
    prof->starts.push_back(a);
    prof->prims.push_back(std::move(pr));
  }
  RadialFunction u;
  u.tag = std::move(tag);
  u.epsilon = epsilon;
  u.cells = prof->cells;
  for (const TentCell& c : prof->cells) {
    u.features.push_back(c.a);
    if (!staircase) u.features.push_back(c.c);
    u.features.push_back(c.b);
  }
  std::sort(u.features.begin(), u.features.end());
  u.features.erase(std::unique(u.features.begin(), u.features.end()),
                   u.features.end());
  u.profile = [prof](double t) { return prof->Value(t); };
  u.log_density = [prof](double t) { return prof->LogDensity(t); };
  return u;
}

double EpsilonOf(const BuildOptions& opt) {
  if (!(opt.alpha > 1.0)) {
    throw Error(ErrorKind::kInvalidParameter, "alpha must be > 1");
  }
  return std::log(opt.alpha);
}

ParamOptions ParamsFor(const BuildOptions& opt) {
  ParamOptions po;
  po.alpha = opt.alpha;
  return po;
}

void RequireRInfinite(const RadialWeight& rho, double p, const BuildOptions& opt,
                      const char* who) {
  if (!ParamR(rho, p, ParamsFor(opt)).infinite) {
    throw Error(ErrorKind::kRegimeMismatch,
                std::string(who) + ": R is finite for " + rho.Describe());
  }
}

// Intervals of length <= 1 on which exp(-eps t)/rho >= 2^k, k = 1, 2, ...,
// found on a grid of kSamplesPerUnit points per unit.
std::vector<std::pair<double, double>> LevelSetIntervals(const RadialWeight& rho,
                                                         double eps,
                                                         double horizon) {
  const double h = 1.0 / 4096.0;
  const auto log_g = [&](double t) { return -eps * t - rho.log_value(t); };
  std::vector<std::pair<double, double>> out;
  long i = 0;
  const long last = static_cast<long>(std::floor(horizon / h));
  for (int k = 1; i < last; ++k) {
    const double level = k * std::numbers::ln2;
    while (i < last && log_g(i * h) < level) ++i;
    if (i >= last) break;
    const long start = i;
    while (i + 1 <= last && (i + 1 - start) * h <= 1.0 &&
           log_g((i + 1) * h) >= level) {
      ++i;
    }
    if (i == start) {
      ++i;
      continue;
    }
    out.emplace_back(start * h, i * h);
  }
  return out;
}

void RequireCells(std::size_t found, const BuildOptions& opt, ErrorKind kind,
                  const char* who) {
  if (static_cast<int>(found) < opt.min_cells) {
    throw Error(kind, std::string(who) + ": only " + std::to_string(found) +
                          " cells fit below the horizon");
  }
}

class RadialX : public XFunction {
 public:
  explicit RadialX(RadialFunction u) : u_(std::move(u)) {}

  double OnVertical(const Filling& filling, VertexId lower, VertexId,
                    double s) const override {
    return u_.value(filling.vertex(lower).level + s);
  }
  double AtVertex(const Filling& filling, VertexId v) const override {
    return u_.value(filling.vertex(v).level);
  }
  bool radial() const override { return true; }
  std::vector<double> Features(int n) const override {
    std::vector<double> out;
    auto it = std::lower_bound(u_.features.begin(), u_.features.end(),
                               static_cast<double>(n));
    for (; it != u_.features.end() && *it < n + 1.0; ++it) out.push_back(*it - n);
    return out;
  }

 private:
  RadialFunction u_;
};

std::vector<double> Fractions(int per_edge, std::vector<double> extra) {
  for (int k = 0; k < per_edge; ++k) {
    extra.push_back(static_cast<double>(k) / per_edge);
  }
  std::sort(extra.begin(), extra.end());
  extra.erase(std::unique(extra.begin(), extra.end()), extra.end());
  while (!extra.empty() && extra.back() >= 1.0) extra.pop_back();
  return extra;
}

double ValueAt(const std::vector<double>& heights,
               const std::vector<double>& values, double h) {
  const auto it = std::lower_bound(heights.begin(), heights.end(), h);
  if (it == heights.end()) return values.back();
  return values[static_cast<std::size_t>(it - heights.begin())];
}

}  // namespace

double RadialFunction::density(double t) const {
  const double l = log_density(t);
  return l == -kInf ? 0.0 : std::exp(l);
}

std::shared_ptr<const XFunction> FromRadial(RadialFunction u) {
  return std::make_shared<RadialX>(std::move(u));
}

SobolevNorms ComputeSobolevNorms(const Filling& filling, const RadialWeight& rho,
                                 const RadialFunction& u, double p,
                                 int max_level) {
  if (!(p >= 1.0)) throw Error(ErrorKind::kInvalidParameter, "p must be >= 1");
  const int top = max_level < 0 ? filling.levels()
                                : std::min(max_level, filling.levels());
  SobolevNorms out;
  out.level_u = RadialLevelIntegrals(
      filling, rho,
      [&](double t) {
        const double v = std::abs(u.value(t));
        return v == 0.0 ? -kInf : p * std::log(v);
      },
      u.features, top);
  out.level_g = RadialLevelIntegrals(
      filling, rho, [&](double t) { return p * u.log_density(t); }, u.features,
      top);
  const LevelMassSums sums = ComputeLevelMassSums(filling);
  for (int n = 0; n < top; ++n) {
    const auto i = static_cast<std::size_t>(n);
    out.level_weight.push_back(sums.vertical[i] + 2.0 * sums.horizontal[i]);
  }
  double su = 0.0;
  double sg = 0.0;
  for (double v : out.level_u) su += v;
  for (double v : out.level_g) sg += v;
  out.Lp_u = std::pow(su, 1.0 / p);
  out.Lp_g = std::pow(sg, 1.0 / p);
  out.N_norm = out.Lp_u + out.Lp_g;
  out.dotN_norm = std::abs(u.value(0.0)) + out.Lp_g;
  return out;
}

double RadialEnergy(const RadialWeight& rho, const RadialFunction& u, double p,
                    double a, double b) {
  std::vector<double> cuts = rho.Breakpoints(a, b);
  for (double f : u.features) {
    if (f > a && f < b) cuts.push_back(f);
  }
  std::sort(cuts.begin(), cuts.end());
  const auto r = quad::IntegrateExpSplit(
      [&](double t) {
        const double lq = u.log_density(t);
        return lq == -kInf ? -kInf : p * lq + rho.log_value(t);
      },
      a, b, cuts, 1e-12);
  if (!r.converged) {
    throw Error(ErrorKind::kQuadratureFailure,
                "energy integral did not converge near t=" +
                    std::to_string(r.failed_at));
  }
  return r.value();
}

double UpperGradientDefect(const Filling& filling, const RadialFunction& u,
                           const std::vector<VertexId>& path,
                           int samples_per_edge) {
  if (path.size() < 2 || samples_per_edge < 2) {
    throw Error(ErrorKind::kInvalidParameter,
                "path needs two vertices and two samples per edge");
  }
  // Heights along the path, split so that height is monotone between
  // consecutive entries.
  std::vector<double> hs;
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    const auto e = filling.find_edge(path[i], path[i + 1]);
    if (!e) {
      throw Error(ErrorKind::kInvalidParameter, "path vertices not adjacent");
    }
    const double h0 = filling.vertex(path[i]).level;
    const double h1 = filling.vertex(path[i + 1]).level;
    std::vector<double> part;
    if (h0 != h1) {
      for (int k = 0; k < samples_per_edge; ++k) {
        part.push_back(h0 + (h1 - h0) * k / samples_per_edge);
      }
      for (double f : u.features) {
        if (f > std::min(h0, h1) && f < std::max(h0, h1)) part.push_back(f);
      }
      std::sort(part.begin(), part.end());
      if (h1 < h0) std::reverse(part.begin(), part.end());
    } else {
      std::vector<double> up;
      for (int k = 0; k < samples_per_edge; ++k) {
        up.push_back(h0 + 0.5 * k / samples_per_edge);
      }
      for (double f : u.features) {
        if (f > h0 && f < h0 + 0.5) up.push_back(f);
      }
      std::sort(up.begin(), up.end());
      part = up;
      part.push_back(h0 + 0.5);
      for (auto it = up.rbegin(); it != up.rend(); ++it) {
        if (*it > h0) part.push_back(*it);
      }
    }
    hs.insert(hs.end(), part.begin(), part.end());
  }
  hs.push_back(filling.vertex(path.back()).level);

  const double eps = u.epsilon;
  const auto log_ds = [&](double t) {
    const double lq = u.log_density(t);
    return lq == -kInf ? -kInf : lq - eps * t;
  };
  double walked = 0.0;
  double min_minus = kInf;
  double max_plus = -kInf;
  double defect = -kInf;
  for (std::size_t i = 0; i < hs.size(); ++i) {
    if (i > 0 && hs[i] != hs[i - 1]) {
      const double lo = std::min(hs[i], hs[i - 1]);
      const double hi = std::max(hs[i], hs[i - 1]);
      const auto r = quad::IntegrateExp(log_ds, lo, hi, 1e-12);
      walked += r.value();
    }
    const double v = u.value(hs[i]);
    if (i > 0) {
      defect = std::max(defect, (v - walked) - min_minus);
      defect = std::max(defect, max_plus - (v + walked));
    }
    min_minus = std::min(min_minus, v - walked);
    max_plus = std::max(max_plus, v + walked);
  }
  return defect;
}

std::string TraceStatusName(TraceStatus s) {
  switch (s) {
    case TraceStatus::kConverged:
      return "converged";
    case TraceStatus::kOscillating:
      return "oscillating";
    case TraceStatus::kDiverged:
      return "diverged";
    case TraceStatus::kUndetermined:
      return "undetermined";
  }
  return "unknown";
}

LimitVerdict DetectLimit(const std::vector<double>& heights,
                         const std::vector<double>& values,
                         const TraceOptions& opt) {
  LimitVerdict v;
  if (heights.empty() || heights.size() != values.size()) return v;
  const double depth = heights.back();
  v.depth = depth;
  if (depth < opt.window) return v;

  double lo = kInf;
  double hi = -kInf;
  double tail_lo = kInf;
  double tail_hi = -kInf;
  bool up = true;
  bool down = true;
  double prev = 0.0;
  bool have_prev = false;
  for (std::size_t i = 0; i < heights.size(); ++i) {
    const double x = values[i];
    if (heights[i] >= depth - opt.window) {
      tail_lo = std::min(tail_lo, x);
      tail_hi = std::max(tail_hi, x);
    }
    if (heights[i] < depth / 2.0) continue;
    lo = std::min(lo, x);
    hi = std::max(hi, x);
    if (have_prev) {
      const double slack = 1e-12 * (1.0 + std::abs(x));
      if (x < prev - slack) up = false;
      if (x > prev + slack) down = false;
    }
    prev = x;
    have_prev = true;
  }
  v.liminf = lo;
  v.limsup = hi;
  if (!std::isfinite(tail_lo) || !std::isfinite(tail_hi)) {
    if (tail_hi == kInf) {
      v.status = TraceStatus::kDiverged;
      v.direction = 1;
    } else if (tail_lo == -kInf) {
      v.status = TraceStatus::kDiverged;
      v.direction = -1;
    }
    return v;
  }
  if (tail_hi - tail_lo < opt.tol) {
    v.status = TraceStatus::kConverged;
    v.value = values.back();
    return v;
  }
  const double band = 10.0 * opt.tol;
  if (up || down) {
    const double late = values.back() - ValueAt(heights, values, depth / 2.0);
    const double early = ValueAt(heights, values, depth / 2.0) -
                         ValueAt(heights, values, depth / 4.0);
    if (std::abs(late) > band && std::abs(late) >= 0.5 * std::abs(early)) {
      v.status = TraceStatus::kDiverged;
      v.direction = late > 0.0 ? 1 : -1;
    }
    return v;
  }
  if (hi - lo > band) v.status = TraceStatus::kOscillating;
  return v;
}

RaySamples SampleRay(const XFunction& u, const Filling& filling,
                     const GeodesicRay& ray, int samples_per_edge) {
  RaySamples out;
  const int depth = ray.depth();
  for (int n = 0; n < depth; ++n) {
    const VertexId lower = ray.vertices[n];
    const VertexId upper = ray.vertices[n + 1];
    for (double s : Fractions(samples_per_edge, u.Features(n))) {
      out.heights.push_back(n + s);
      out.values.push_back(u.OnVertical(filling, lower, upper, s));
    }
  }
  out.heights.push_back(depth);
  out.values.push_back(u.AtVertex(filling, ray.vertices.back()));
  return out;
}

RaySamples SampleRadial(const RadialFunction& u, int depth,
                        int samples_per_edge) {
  const RadialX x(u);
  RaySamples out;
  for (int n = 0; n < depth; ++n) {
    for (double s : Fractions(samples_per_edge, x.Features(n))) {
      out.heights.push_back(n + s);
      out.values.push_back(u.value(n + s));
    }
  }
  out.heights.push_back(depth);
  out.values.push_back(u.value(depth));
  return out;
}

LimitVerdict TraceAlongRay(const RadialFunction& u, const GeodesicRay& ray,
                           const TraceOptions& opt) {
  const RaySamples s = SampleRadial(u, ray.depth(), opt.samples_per_edge);
  return DetectLimit(s.heights, s.values, opt);
}

LimitVerdict TraceAlongRay(const XFunction& u, const Filling& filling,
                           const GeodesicRay& ray, const TraceOptions& opt) {
  const RaySamples s = SampleRay(u, filling, ray, opt.samples_per_edge);
  return DetectLimit(s.heights, s.values, opt);
}

TraceVerdict TraceT(const XFunction& u, const Filling& filling, PointIndex xi,
                    const TraceOptions& opt) {
  const int depth = opt.depth < 0 ? filling.levels()
                                  : std::min(opt.depth, filling.levels());
  const auto rays = EnumerateRays(filling, xi, opt.max_rays, depth);
  TraceVerdict out;
  out.depth = depth;
  out.rays = static_cast<int>(rays.size());

  const auto trace = [&](const GeodesicRay& r) {
    return TraceAlongRay(u, filling, r, opt);
  };
  std::optional<LimitVerdict> shared;
  if (u.radial()) shared = trace(rays.front());
  for (std::size_t i = 0; i < rays.size(); ++i) {
    out.per_ray.push_back({static_cast<int>(i), -1,
                           shared ? *shared : trace(rays[i])});
  }
  for (std::size_t i = 0; i < rays.size(); ++i) {
    for (std::size_t j = 0; j < rays.size(); ++j) {
      if (i == j) continue;
      out.per_ray.push_back(
          {static_cast<int>(i), static_cast<int>(j),
           shared ? *shared : trace(InterleaveRays(rays[i], rays[j]))});
    }
  }

  bool any_osc = false;
  bool any_div = false;
  bool any_undet = false;
  double lo = kInf;
  double hi = -kInf;
  double vlo = kInf;
  double vhi = -kInf;
  const TraceStatus first = out.per_ray.front().verdict.status;
  for (const RayTrace& r : out.per_ray) {
    const LimitVerdict& v = r.verdict;
    if (v.status != first) out.ray_independent = false;
    lo = std::min(lo, v.liminf);
    hi = std::max(hi, v.limsup);
    switch (v.status) {
      case TraceStatus::kOscillating:
        any_osc = true;
        break;
      case TraceStatus::kDiverged:
        any_div = true;
        break;
      case TraceStatus::kUndetermined:
        any_undet = true;
        break;
      case TraceStatus::kConverged:
        vlo = std::min(vlo, v.value);
        vhi = std::max(vhi, v.value);
        break;
    }
  }
  LimitVerdict& o = out.overall;
  o.depth = depth;
  o.liminf = lo;
  o.limsup = hi;
  if (any_osc) {
    o.status = TraceStatus::kOscillating;
  } else if (any_div) {
    o.status = TraceStatus::kDiverged;
    for (const RayTrace& r : out.per_ray) {
      if (r.verdict.status == TraceStatus::kDiverged) {
        o.direction = r.verdict.direction;
        break;
      }
    }
  } else if (any_undet) {
    o.status = TraceStatus::kUndetermined;
  } else if (vhi - vlo <= opt.tol) {
    o.status = TraceStatus::kConverged;
    o.value = out.per_ray.front().verdict.value;
  } else {
    o.status = TraceStatus::kOscillating;
    o.liminf = vlo;
    o.limsup = vhi;
    out.ray_independent = false;
  }
  if (vlo < kInf && vhi - vlo > opt.tol) out.ray_independent = false;
  return out;
}

TildeTrace TraceTilde(const XFunction& u, const Filling& filling, PointIndex xi,
                      int max_level, const TraceOptions& opt) {
  const int top = max_level < 0 ? filling.levels()
                                : std::min(max_level, filling.levels());
  TildeTrace out;
  std::vector<double> heights;
  for (int n = 0; n <= top; ++n) {
    const auto near = BoundaryNeighborhood(filling, xi, n);
    double s = 0.0;
    for (VertexId v : near) s += u.AtVertex(filling, v);
    out.sequence.push_back(near.empty() ? 0.0 : s / near.size());
    heights.push_back(n);
  }
  out.verdict = DetectLimit(heights, out.sequence, opt);
  return out;
}

std::vector<PointTraces> TraceAllPoints(const XFunction& u,
                                        const Filling& filling,
                                        const TraceOptions& opt) {
  const std::size_t n = filling.space().size();
  std::vector<PointTraces> out(n);
  const std::size_t workers =
      std::max<std::size_t>(1, std::min<std::size_t>(
                                   n, std::thread::hardware_concurrency()));
  std::vector<std::future<void>> jobs;
  for (std::size_t w = 0; w < workers; ++w) {
    jobs.push_back(std::async(std::launch::async, [&, w] {
      for (std::size_t xi = w; xi < n; xi += workers) {
        out[xi].xi = xi;
        out[xi].T = TraceT(u, filling, xi, opt);
        out[xi].tilde = TraceTilde(u, filling, xi, opt.depth, opt);
      }
    }));
  }
  for (auto& j : jobs) j.get();
  return out;
}

TraceNormBound CheckTraceNormBound(const Filling& filling, const RadialWeight& rho,
                                   const RadialFunction& u, double p,
                                   const TraceOptions& opt) {
  TraceNormBound out;
  const auto x = FromRadial(u);
  const MetricSpaceSample& z = filling.space();
  double sum = 0.0;
  for (PointIndex xi = 0; xi < z.size(); ++xi) {
    const TraceVerdict t = TraceT(*x, filling, xi, opt);
    if (t.overall.status != TraceStatus::kConverged) {
      ++out.unconverged;
      continue;
    }
    sum += z.weight(xi) * std::pow(std::abs(t.overall.value), p);
  }
  out.trace_norm = std::pow(sum, 1.0 / p);
  out.dotN_norm = ComputeSobolevNorms(filling, rho, u, p, opt.depth).dotN_norm;
  out.ratio = out.dotN_norm > 0.0 ? out.trace_norm / out.dotN_norm : 0.0;
  return out;
}

RadialFunction BuildDivergent(const RadialWeight& rho, double p,
                              const BuildOptions& opt) {
  const double eps = EpsilonOf(opt);
  if (!(p >= 1.0)) throw Error(ErrorKind::kInvalidParameter, "p must be >= 1");
  RequireRInfinite(rho, p, opt, "divergent construction");
  if (p == 1.0) {
    const auto spans = LevelSetIntervals(rho, eps, opt.horizon);
    RequireCells(spans.size(), opt, ErrorKind::kConstructionFailure,
                 "divergent construction");
    return FromCells("divergent", eps, spans,
                     [eps](double t) { return -eps * t; }, nullptr, true);
  }
  const double horizon = opt.horizon;
  auto prim = std::make_shared<LogPrimitive>(
      [rho, p, eps](double t) { return LogRpIntegrand(rho, p, eps, t); }, 0.0,
      horizon, rho.Breakpoints(0.0, horizon));
  // log(1 + I) from log I without overflow.
  const auto log1p_exp = [](double l) {
    return l > 30.0 ? l + std::log1p(std::exp(-l)) : std::log1p(std::exp(l));
  };
  RadialFunction u;
  u.tag = "divergent";
  u.epsilon = eps;
  // q drops to 0 past the horizon
  u.features = {horizon};
  u.profile = [prim, log1p_exp](double t) {
    return log1p_exp(prim->LogIntegral(t));
  };
  u.log_density = [prim, log1p_exp, eps, horizon](double t) {
    if (t < 0.0 || t > horizon) return -kInf;
    return prim->lw(t) + eps * t - log1p_exp(prim->LogIntegral(t));
  };
  return u;
}

RadialFunction BuildLevelSetOscillator(const RadialWeight& rho,
                                       const BuildOptions& opt) {
  const double eps = EpsilonOf(opt);
  RequireRInfinite(rho, 1.0, opt, "level-set oscillator");
  const auto spans = LevelSetIntervals(rho, eps, opt.horizon);
  RequireCells(spans.size(), opt, ErrorKind::kConstructionFailure,
               "level-set oscillator");
  return FromCells("level_set_oscillator", eps, spans,
                   [eps](double t) { return -eps * t; }, nullptr, false);
}

RadialFunction BuildPartitionOscillator(const RadialWeight& rho, double p,
                                        const BuildOptions& opt) {
  const double eps = EpsilonOf(opt);
  if (!(p > 1.0)) {
    throw Error(ErrorKind::kInvalidParameter, "partition oscillator needs p > 1");
  }
  RequireRInfinite(rho, p, opt, "partition oscillator");
  if (rho.tail() != TailFlag::kIntegrable) {
    throw Error(ErrorKind::kRegimeMismatch,
                "partition oscillator needs a finite measure");
  }
  const auto lw = [rho, p, eps](double t) {
    return LogRpIntegrand(rho, p, eps, t);
  };
  const LogPrimitive global(lw, 0.0, opt.horizon,
                            rho.Breakpoints(0.0, opt.horizon));
  std::vector<std::pair<double, double>> spans;
  double t = 0.0;
  for (int j = 1;; ++j) {
    const double target =
        quad::LogAddExp(global.LogIntegral(t), j * std::numbers::ln2);
    if (!(target <= global.log_total())) break;
    const double next = global.Solve(target);
    if (!(next > t)) break;
    spans.emplace_back(t, next);
    t = next;
  }
  RequireCells(spans.size(), opt, ErrorKind::kHorizonExhausted,
               "partition oscillator");
  return FromCells("partition_oscillator", eps, spans, lw, &rho, false);
}

RadialFunction BuildCellOscillator(const RadialWeight& rho, double p,
                                   const BuildOptions& opt) {
  const double eps = EpsilonOf(opt);
  if (!(p > 1.0)) {
    throw Error(ErrorKind::kInvalidParameter, "cell oscillator needs p > 1");
  }
  if (rho.tail() != TailFlag::kNonintegrable) {
    throw Error(ErrorKind::kRegimeMismatch,
                "cell oscillator needs an infinite measure");
  }
  ParamOptions po = ParamsFor(opt);
  po.t_max = opt.horizon;
  if (!ParamCalR(rho, p, po).value.infinite) {
    throw Error(ErrorKind::kRegimeMismatch,
                "cell oscillator: calR is finite for " + rho.Describe());
  }
  const UnitMassPartition part =
      PartitionUnitMass(rho, static_cast<int>(std::ceil(opt.horizon)) * 64,
                        opt.horizon);
  const auto log_norm = [&](double a, double b) {
    const LocalNorm n = LocalRpNorm(rho, p, eps, a, b);
    if (!n.finite) {
      throw Error(ErrorKind::kHypothesisViolation,
                  "local Rp integral diverges on a cell");
    }
    return n.log_value;
  };
  std::vector<std::pair<double, double>> spans;
  int k = 1;
  for (std::size_t i = 0; i < part.cells(); ++i) {
    double lo = part.breakpoints[i];
    double hi = part.breakpoints[i + 1];
    if (!(log_norm(lo, hi) > 2.0 * k * std::numbers::ln2)) continue;
    // k halvings by rho-mass, keeping the half with the larger integral.
    double mass = part.masses[i];
    for (int s = 0; s < k; ++s) {
      mass /= 2.0;
      const double base = lo;
      const double mid = quad::Bisect(
          [&](double x) { return rho.Integral(base, x) - mass; }, lo, hi);
      if (log_norm(lo, mid) >= log_norm(mid, hi)) {
        hi = mid;
      } else {
        lo = mid;
      }
    }
    if (!(log_norm(lo, hi) > k * std::numbers::ln2)) {
      throw Error(ErrorKind::kConstructionFailure,
                  "no sub-cell with a large enough integral");
    }
    spans.emplace_back(lo, hi);
    ++k;
  }
  RequireCells(spans.size(), opt, ErrorKind::kConstructionFailure,
               "cell oscillator");
  return FromCells("cell_oscillator", eps, spans,
                   [rho, p, eps](double t) {
                     return LogRpIntegrand(rho, p, eps, t);
                   },
                   &rho, false);
}

GaussianPair BuildGaussianPair(double p, const BuildOptions& opt) {
  const double eps = EpsilonOf(opt);
  if (!(p >= 1.0)) throw Error(ErrorKind::kInvalidParameter, "p must be >= 1");
  const double k = p > 1.0 ? 1.0 / (p - 1.0) : 1.0;
  std::vector<std::pair<double, double>> spans;
  for (int n = 0; n < static_cast<int>(opt.horizon); ++n) {
    spans.emplace_back(n, n + 1.0);
  }
  RadialFunction u = FromCells("gaussian_tents", eps, spans,
                               [k](double t) { return k * t * t; }, nullptr,
                               false);
  return {RadialWeight::Gaussian(p, opt.alpha), std::move(u)};
}

RadialFunction MakeSmooth(std::mt19937_64& rng, double epsilon, bool zero_limit) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> rate(0.5, 2.5);
  const double a = zero_limit ? 0.0 : unit(rng);
  const double b = unit(rng);
  const double c = epsilon + rate(rng);
  RadialFunction u;
  u.tag = "smooth";
  u.epsilon = epsilon;
  u.profile = [a, b, c](double t) { return a + b * std::exp(-c * t); };
  u.log_density = [b, c, epsilon](double t) {
    if (b == 0.0) return -kInf;
    return std::log(std::abs(b) * c) + (epsilon - c) * t;
  };
  return u;
}

}  // namespace hyperfill
