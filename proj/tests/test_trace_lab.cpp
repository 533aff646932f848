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


#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <random>

#include "hyperfill/error.hpp"
#include "hyperfill/filling.hpp"
#include "hyperfill/measure.hpp"
#include "hyperfill/quadrature.hpp"
#include "hyperfill/trace_lab.hpp"
#include "hyperfill/trace_params.hpp"
#include "oracles.hpp"

namespace hyperfill {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

std::shared_ptr<const MetricSpaceSample> OnePoint() {
  return std::make_shared<const MetricSpaceSample>(
      MetricSpaceSample::Euclidean({{0.5}}, {1.0}));
}

std::shared_ptr<const MetricSpaceSample> ThreePoints() {
  return std::make_shared<const MetricSpaceSample>(MetricSpaceSample::Euclidean(
      {{0.0}, {0.3}, {0.6}}, {1.0 / 3, 1.0 / 3, 1.0 / 3}));
}

std::shared_ptr<const MetricSpaceSample> Cantor(int depth) {
  return std::make_shared<const MetricSpaceSample>(GenCantor(depth, 0.9));
}

RadialFunction Constant(double c, double eps) {
  RadialFunction u;
  u.tag = "constant";
  u.epsilon = eps;
  u.profile = [c](double) { return c; };
  u.log_density = [](double) { return kNegInf; };
  return u;
}

// U = 1 - e^{-t}; |U'| = e^{-t} = q e^{-eps t}.
RadialFunction OneMinusExp(double eps) {
  RadialFunction u;
  u.tag = "one_minus_exp";
  u.epsilon = eps;
  u.profile = [](double t) { return -std::expm1(-t); };
  u.log_density = [eps](double t) { return (eps - 1.0) * t; };
  return u;
}

// int_a^b q e^{-eps t} dt
double DsMass(const RadialFunction& u, double a, double b) {
  const auto r = quad::IntegrateExp(
      [&](double t) {
        const double l = u.log_density(t);
        return l == kNegInf ? l : l - u.epsilon * t;
      },
      a, b, 1e-13);
  return r.value();
}

// Non-radial fixture: vertex values plus one constant per vertical edge
// interior.
class TableX : public XFunction {
 public:
  TableX(std::map<VertexId, double> vertices,
         std::map<std::pair<VertexId, VertexId>, double> edges)
      : v_(std::move(vertices)), e_(std::move(edges)) {}
  double OnVertical(const Filling&, VertexId lower, VertexId upper,
                    double s) const override {
    return s == 0.0 ? v_.at(lower) : e_.at({lower, upper});
  }
  double AtVertex(const Filling&, VertexId v) const override { return v_.at(v); }

 private:
  std::map<VertexId, double> v_;
  std::map<std::pair<VertexId, VertexId>, double> e_;
};

TEST(SobolevNorms, ConstantFunction) {
  const Filling f = BuildFilling(Cantor(5), 2.0, 1.5, 6);
  for (const auto& rho : {RadialWeight::Bbs(0.5, 2.0, 2.0), RadialWeight::Constant(1.0)}) {
    for (double p : {1.0, 2.0, 3.0}) {
      const auto n = ComputeSobolevNorms(f, rho, Constant(1.7, f.epsilon()), p);
      const double mu = TotalMass(f, rho, 6).mu_XN;
      EXPECT_NEAR(n.N_norm, 1.7 * std::pow(mu, 1.0 / p), 1e-9);
      EXPECT_EQ(n.Lp_g, 0.0);
      EXPECT_NEAR(n.dotN_norm, 1.7, 1e-15);
    }
  }
}

TEST(SobolevNorms, MatchGenericIntegrator) {
  const Filling f = BuildFilling(Cantor(8), 2.0, 1.5, 8);
  const auto rho = RadialWeight::Bbs(0.5, 2.0, 2.0);
  const auto u = OneMinusExp(f.epsilon());
  const auto n = ComputeSobolevNorms(f, rho, u, 2.0);
  const double gu = IntegrateOverFilling(f, rho, [&](const EdgePoint& x) {
    return std::pow(u.value(GraphHeight(f, x)), 2);
  });
  const double gg = IntegrateOverFilling(f, rho, [&](const EdgePoint& x) {
    return std::pow(u.density(GraphHeight(f, x)), 2);
  });
  EXPECT_NEAR(n.Lp_u * n.Lp_u, gu, 1e-8 * gu);
  EXPECT_NEAR(n.Lp_g * n.Lp_g, gg, 1e-8 * gg);
  EXPECT_TRUE(std::isfinite(n.N_norm));
  EXPECT_NEAR(n.dotN_norm, n.Lp_g, 1e-15);
  // against the 1-D reference nu(Z) int q^2 rho: vertical edges alone carry
  // at least nu(Z) per level
  const double ref = oracle::Trapezoid(
      [&](double t) { return std::pow(u.density(t), 2) * rho.value(t); }, 0.0, 8.0, 80000);
  EXPECT_GE(gg / ref, 1.0);
  EXPECT_LE(gg / ref, 20.0);
}

TEST(SobolevNorms, PartialSumsMonotone) {
  const Filling f = BuildFilling(Cantor(6), 3.0, 1.5, 8);
  const auto rho = RadialWeight::Bbs(0.5, 2.0, 3.0);
  const auto u = OneMinusExp(f.epsilon());
  double prev = 0.0;
  for (int n = 1; n <= 8; ++n) {
    const double v = ComputeSobolevNorms(f, rho, u, 2.0, n).N_norm;
    EXPECT_GT(v, prev);
    prev = v;
  }
}

TEST(DetectLimit, Cases) {
  TraceOptions opt;
  std::vector<double> h;
  for (int i = 0; i <= 160; ++i) h.push_back(i / 8.0);
  auto run = [&](const std::function<double(double)>& g) {
    std::vector<double> v;
    for (double t : h) v.push_back(g(t));
    return DetectLimit(h, v, opt);
  };
  const auto c = run([](double) { return 0.25; });
  EXPECT_EQ(c.status, TraceStatus::kConverged);
  EXPECT_EQ(c.value, 0.25);
  EXPECT_EQ(run([](double t) { return 1.0 - std::exp(-t); }).status, TraceStatus::kConverged);
  const auto o = run([](double t) { return std::sin(t); });
  EXPECT_EQ(o.status, TraceStatus::kOscillating);
  EXPECT_GT(o.limsup - o.liminf, 1.9);
  const auto d = run([](double t) { return t; });
  EXPECT_EQ(d.status, TraceStatus::kDiverged);
  EXPECT_EQ(d.direction, 1);
  EXPECT_EQ(run([](double t) { return -std::log1p(t); }).direction, -1);
  // drift above tol but below the oscillation band
  EXPECT_EQ(run([](double t) { return 3e-5 * t; }).status, TraceStatus::kUndetermined);
  // below tol over the window counts as settled
  EXPECT_EQ(run([](double t) { return 1e-6 * t; }).status, TraceStatus::kConverged);
  // too short
  EXPECT_EQ(DetectLimit({0.0, 1.0}, {0.0, 0.0}, opt).status, TraceStatus::kUndetermined);
}

TEST(TraceAlongRay, OneMinusExpConverges) {
  const Filling f = BuildFilling(OnePoint(), 2.0, 1.5, 40);
  const auto u = OneMinusExp(f.epsilon());
  const auto ray = EnumerateRays(f, 0).front();
  const auto v = TraceAlongRay(u, ray);
  EXPECT_EQ(v.status, TraceStatus::kConverged);
  EXPECT_NEAR(v.value, 1.0, 1e-4);
  // the generic sampler gives the same verdict
  const auto w = TraceAlongRay(*FromRadial(u), f, ray);
  EXPECT_EQ(w.status, TraceStatus::kConverged);
  EXPECT_EQ(w.value, v.value);
}

TEST(TraceT, ConstantAndTilde) {
  const Filling f = BuildFilling(Cantor(4), 2.0, 1.5, 10);
  const auto x = FromRadial(Constant(-0.4, f.epsilon()));
  for (PointIndex xi = 0; xi < f.space().size(); ++xi) {
    const auto t = TraceT(*x, f, xi);
    EXPECT_EQ(t.overall.status, TraceStatus::kConverged);
    EXPECT_EQ(t.overall.value, -0.4);
    EXPECT_TRUE(t.ray_independent);
    const auto tt = TraceTilde(*x, f, xi);
    for (double s : tt.sequence) EXPECT_EQ(s, -0.4);
    EXPECT_EQ(tt.verdict.status, TraceStatus::kConverged);
  }
}

TEST(TraceT, RadialAgreesWithTilde) {
  const Filling f = BuildFilling(Cantor(4), 2.0, 1.5, 20);
  const auto x = FromRadial(OneMinusExp(f.epsilon()));
  for (const auto& pt : TraceAllPoints(*x, f)) {
    ASSERT_EQ(pt.T.overall.status, TraceStatus::kConverged);
    ASSERT_EQ(pt.tilde.verdict.status, TraceStatus::kConverged);
    EXPECT_NEAR(pt.T.overall.value, pt.tilde.verdict.value, 1e-4);
    EXPECT_NEAR(pt.T.overall.value, 1.0, 1e-4);
    // radial: every ray and interleaving gives the same verdict
    EXPECT_TRUE(pt.T.ray_independent);
    for (const auto& r : pt.T.per_ray) EXPECT_EQ(r.verdict.value, pt.T.overall.value);
  }
}

TEST(TraceT, RayDependentFixture) {
  const Filling f = BuildFilling(ThreePoints(), 2.0, 1.5, 2);
  const VertexId root = f.root();
  const VertexId left = *f.find_vertex(0, 1);
  const VertexId right = *f.find_vertex(2, 1);
  const VertexId mid = *f.find_vertex(1, 2);
  // one family through (0, 1) sits at 1, the other through (0.6, 1) at 0
  const TableX u({{root, 0.0}, {left, 1.0}, {right, 0.0}, {mid, 0.5}},
                 {{{root, left}, 1.0}, {{root, right}, 0.0}, {{left, mid}, 1.0},
                  {{right, mid}, 0.0}});
  // The two rays meet at (0.3, 2), so they can only be told apart when the
  // trace stops at level 1.
  TraceOptions opt;
  opt.window = 0;
  opt.depth = 1;
  const auto t = TraceT(u, f, 1, opt);
  ASSERT_EQ(t.rays, 2);
  ASSERT_EQ(t.per_ray.size(), 4u);
  EXPECT_EQ(t.per_ray[0].verdict.status, TraceStatus::kConverged);
  EXPECT_EQ(t.per_ray[1].verdict.status, TraceStatus::kConverged);
  EXPECT_EQ(t.per_ray[0].verdict.value, 1.0);
  EXPECT_EQ(t.per_ray[1].verdict.value, 0.0);
  EXPECT_FALSE(t.ray_independent);
  EXPECT_EQ(t.overall.status, TraceStatus::kOscillating);
  EXPECT_EQ(t.overall.liminf, 0.0);
  EXPECT_EQ(t.overall.limsup, 1.0);
  // level averages at xi: n = 1 averages both level-1 vertices
  const auto tt = TraceTilde(u, f, 1, -1, opt);
  EXPECT_EQ(tt.sequence, (std::vector<double>{0.0, 0.5, 0.5}));
  // Through level 2 both rays end on the shared vertex and agree.
  opt.depth = 2;
  opt.window = 0;
  const auto full = TraceT(u, f, 1, opt);
  EXPECT_TRUE(full.ray_independent);
  EXPECT_EQ(full.overall.value, 0.5);
}

TEST(GaussianPair, TentsAndTraces) {
  for (double p : {1.0, 2.0}) {
    BuildOptions bo;
    bo.horizon = 14;
    const auto [rho, u] = BuildGaussianPair(p, bo);
    EXPECT_EQ(rho.family(), RhoFamily::kGaussian);
    ASSERT_EQ(u.cells.size(), 14u);
    for (const TentCell& c : u.cells) {
      EXPECT_EQ(u.value(c.a), 0.0);
      EXPECT_EQ(u.value(c.b), 0.0);
      EXPECT_NEAR(u.value(c.c), 1.0, 1e-12);
      EXPECT_NEAR(DsMass(u, c.a, c.b), 2.0, 1e-8);
      EXPECT_NEAR(DsMass(u, c.a, c.c), 1.0, 1e-8);
    }
    const Filling f = BuildFilling(Cantor(4), 2.0, 1.5, 13);
    const auto x = FromRadial(u);
    for (const auto& pt : TraceAllPoints(*x, f)) {
      for (double s : pt.tilde.sequence) EXPECT_EQ(s, 0.0);
      EXPECT_EQ(pt.tilde.verdict.status, TraceStatus::kConverged);
      EXPECT_EQ(pt.T.overall.status, TraceStatus::kOscillating);
      EXPECT_GE(pt.T.overall.limsup - pt.T.overall.liminf, 0.9);
    }
    // level increments of the gradient energy sit under 2^p e^{-n^2}
    const auto n = ComputeSobolevNorms(f, rho, u, p);
    for (std::size_t k = 0; k < n.level_g.size(); ++k) {
      const double bound = n.level_weight[k] * std::pow(2.0, p) * std::exp(-double(k * k));
      EXPECT_LE(n.level_g[k], bound * (1 + 1e-9)) << p << " " << k;
    }
    EXPECT_TRUE(std::isfinite(n.N_norm));
  }
}

TEST(BuildDivergent, ClosedFormForCriticalWeight) {
  const double eps = std::log(2.0);
  const auto rho = RadialWeight::ExpRate(2.0 * eps);
  const auto u = BuildDivergent(rho, 2.0);
  for (double t : {0.0, 1.0, 10.0, 20.0, 40.0}) {
    EXPECT_NEAR(u.value(t), std::log1p(t), 1e-9);
    EXPECT_NEAR(u.density(t), std::exp(eps * t) / (1.0 + t), 1e-9 * u.density(t));
  }
  EXPECT_LT(u.value(10), u.value(20));
  EXPECT_LT(u.value(20), u.value(40));
  EXPECT_NEAR(RadialEnergy(rho, u, 2.0, 0.0, 40.0), 1.0 - 1.0 / 41.0, 1e-9);
  // nothing past the horizon
  EXPECT_NEAR(RadialEnergy(rho, u, 2.0, 0.0, 80.0), 1.0 - 1.0 / 41.0, 1e-9);
  BuildOptions far;
  far.horizon = 80.0;
  const auto w = BuildDivergent(rho, 2.0, far);
  EXPECT_NEAR(RadialEnergy(rho, w, 2.0, 0.0, 80.0), 1.0 - 1.0 / 81.0, 1e-9);
  EXPECT_NEAR(w.value(80.0), std::log1p(80.0), 1e-9);
  const Filling f = BuildFilling(OnePoint(), 2.0, 1.5, 40);
  const auto v = TraceAlongRay(u, EnumerateRays(f, 0).front());
  EXPECT_EQ(v.status, TraceStatus::kDiverged);
  EXPECT_EQ(v.direction, 1);
  EXPECT_TRUE(std::isfinite(ComputeSobolevNorms(f, rho, u, 2.0).dotN_norm));
}

TEST(BuildDivergent, PEqualsOneStaircase) {
  const auto rho = RadialWeight::ExpRate(2.0 * std::log(2.0));
  const auto u = BuildDivergent(rho, 1.0);
  EXPECT_LT(u.value(5.0), u.value(20.0));
  EXPECT_GE(u.value(39.0), 3.0);
}

TEST(BuildDivergent, RejectsFiniteR) {
  try {
    BuildDivergent(RadialWeight::Bbs(0.5, 2.0, 2.0), 2.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kRegimeMismatch);
  }
}

TEST(Oscillators, LevelSetCells) {
  // rho = e^{-2 eps t}: e^{-eps t}/rho = e^{eps t} >= 2^k from t = k
  const auto u = BuildLevelSetOscillator(RadialWeight::ExpRate(2.0 * std::log(2.0)));
  ASSERT_GE(u.cells.size(), 3u);
  for (std::size_t k = 0; k < u.cells.size(); ++k) {
    const TentCell& c = u.cells[k];
    EXPECT_NEAR(c.a, k + 1.0, 1.0 / 4096 + 1e-12);
    EXPECT_LE(c.b - c.a, 1.0 + 1e-12);
    EXPECT_EQ(u.value(c.a), 0.0);
    EXPECT_NEAR(u.value(c.c), 1.0, 1e-12);
    EXPECT_NEAR(DsMass(u, c.a, c.b), 2.0, 1e-8);
  }
  EXPECT_THROW(BuildLevelSetOscillator(RadialWeight::Constant(1.0)), Error);
}

TEST(Oscillators, PartitionCells) {
  const auto rho = RadialWeight::Gaussian(2.0, 2.0);
  BuildOptions bo;
  bo.horizon = 12;
  const auto u = BuildPartitionOscillator(rho, 2.0, bo);
  ASSERT_GE(u.cells.size(), 3u);
  const double eps = std::log(2.0);
  for (std::size_t j = 0; j < u.cells.size(); ++j) {
    const TentCell& c = u.cells[j];
    EXPECT_NEAR(DsMass(u, c.a, c.b), 2.0, 1e-8);
    EXPECT_NEAR(u.value(c.c), 1.0, 1e-12);
    // each cell carries 2^{j+1} of the Rp integral
    const double w = LocalRpNorm(rho, 2.0, eps, c.a, c.b).value();
    EXPECT_NEAR(w, std::pow(2.0, j + 1), 1e-8 * w);
    // energy per cell is 2^p 2^{(j+1)(1-p)}
    EXPECT_NEAR(RadialEnergy(rho, u, 2.0, c.a, c.b), 4.0 / w, 1e-8);
  }
  EXPECT_THROW(BuildPartitionOscillator(rho, 1.0, bo), Error);
  try {
    BuildPartitionOscillator(RadialWeight::Constant(1.0), 2.0, bo);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kRegimeMismatch);
  }
}

TEST(Oscillators, CellOscillatorOnValley) {
  const auto rho = MakeValley(2.0, 2.0, 30);
  BuildOptions bo;
  bo.horizon = 30;
  const auto u = BuildCellOscillator(rho, 2.0, bo);
  ASSERT_GE(u.cells.size(), 3u);
  const double eps = std::log(2.0);
  double energy = 0.0;
  double shape = 0.0;
  for (std::size_t k = 0; k < u.cells.size(); ++k) {
    const TentCell& c = u.cells[k];
    EXPECT_EQ(u.value(c.a), 0.0);
    EXPECT_EQ(u.value(c.b), 0.0);
    EXPECT_NEAR(u.value(c.c), 1.0, 1e-12);
    EXPECT_NEAR(DsMass(u, c.a, c.b), 2.0, 1e-8);
    EXPECT_GT(LocalRpNorm(rho, 2.0, eps, c.a, c.b).value(), std::pow(2.0, k + 1));
    energy += RadialEnergy(rho, u, 2.0, c.a, c.b);
    shape += 4.0 * std::pow(2.0, -(k + 1.0));
    EXPECT_LT(energy, shape);
  }
  try {
    BuildCellOscillator(RadialWeight::Bbs(0.5, 2.0, 2.0), 2.0, bo);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kRegimeMismatch);
  }
}

TEST(UpperGradient, RandomPaths) {
  const Filling f = BuildFilling(Cantor(5), 2.0, 1.5, 12);
  BuildOptions bo;
  bo.horizon = 12;
  std::vector<RadialFunction> fns{OneMinusExp(f.epsilon()),
                                  BuildGaussianPair(2.0, bo).u,
                                  BuildDivergent(RadialWeight::ExpRate(2 * f.epsilon()), 2.0),
                                  BuildLevelSetOscillator(RadialWeight::ExpRate(2 * f.epsilon()))};
  std::mt19937_64 rng(11);
  for (int i = 0; i < 4; ++i) fns.push_back(MakeSmooth(rng, f.epsilon(), i % 2 == 0));
  for (const auto& u : fns) {
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<VertexId> path{f.root()};
      for (int step = 0; step < 24; ++step) {
        const auto& nb = f.neighbors(path.back());
        std::uniform_int_distribution<std::size_t> pick(0, nb.size() - 1);
        path.push_back(nb[pick(rng)].first);
      }
      EXPECT_LE(UpperGradientDefect(f, u, path), 1e-8) << u.tag;
    }
  }
}

TEST(UpperGradient, DetectsAWrongDensity) {
  const Filling f = BuildFilling(OnePoint(), 2.0, 1.5, 6);
  RadialFunction u = OneMinusExp(f.epsilon());
  u.log_density = [](double t) { return -2.0 - t; };
  std::vector<VertexId> path;
  for (int n = 0; n <= 6; ++n) path.push_back(*f.find_vertex(0, n));
  EXPECT_GT(UpperGradientDefect(f, u, path), 0.1);
}

TEST(MakeSmooth, SeededAndDecaying) {
  std::mt19937_64 a(5), b(5);
  const auto u = MakeSmooth(a, std::log(2.0), false);
  const auto v = MakeSmooth(b, std::log(2.0), false);
  for (double t : {0.0, 1.0, 3.0}) EXPECT_EQ(u.value(t), v.value(t));
  const auto z = MakeSmooth(a, std::log(2.0), true);
  EXPECT_LT(std::abs(z.value(40.0)), 1e-8);
  EXPECT_LT(u.density(30.0), u.density(0.0));
}

TEST(TraceNormBound, StableRatio) {
  const Filling f = BuildFilling(Cantor(4), 2.0, 1.5, 20);
  const auto rho = RadialWeight::Bbs(0.5, 2.0, 2.0);
  std::mt19937_64 rng(3);
  double lo = 1e300, hi = 0.0;
  for (int i = 0; i < 6; ++i) {
    const auto b = CheckTraceNormBound(f, rho, MakeSmooth(rng, f.epsilon(), false), 2.0);
    EXPECT_EQ(b.unconverged, 0);
    lo = std::min(lo, b.ratio);
    hi = std::max(hi, b.ratio);
  }
  EXPECT_GT(lo, 0.0);
  EXPECT_TRUE(std::isfinite(hi));
}

}  // namespace
}  // namespace hyperfill
