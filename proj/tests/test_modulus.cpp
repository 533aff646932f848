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
#include <memory>
#include <random>

#include "hyperfill/error.hpp"
#include "hyperfill/filling.hpp"
#include "hyperfill/modulus.hpp"
#include "oracles.hpp"

namespace hyperfill {
namespace {

const double kEps2 = std::log(2.0);

ErrorKind KindOf(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::kParseError;
}

TEST(Condition1, Examples) {
  const auto bbs = RadialWeight::Bbs(0.5, 2.0, 2.0);
  for (auto [a, b] : {std::pair{0.0, 2.0}, {1.0, 5.0}, {0.0, 40.0}}) {
    const auto c = CheckCondition1(bbs, 2.0, 2.0, a, b);
    EXPECT_TRUE(c.holds);
    // w = e^{-eps t} for bbs(1/2, 2)
    EXPECT_NEAR(c.norm, (std::exp(-kEps2 * a) - std::exp(-kEps2 * b)) / kEps2, 1e-10);
  }
  const auto dip = CheckCondition1(MakeDip(2.0, 2.0), 2.0, 2.0, 0.0, 2.0);
  EXPECT_FALSE(dip.holds);
  ASSERT_TRUE(dip.singular_at.has_value());
  EXPECT_NEAR(*dip.singular_at, 1.0, 1e-3);
  // away from the dip the condition holds again
  EXPECT_TRUE(CheckCondition1(MakeDip(2.0, 2.0), 2.0, 2.0, 1.5, 3.0).holds);
  for (double a : {0.0, 0.5, 3.0}) {
    const auto one = CheckCondition1(RadialWeight::Constant(1.0), 1.0, 2.0, a, a + 1.0);
    EXPECT_TRUE(one.holds);
    EXPECT_NEAR(one.norm, std::exp(-kEps2 * a), 1e-12);
  }
  EXPECT_EQ(KindOf([] { CheckCondition1(RadialWeight::Constant(1.0), 2.0, 2.0, 2.0, 1.0); }),
            ErrorKind::kInvalidParameter);
}

TEST(WitnessZeroModulus, DipShells) {
  const auto w = WitnessZeroModulus(MakeDip(2.0, 2.0), 2.0, 2.0, 0.0, 2.0, 8);
  ASSERT_EQ(w.shells.size(), 8u);
  EXPECT_NEAR(w.singular_at, 1.0, 1e-3);
  double bound = 0.0;
  for (std::size_t k = 0; k < w.shells.size(); ++k) {
    const auto& s = w.shells[k];
    EXPECT_NEAR(s.line_integral, 1.0, 1e-9);
    EXPECT_GT(s.lambda, std::pow(2.0, s.level));
    // energy of a shell is lambda^{1-p}
    EXPECT_NEAR(s.energy, 1.0 / s.lambda, 1e-9 / s.lambda);
    EXPECT_LE(s.energy, std::pow(2.0, -s.level));
    EXPECT_NEAR(w.line_partial[k], k + 1.0, 1e-8);
    bound += std::pow(2.0, -s.level);
    EXPECT_LE(w.energy_partial[k], bound);
    if (k > 0) {
      EXPECT_GT(w.energy_partial[k], w.energy_partial[k - 1]);
      EXPECT_GT(s.level, w.shells[k - 1].level);
    }
    for (const auto& [lo, hi] : s.pieces) {
      EXPECT_GE(lo, 0.0);
      EXPECT_LE(hi, 2.0);
      EXPECT_LT(lo, hi);
    }
  }
  EXPECT_GE(w.line_partial.back(), 8.0 - 1e-8);
  EXPECT_LT(w.energy_partial.back(), 1.0);
  // the density integrates to the line partial sum along [a, b]
  ASSERT_TRUE(static_cast<bool>(w.phi));
  const double li = oracle::Trapezoid(
      [&](double t) { return w.phi(t) * std::exp(-kEps2 * t); }, 0.0, 0.999, 400000);
  EXPECT_GT(li, 1.0);
}

TEST(WitnessZeroModulus, PEqualsOneLevelSets) {
  const auto w = WitnessZeroModulus(MakeDip(2.0, 1.0), 1.0, 2.0, 0.0, 2.0, 6);
  ASSERT_EQ(w.shells.size(), 6u);
  for (std::size_t k = 0; k < w.shells.size(); ++k) {
    EXPECT_NEAR(w.shells[k].line_integral, 1.0, 1e-9);
    EXPECT_LE(w.shells[k].energy, std::pow(2.0, -w.shells[k].level) * (1 + 1e-9));
  }
  EXPECT_GE(w.line_partial.back(), 6.0 - 1e-8);
  EXPECT_LT(w.energy_partial.back(), 1.0);
}

TEST(WitnessZeroModulus, DepthOneAndPrecondition) {
  EXPECT_EQ(WitnessZeroModulus(MakeDip(2.0, 2.0), 2.0, 2.0, 0.0, 2.0, 1).shells.size(), 1u);
  EXPECT_EQ(KindOf([] {
              WitnessZeroModulus(RadialWeight::Bbs(0.5, 2.0, 2.0), 2.0, 2.0, 0.0, 2.0);
            }),
            ErrorKind::kPreconditionFailure);
  EXPECT_EQ(KindOf([] { WitnessZeroModulus(MakeDip(2.0, 2.0), 2.0, 2.0, 0.0, 2.0, 0); }),
            ErrorKind::kInvalidParameter);
}

TEST(ProbeModulus, Dichotomy) {
  struct Case {
    RadialWeight rho;
    double p;
    double a;
    double b;
  };
  std::vector<Case> cases{{RadialWeight::Bbs(0.5, 2.0, 2.0), 2.0, 0.0, 2.0},
                          {RadialWeight::Constant(1.0), 1.0, 0.0, 3.0},
                          {RadialWeight::Gaussian(2.0, 2.0), 2.0, 0.0, 4.0},
                          {MakeDip(2.0, 2.0), 2.0, 0.0, 2.0},
                          {MakeDip(2.0, 2.0), 2.0, 1.5, 3.0},
                          {MakeDip(2.0, 1.0), 1.0, 0.0, 2.0}};
  for (const auto& c : cases) {
    const auto m = ProbeModulus(c.rho, c.p, 2.0, c.a, c.b, 8);
    EXPECT_EQ(m.positive, m.condition.holds) << c.rho.Describe();
    EXPECT_EQ(m.witness.has_value(), !m.positive);
    if (m.positive) {
      EXPECT_GT(m.lower_bound, 0.0);
      EXPECT_TRUE(std::isfinite(m.lower_bound));
    }
  }
  // bbs(1/2, 2) on [0, 2]: int w = (1 - 1/4)/log 2, bound = 1 / that
  const auto bbs = ProbeModulus(RadialWeight::Bbs(0.5, 2.0, 2.0), 2.0, 2.0, 0.0, 2.0);
  EXPECT_NEAR(bbs.lower_bound, kEps2 / 0.75, 1e-10);
}

TEST(HolderBoundCheck, SingleVerticalEdge) {
  auto z = std::make_shared<const MetricSpaceSample>(GenCantor(4, 0.9));
  const Filling f = BuildFilling(z, 2.0, 1.5, 5);
  const auto rho = RadialWeight::Bbs(0.5, 2.0, 2.0);
  for (int n = 0; n < 4; ++n) {
    const auto lower = *f.find_vertex(0, n);
    const auto upper = *f.find_vertex(0, n + 1);
    const EdgeId e = *f.find_edge(lower, upper);
    const double m = f.vertex(lower).mass + f.vertex(upper).mass;
    const auto h = HolderBoundCheck(f, rho, 2.0, {e}, [](std::size_t, double) { return 1.0; });
    EXPECT_NEAR(h.lhs, (std::exp(-kEps2 * n) - std::exp(-kEps2 * (n + 1))) / kEps2, 1e-12);
    EXPECT_NEAR(h.rhs, std::sqrt(m * rho.Integral(n, n + 1.0)), 1e-12);
    EXPECT_LE(h.ratio, 1.0 + 1e-12);
    EXPECT_GT(h.mass_lower_bound, 0.0);
  }
}

TEST(HolderBoundCheck, RandomDensities) {
  auto z = std::make_shared<const MetricSpaceSample>(GenCantor(5, 0.9));
  const Filling f = BuildFilling(z, 2.0, 1.5, 6);
  const auto rho = RadialWeight::Bbs(0.5, 2.0, 2.0);
  // a three-edge curve: up, across, up
  std::vector<EdgeId> curve;
  std::vector<VertexId> path{f.root()};
  std::mt19937_64 rng(2026);
  for (int step = 0; step < 3; ++step) {
    for (const auto& [w, e] : f.neighbors(path.back())) {
      const int dl = f.vertex(w).level - f.vertex(path.back()).level;
      if ((step == 1 && dl == 0) || (step != 1 && dl == 1)) {
        curve.push_back(e);
        path.push_back(w);
        break;
      }
    }
  }
  ASSERT_EQ(curve.size(), 3u);
  std::uniform_real_distribution<double> coef(0.0, 2.0);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const double c0 = coef(rng), c1 = coef(rng), c2 = coef(rng);
    const auto phi = [&](std::size_t i, double t) {
      return c0 + c1 * std::sin(3.0 * t + i) * std::sin(3.0 * t + i) + c2 * t * (1 - t);
    };
    const auto h = HolderBoundCheck(f, rho, 2.0, curve, phi);
    EXPECT_LE(h.ratio, 1.0 + 1e-9);
    EXPECT_TRUE(std::isfinite(h.empirical_constant));
    worst = std::max(worst, h.ratio);
    // homogeneity
    const auto h3 = HolderBoundCheck(f, rho, 2.0, curve,
                                     [&](std::size_t i, double t) { return 3.0 * phi(i, t); });
    EXPECT_NEAR(h3.ratio, h.ratio, 1e-9);
  }
  EXPECT_GT(worst, 0.0);
}

TEST(HolderBoundCheck, InvariantUnderMassScaling) {
  const auto base = GenCantor(4, 0.9);
  const Filling f = BuildFilling(std::make_shared<const MetricSpaceSample>(base), 2.0, 1.5, 5);
  const Filling g = BuildFilling(
      std::make_shared<const MetricSpaceSample>(base.WithScaledWeights(9.0)), 2.0, 1.5, 5);
  const auto rho = RadialWeight::Bbs(0.25, 3.0, 2.0);
  const auto phi = [](std::size_t, double t) { return 1.0 + t; };
  const EdgeId e = *f.find_edge(f.root(), *f.find_vertex(0, 1));
  const auto a = HolderBoundCheck(f, rho, 3.0, {e}, phi);
  const auto b = HolderBoundCheck(g, rho, 3.0, {e}, phi);
  EXPECT_NEAR(a.ratio, b.ratio, 1e-10);
  EXPECT_NEAR(a.mass_lower_bound, b.mass_lower_bound, 1e-14);
  EXPECT_THROW(HolderBoundCheck(f, rho, 3.0, {}, phi), Error);
}

}  // namespace
}  // namespace hyperfill
