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


// Randomised checks over seeded spaces, parameters and functions. Each test
// draws its own inputs from a fixed seed so failures reproduce.

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <random>
#include <vector>

#include "hyperfill/filling.hpp"
#include "hyperfill/geometry.hpp"
#include "hyperfill/measure.hpp"
#include "hyperfill/modulus.hpp"
#include "hyperfill/trace_lab.hpp"
#include "hyperfill/trace_params.hpp"
#include "oracles.hpp"

namespace hyperfill {
namespace {

// n distinct points in [0, 0.6]^dim with random positive weights.
MetricSpaceSample RandomSpace(std::mt19937_64& rng, int n, int dim) {
  std::uniform_real_distribution<double> coord(0.0, 0.6);
  std::uniform_real_distribution<double> wt(0.1, 2.0);
  std::vector<std::vector<double>> pts;
  std::vector<double> w;
  while (static_cast<int>(pts.size()) < n) {
    std::vector<double> x(dim);
    for (double& c : x) c = coord(rng);
    bool fresh = true;
    for (const auto& y : pts) {
      double d = 0.0;
      for (int k = 0; k < dim; ++k) d += (x[k] - y[k]) * (x[k] - y[k]);
      fresh = fresh && d > 1e-12;
    }
    if (!fresh) continue;
    pts.push_back(std::move(x));
    w.push_back(wt(rng));
  }
  return MetricSpaceSample::Euclidean(std::move(pts), std::move(w));
}

std::shared_ptr<const MetricSpaceSample> Share(MetricSpaceSample z) {
  return std::make_shared<const MetricSpaceSample>(std::move(z));
}

TEST(RandomSpaces, NetsAreNestedSeparatedCovering) {
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> alpha_d(1.3, 4.0);
  for (int trial = 0; trial < 25; ++trial) {
    const auto z = RandomSpace(rng, 10 + trial, 1 + trial % 2);
    const double alpha = alpha_d(rng);
    const auto nets = BuildNets(z, alpha, 7);
    for (int n = 0; n < static_cast<int>(nets.levels.size()); ++n) {
      const double r = std::pow(alpha, -n);
      EXPECT_TRUE(oracle::Separated(z, nets.levels[n], r)) << trial << " " << n;
      EXPECT_TRUE(oracle::Covering(z, nets.levels[n], r)) << trial << " " << n;
      EXPECT_TRUE(std::is_sorted(nets.levels[n].begin(), nets.levels[n].end()));
      if (n > 0) {
        EXPECT_TRUE(std::includes(nets.levels[n].begin(), nets.levels[n].end(),
                                  nets.levels[n - 1].begin(), nets.levels[n - 1].end()));
      }
    }
  }
}

TEST(RandomSpaces, EdgesFollowTheRule) {
  std::mt19937_64 rng(202);
  std::uniform_real_distribution<double> alpha_d(1.5, 3.5);
  std::uniform_real_distribution<double> tau_d(1.05, 3.0);
  for (int trial = 0; trial < 20; ++trial) {
    auto z = Share(RandomSpace(rng, 12, 2));
    const double alpha = alpha_d(rng);
    const double tau = tau_d(rng);
    const auto nets = BuildNets(*z, alpha, 6);
    const Filling f = BuildFilling(z, nets, tau);
    EXPECT_EQ(oracle::FillingEdges(f), oracle::RuleEdges(*z, nets.levels, alpha, tau))
        << "alpha " << alpha << " tau " << tau;
    for (int d : oracle::BfsHeights(f)) EXPECT_GE(d, 0);
  }
}

TEST(RandomSpaces, DistancesAreAMetricMatchingDijkstra) {
  std::mt19937_64 rng(303);
  for (int trial = 0; trial < 8; ++trial) {
    const Filling f = BuildFilling(Share(RandomSpace(rng, 9, 1)), 2.0 + 0.25 * trial, 1.5, 6);
    const double eps = f.epsilon();
    const auto from_root = RootDistances(f);
    std::uniform_int_distribution<VertexId> pick(0, f.num_vertices() - 1);
    for (int k = 0; k < 6; ++k) {
      const VertexId a = pick(rng), b = pick(rng), c = pick(rng);
      const auto da = oracle::VertexDistances(f, a);
      EXPECT_NEAR(UniformizedDistance(f, a, b), da[b], 1e-12);
      EXPECT_NEAR(UniformizedDistance(f, b, a), da[b], 1e-12);
      EXPECT_LE(UniformizedDistance(f, a, c),
                UniformizedDistance(f, a, b) + UniformizedDistance(f, b, c) + 1e-12);
    }
    for (VertexId v = 0; v < f.num_vertices(); ++v) EXPECT_LT(from_root[v], 1.0 / eps);
  }
}

TEST(RandomSpaces, RaysAreValidWithClosedFormLength) {
  std::mt19937_64 rng(404);
  for (int trial = 0; trial < 10; ++trial) {
    const Filling f = BuildFilling(Share(RandomSpace(rng, 8, 2)), 2.0, 1.5, 8);
    std::uniform_int_distribution<PointIndex> pick(0, f.space().size() - 1);
    const PointIndex xi = pick(rng);
    const auto rays = EnumerateRays(f, xi, 16);
    ASSERT_FALSE(rays.empty());
    for (const auto& r : rays) {
      EXPECT_TRUE(IsValidRay(f, r));
      EXPECT_EQ(r.vertices.front(), f.root());
      EXPECT_NEAR(RayLength(f, r), ClosedFormRayLength(f.epsilon(), r.depth()), 1e-12);
    }
    if (rays.size() >= 2) EXPECT_TRUE(IsValidRay(f, InterleaveRays(rays[0], rays[1])));
  }
}

TEST(RandomSpaces, MeasureIsLinearAndMassScaleFree) {
  std::mt19937_64 rng(505);
  std::uniform_real_distribution<double> c_d(0.2, 5.0);
  for (int trial = 0; trial < 6; ++trial) {
    const auto base = RandomSpace(rng, 10, 1);
    const double c = c_d(rng);
    const Filling f = BuildFilling(Share(base), 3.0, 1.5, 6);
    const Filling g = BuildFilling(Share(base.WithScaledWeights(c)), 3.0, 1.5, 6);
    const auto rho = RadialWeight::Bbs(0.5, 2.0, 3.0);
    const auto one = [](const EdgePoint&) { return 1.0; };
    const auto h = [&](const EdgePoint& x) { return 1.0 + GraphHeight(f, x); };
    const double a = IntegrateOverFilling(f, rho, one, 5);
    const double b = IntegrateOverFilling(f, rho, h, 5);
    const auto sum = [&](const EdgePoint& x) { return 2.0 * one(x) + 3.0 * h(x); };
    EXPECT_NEAR(IntegrateOverFilling(f, rho, sum, 5), 2.0 * a + 3.0 * b, 1e-10 * (a + b));
    EXPECT_NEAR(IntegrateOverFilling(g, rho, one, 5), c * a, 1e-10 * c * a);
    EXPECT_NEAR(TotalMass(g, rho, 5).ratio, TotalMass(f, rho, 5).ratio, 1e-10);
  }
}

TEST(RandomWeights, UnitMassPartitions) {
  std::mt19937_64 rng(606);
  std::uniform_real_distribution<double> theta_d(0.1, 0.9);
  std::uniform_real_distribution<double> p_d(1.2, 3.0);
  std::uniform_real_distribution<double> lambda_d(0.05, 0.5);
  for (int trial = 0; trial < 15; ++trial) {
    double theta = theta_d(rng), p = p_d(rng);
    // bbs mass is 1 / (p (1 - theta) log 2); keep several full cells
    while (1.0 / (p * (1.0 - theta) * std::log(2.0)) < 2.0) {
      theta = theta_d(rng);
      p = p_d(rng);
    }
    const auto rho = trial % 3 == 0 ? RadialWeight::ExpRate(-lambda_d(rng))
                                    : RadialWeight::Bbs(theta, p, 2.0);
    const auto part = PartitionUnitMass(rho, 30, 200.0);
    ASSERT_FALSE(part.masses.empty()) << rho.Describe();
    ASSERT_EQ(part.breakpoints.size(), part.masses.size() + 1);
    for (std::size_t k = 0; k < part.masses.size(); ++k) {
      EXPECT_NEAR(part.masses[k], 1.0, 1e-10) << rho.Describe() << " cell " << k;
      EXPECT_LT(part.breakpoints[k], part.breakpoints[k + 1]);
      EXPECT_NEAR(rho.Integral(part.breakpoints[k], part.breakpoints[k + 1]), 1.0, 1e-9);
    }
  }
}

TEST(RandomFunctions, RadialTracesMatchTheProfileLimit) {
  const Filling f = BuildFilling(Share(GenCantor(3, 0.9)), 2.0, 1.5, 24);
  std::mt19937_64 rng(707);
  for (int trial = 0; trial < 10; ++trial) {
    const auto u = MakeSmooth(rng, f.epsilon(), trial % 2 == 1);
    const auto x = FromRadial(u);
    for (PointIndex xi = 0; xi < f.space().size(); xi += 3) {
      const auto t = TraceT(*x, f, xi);
      ASSERT_EQ(t.overall.status, TraceStatus::kConverged) << u.tag;
      EXPECT_TRUE(t.ray_independent);
      EXPECT_NEAR(t.overall.value, u.value(200.0), 1e-3) << u.tag;
    }
  }
}

TEST(RandomFunctions, UpperGradientOnRandomSpaces) {
  std::mt19937_64 rng(808);
  for (int trial = 0; trial < 5; ++trial) {
    const Filling f = BuildFilling(Share(RandomSpace(rng, 10, 2)), 2.5, 1.5, 8);
    const auto u = MakeSmooth(rng, f.epsilon(), false);
    for (int walk = 0; walk < 10; ++walk) {
      std::vector<VertexId> path{f.root()};
      for (int step = 0; step < 16; ++step) {
        const auto& nb = f.neighbors(path.back());
        std::uniform_int_distribution<std::size_t> pick(0, nb.size() - 1);
        path.push_back(nb[pick(rng)].first);
      }
      EXPECT_LE(UpperGradientDefect(f, u, path), 1e-8) << u.tag;
    }
  }
}

TEST(RandomCurves, HolderRatioAtMostOne) {
  std::mt19937_64 rng(909);
  std::uniform_real_distribution<double> coef(0.0, 3.0);
  const double ps[] = {1.5, 2.0, 3.0};
  for (int trial = 0; trial < 12; ++trial) {
    const Filling f = BuildFilling(Share(RandomSpace(rng, 10, 1)), 2.0, 1.5, 7);
    const double p = ps[trial % 3];
    const auto rho = RadialWeight::Bbs(0.5, p, 2.0);
    std::vector<EdgeId> curve;
    VertexId at = f.root();
    for (int step = 0; step < 6; ++step) {
      const auto& nb = f.neighbors(at);
      std::uniform_int_distribution<std::size_t> pick(0, nb.size() - 1);
      const auto [w, e] = nb[pick(rng)];
      curve.push_back(e);
      at = w;
    }
    const double c0 = coef(rng) + 0.01, c1 = coef(rng), c2 = coef(rng);
    const auto phi = [&](std::size_t i, double t) {
      return c0 + c1 * t + c2 * std::cos(t + static_cast<double>(i)) *
                               std::cos(t + static_cast<double>(i));
    };
    const auto h = HolderBoundCheck(f, rho, p, curve, phi);
    EXPECT_LE(h.ratio, 1.0 + 1e-9) << "p " << p;
    EXPECT_GT(h.ratio, 0.0);
    EXPECT_LE(h.empirical_constant, h.holder_constant * (1.0 + 1e-9));
  }
}

TEST(RandomSequences, DetectLimitIsShiftEquivariant) {
  std::mt19937_64 rng(1001);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  TraceOptions opt;
  for (int trial = 0; trial < 30; ++trial) {
    const double a = u(rng), b = u(rng), shift = 5.0 * u(rng);
    const double rate = 0.3 + 0.5 * (u(rng) + 1.0);
    std::vector<double> h, v, w;
    for (int k = 0; k <= 40; ++k) {
      h.push_back(k);
      v.push_back(a + b * std::exp(-rate * k));
      w.push_back(v.back() + shift);
    }
    const auto lv = DetectLimit(h, v, opt);
    const auto lw = DetectLimit(h, w, opt);
    ASSERT_EQ(lv.status, TraceStatus::kConverged);
    ASSERT_EQ(lw.status, TraceStatus::kConverged);
    EXPECT_NEAR(lv.value, a, 1e-4);
    EXPECT_NEAR(lw.value - lv.value, shift, 1e-12);
  }
}

}  // namespace
}  // namespace hyperfill
