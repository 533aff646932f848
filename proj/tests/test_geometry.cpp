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

#include <algorithm>
#include <cmath>
#include <memory>

#include "hyperfill/error.hpp"
#include "hyperfill/filling.hpp"
#include "hyperfill/geometry.hpp"
#include "oracles.hpp"

namespace hyperfill {
namespace {

std::shared_ptr<const MetricSpaceSample> ThreePoints() {
  return std::make_shared<const MetricSpaceSample>(MetricSpaceSample::Euclidean(
      {{0.0}, {0.3}, {0.6}}, {1.0 / 3, 1.0 / 3, 1.0 / 3}));
}

std::shared_ptr<const MetricSpaceSample> OnePoint() {
  return std::make_shared<const MetricSpaceSample>(
      MetricSpaceSample::Euclidean({{0.5}}, {1.0}));
}

std::shared_ptr<const MetricSpaceSample> Cantor(int depth) {
  return std::make_shared<const MetricSpaceSample>(GenCantor(depth, 0.9));
}

EdgeId EdgeBetween(const Filling& f, PointIndex c1, int n1, PointIndex c2, int n2) {
  const auto e = f.find_edge(*f.find_vertex(c1, n1), *f.find_vertex(c2, n2));
  EXPECT_TRUE(e.has_value());
  return *e;
}

TEST(GraphHeight, LevelsMatchBfs) {
  const Filling f = BuildFilling(Cantor(6), 2.0, 1.5, 7);
  const auto bfs = oracle::BfsHeights(f);
  for (VertexId v = 0; v < f.num_vertices(); ++v) {
    EXPECT_EQ(VertexHeight(f, v), bfs[v]);
    EXPECT_DOUBLE_EQ(GraphHeight(f, AtVertex(f, v)), bfs[v]);
  }
}

TEST(GraphHeight, Midpoints) {
  const Filling f = BuildFilling(ThreePoints(), 2.0, 1.5, 2);
  const EdgeId h = EdgeBetween(f, 0, 1, 2, 1);
  EXPECT_DOUBLE_EQ(GraphHeight(f, {h, 0.5}), 1.5);
  EXPECT_DOUBLE_EQ(GraphHeight(f, {h, 0.25}), 1.25);
  EXPECT_DOUBLE_EQ(GraphHeight(f, {h, 0.75}), 1.25);
  const EdgeId v = EdgeBetween(f, 0, 0, 2, 1);
  EXPECT_DOUBLE_EQ(GraphHeight(f, {v, 0.5}), 0.5);
  EXPECT_THROW(GraphHeight(f, {999, 0.5}), Error);
  EXPECT_THROW(GraphHeight(f, {h, 1.5}), Error);
}

TEST(EdgeLength, VerticalClosedForm) {
  const Filling f = BuildFilling(ThreePoints(), 2.0, 1.5, 2);
  const double len = UniformizedEdgeLength(f, EdgeBetween(f, 0, 0, 0, 1));
  EXPECT_NEAR(len, 0.5 / std::log(2.0), 1e-15);
  EXPECT_NEAR(len, 0.72135, 1e-5);
}

TEST(EdgeLength, MatchesTrapezoidOfHeight) {
  const Filling f = BuildFilling(Cantor(5), 2.0, 1.5, 6);
  const double eps = f.epsilon();
  for (EdgeId e = 0; e < f.num_edges(); e += 5) {
    const double q = oracle::Trapezoid(
        [&](double t) { return std::exp(-eps * GraphHeight(f, {e, t})); }, 0.0, 1.0,
        20000);
    EXPECT_NEAR(UniformizedEdgeLength(f, e), q, 1e-8) << e;
    // Partial lengths are increasing and end at the full length.
    double prev = 0.0;
    for (double t : {0.1, 0.3, 0.5, 0.7, 0.9, 1.0}) {
      const double s = PartialEdgeLength(f, e, t);
      EXPECT_GT(s, prev);
      prev = s;
    }
    EXPECT_DOUBLE_EQ(prev, UniformizedEdgeLength(f, e));
  }
}

TEST(EdgeLength, HorizontalIntegrandBounds) {
  const Filling f = BuildFilling(Cantor(6), 2.0, 1.5, 7);
  const double eps = f.epsilon();
  auto vertical = [&](int n) { return (std::exp(-eps * n) - std::exp(-eps * (n + 1))) / eps; };
  int seen = 0;
  for (EdgeId id = 0; id < f.num_edges(); ++id) {
    const Edge& e = f.edge(id);
    if (e.kind != EdgeKind::kHorizontal) continue;
    const int n = f.vertex(e.a).level;
    const double len = UniformizedEdgeLength(f, id);
    // the integrand lies in (e^{-eps (n + 1/2)}, e^{-eps n}) on a unit interval
    EXPECT_LT(len, std::exp(-eps * n));
    EXPECT_GT(len, std::exp(-eps * (n + 0.5)));
    EXPECT_GT(len, vertical(n + 1));
    EXPECT_NEAR(len, 2.0 * (std::exp(-eps * n) - std::exp(-eps * (n + 0.5))) / eps, 1e-14);
    ++seen;
  }
  EXPECT_GT(seen, 0);
  // geometric decay
  EXPECT_NEAR(vertical(20), std::pow(2.0, -20) * 0.5 / eps, 1e-18);
}

TEST(UniformizedDistance, MatchesDijkstraOracle) {
  const Filling f = BuildFilling(Cantor(5), 3.0, 1.5, 6);
  const auto root = RootDistances(f);
  const auto want = oracle::VertexDistances(f, f.root());
  for (VertexId v = 0; v < f.num_vertices(); ++v) {
    EXPECT_NEAR(root[v], want[v], 1e-13);
    EXPECT_LE(root[v], 1.0 / f.epsilon());
  }
  for (VertexId a = 0; a < f.num_vertices(); a += 11) {
    const auto from_a = oracle::VertexDistances(f, a);
    for (VertexId b = 0; b < f.num_vertices(); b += 13) {
      EXPECT_NEAR(UniformizedDistance(f, a, b), from_a[b], 1e-13);
      EXPECT_NEAR(UniformizedDistance(f, a, b), UniformizedDistance(f, b, a), 1e-13);
    }
  }
  EXPECT_DOUBLE_EQ(UniformizedDistance(f, f.root(), f.root()), 0.0);
}

TEST(UniformizedDistance, EdgePoints) {
  const Filling f = BuildFilling(Cantor(4), 2.0, 1.5, 5);
  const EdgeId e = 3;
  // Along one edge the distance is the difference of partial lengths.
  EXPECT_NEAR(UniformizedDistance(f, {e, 0.2}, {e, 0.7}),
              PartialEdgeLength(f, e, 0.7) - PartialEdgeLength(f, e, 0.2), 1e-15);
  // Triangle inequality on a handful of interior points.
  std::vector<EdgePoint> pts;
  for (EdgeId i = 0; i < f.num_edges(); i += 7) pts.push_back({i, 0.37});
  for (const auto& x : pts) {
    for (const auto& y : pts) {
      const double dxy = UniformizedDistance(f, x, y);
      EXPECT_NEAR(dxy, UniformizedDistance(f, y, x), 1e-13);
      for (std::size_t k = 0; k < pts.size(); k += 3) {
        EXPECT_LE(dxy, UniformizedDistance(f, x, pts[k]) +
                           UniformizedDistance(f, pts[k], y) + 1e-13);
      }
    }
  }
}

TEST(UniformizedDistance, SingleTower) {
  const Filling f = BuildFilling(OnePoint(), 2.0, 1.5, 12);
  const double eps = std::log(2.0);
  for (int n = 0; n <= 12; ++n) {
    EXPECT_NEAR(UniformizedDistance(f, f.root(), *f.find_vertex(0, n)),
                (1.0 - std::exp(-eps * n)) / eps, 1e-14);
  }
}

TEST(EnumerateRays, ThreePointTwoRaysMerge) {
  const Filling f = BuildFilling(ThreePoints(), 2.0, 1.5, 4);
  const auto v1 = BoundaryNeighborhood(f, 1, 1);
  EXPECT_EQ(v1, (std::vector<VertexId>{*f.find_vertex(0, 1), *f.find_vertex(2, 1)}));
  EXPECT_EQ(BoundaryNeighborhood(f, 1, 2), (std::vector<VertexId>{*f.find_vertex(1, 2)}));
  const auto rays = EnumerateRays(f, 1);
  ASSERT_EQ(rays.size(), 2u);
  EXPECT_NE(rays[0].vertices[1], rays[1].vertices[1]);
  for (int n = 2; n <= 4; ++n) EXPECT_EQ(rays[0].vertices[n], rays[1].vertices[n]);
  for (const auto& r : rays) EXPECT_TRUE(IsValidRay(f, r));
}

TEST(EnumerateRays, MatchesExhaustiveProduct) {
  for (double alpha : {2.0, 3.0}) {
    const Filling f = BuildFilling(Cantor(5), alpha, 1.5, 5);
    for (PointIndex xi = 0; xi < f.space().size(); xi += 3) {
      const auto want = oracle::AllRays(f, xi, 5);
      const auto got = EnumerateRays(f, xi, 100000);
      ASSERT_EQ(got.size(), want.size()) << alpha << " " << xi;
      for (std::size_t i = 0; i < got.size(); ++i) {
        EXPECT_EQ(got[i].vertices, want[i]);
      }
    }
  }
}

TEST(EnumerateRays, CapAndErrors) {
  const Filling f = BuildFilling(Cantor(5), 2.0, 1.5, 5);
  EXPECT_LE(EnumerateRays(f, 4, 1).size(), 1u);
  EXPECT_EQ(EnumerateRays(f, 4, 3, 2).front().depth(), 2);
  EXPECT_THROW(EnumerateRays(f, 999), Error);
  EXPECT_THROW(EnumerateRays(f, 0, 0), Error);
  const Filling one = BuildFilling(OnePoint(), 2.0, 1.5, 9);
  EXPECT_EQ(EnumerateRays(one, 0).size(), 1u);
}

TEST(EnumerateRays, SingleChoiceOnceSeparated) {
  // Points 0, 0.3, 0.6: alpha^-n < 0.3 from n = 2.
  const Filling f = BuildFilling(ThreePoints(), 2.0, 1.5, 8);
  for (PointIndex xi = 0; xi < 3; ++xi) {
    for (int n = 2; n <= 8; ++n) EXPECT_EQ(BoundaryNeighborhood(f, xi, n).size(), 1u);
  }
}

TEST(InterleaveRays, Definition) {
  const Filling f = BuildFilling(ThreePoints(), 2.0, 1.5, 4);
  const auto rays = EnumerateRays(f, 1);
  const auto& r1 = rays[0];
  const auto& r2 = rays[1];
  EXPECT_EQ(InterleaveRays(r1, r1).vertices, r1.vertices);
  const auto a = InterleaveRays(r1, r2);
  const auto b = InterleaveRays(r2, r1);
  // The rays differ only at level 1, which is odd.
  EXPECT_EQ(a.vertices, r2.vertices);
  EXPECT_EQ(b.vertices, r1.vertices);
  EXPECT_TRUE(IsValidRay(f, a));
  EXPECT_TRUE(IsValidRay(f, b));
  GeodesicRay other = r1;
  other.xi = 0;
  EXPECT_THROW(InterleaveRays(r1, other), Error);
}

TEST(InterleaveRays, AlwaysValidOnCantor) {
  const Filling f = BuildFilling(Cantor(6), 2.0, 1.5, 7);
  for (PointIndex xi = 0; xi < f.space().size(); xi += 5) {
    const auto rays = EnumerateRays(f, xi, 16);
    for (const auto& r1 : rays) {
      for (const auto& r2 : rays) {
        const auto j = InterleaveRays(r1, r2);
        EXPECT_TRUE(IsValidRay(f, j));
        for (int n = 0; n <= j.depth(); ++n) {
          EXPECT_EQ(j.vertices[n], (n % 2 == 0 ? r1 : r2).vertices[n]);
        }
      }
    }
  }
}

TEST(RayLength, ClosedForm) {
  EXPECT_DOUBLE_EQ(ClosedFormRayLength(std::log(2.0), 0), 0.0);
  EXPECT_NEAR(ClosedFormRayLength(std::log(2.0), 1), 0.72135, 1e-5);
  EXPECT_NEAR(ClosedFormRayLength(std::log(2.0), 200), 1.0 / std::log(2.0), 1e-15);
  for (double alpha : {2.0, 3.0}) {
    const Filling f = BuildFilling(Cantor(8), alpha, 1.5, 8);
    for (PointIndex xi = 0; xi < f.space().size(); xi += 17) {
      for (const auto& r : EnumerateRays(f, xi, 8)) {
        double sum = 0.0;
        for (int n = 0; n < r.depth(); ++n) {
          sum += (std::exp(-f.epsilon() * n) - std::exp(-f.epsilon() * (n + 1))) /
                 f.epsilon();
        }
        EXPECT_NEAR(RayLength(f, r), sum, 1e-12);
        EXPECT_NEAR(RayLength(f, r), ClosedFormRayLength(f.epsilon(), r.depth()), 1e-12);
        EXPECT_LT(RayLength(f, r), 1.0 / f.epsilon());
      }
    }
  }
}

}  // namespace
}  // namespace hyperfill
