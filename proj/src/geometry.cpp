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

#include "hyperfill/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>
#include <string>

#include "hyperfill/error.hpp"

namespace hyperfill {
namespace {

void CheckParam(double t) {
  if (!(t >= 0.0 && t <= 1.0)) {
    throw Error(ErrorKind::kInvalidParameter, "edge parameter outside [0, 1]");
  }
}

// int_0^s exp(-eps (n + u)) du
double Rise(double eps, int n, double s) {
  return -std::exp(-eps * n) * std::expm1(-eps * s) / eps;
}

void Relax(const Filling& filling, std::vector<double>& dist) {
  using Item = std::pair<double, VertexId>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  for (VertexId v = 0; v < dist.size(); ++v) {
    if (dist[v] < std::numeric_limits<double>::infinity()) heap.emplace(dist[v], v);
  }
  while (!heap.empty()) {
    const auto [d, v] = heap.top();
    heap.pop();
    if (d > dist[v]) continue;
    for (const auto& [w, e] : filling.neighbors(v)) {
      const double cand = d + UniformizedEdgeLength(filling, e);
      if (cand < dist[w]) {
        dist[w] = cand;
        heap.emplace(cand, w);
      }
    }
  }
}

}  // namespace

double GraphHeight(const Filling& filling, const EdgePoint& x) {
  CheckParam(x.t);
  const Edge& e = filling.edge(x.edge);
  return std::min(filling.vertex(e.a).level + x.t,
                  filling.vertex(e.b).level + (1.0 - x.t));
}

double UniformizedEdgeLength(const Filling& filling, EdgeId e) {
  return PartialEdgeLength(filling, e, 1.0);
}

double PartialEdgeLength(const Filling& filling, EdgeId id, double t) {
  CheckParam(t);
  const Edge& e = filling.edge(id);
  const double eps = filling.epsilon();
  const int n = filling.vertex(e.a).level;
  if (e.kind == EdgeKind::kVertical || t <= 0.5) return Rise(eps, n, t);
  // Past the apex the height falls back from n + 1/2 to n.
  const double half = Rise(eps, n, 0.5);
  return half + (Rise(eps, n, 0.5) - Rise(eps, n, 1.0 - t));
}

VertexId NearestVertex(const Filling& filling, const EdgePoint& x) {
  CheckParam(x.t);
  const Edge& e = filling.edge(x.edge);
  return x.t <= 0.5 ? e.a : e.b;
}

EdgePoint AtVertex(const Filling& filling, VertexId v) {
  const auto& nb = filling.neighbors(v);
  if (nb.empty()) {
    throw Error(ErrorKind::kUnknownVertex,
                "vertex " + std::to_string(v) + " has no incident edge");
  }
  const Edge& e = filling.edge(nb.front().second);
  return {nb.front().second, e.a == v ? 0.0 : 1.0};
}

double UniformizedDistance(const Filling& filling, const EdgePoint& x,
                           const EdgePoint& y) {
  CheckParam(x.t);
  CheckParam(y.t);
  const Edge& ex = filling.edge(x.edge);
  const Edge& ey = filling.edge(y.edge);
  std::vector<double> dist(filling.num_vertices(),
                           std::numeric_limits<double>::infinity());
  const double sx = PartialEdgeLength(filling, x.edge, x.t);
  const double lx = UniformizedEdgeLength(filling, x.edge);
  dist[ex.a] = sx;
  dist[ex.b] = lx - sx;
  Relax(filling, dist);

  const double sy = PartialEdgeLength(filling, y.edge, y.t);
  const double ly = UniformizedEdgeLength(filling, y.edge);
  double best = std::min(dist[ey.a] + sy, dist[ey.b] + (ly - sy));
  if (x.edge == y.edge) best = std::min(best, std::abs(sx - sy));
  return best;
}

double UniformizedDistance(const Filling& filling, VertexId v, VertexId w) {
  filling.vertex(v);
  filling.vertex(w);
  std::vector<double> dist(filling.num_vertices(),
                           std::numeric_limits<double>::infinity());
  dist[v] = 0.0;
  Relax(filling, dist);
  return dist[w];
}

std::vector<double> RootDistances(const Filling& filling) {
  std::vector<double> dist(filling.num_vertices(),
                           std::numeric_limits<double>::infinity());
  dist[filling.root()] = 0.0;
  Relax(filling, dist);
  return dist;
}

std::vector<VertexId> BoundaryNeighborhood(const Filling& filling,
                                           PointIndex xi, int level) {
  if (xi >= filling.space().size()) {
    throw Error(ErrorKind::kUnknownBoundaryPoint,
                "unknown boundary point " + std::to_string(xi));
  }
  std::vector<VertexId> out;
  for (VertexId v : filling.level_vertices(level)) {
    const Vertex& vx = filling.vertex(v);
    if (filling.space().distance(vx.center, xi) < vx.radius) out.push_back(v);
  }
  return out;
}

std::vector<GeodesicRay> EnumerateRays(const Filling& filling, PointIndex xi,
                                       int max_rays, int depth) {
  if (xi >= filling.space().size()) {
    throw Error(ErrorKind::kUnknownBoundaryPoint,
                "unknown boundary point " + std::to_string(xi));
  }
  if (max_rays < 1) {
    throw Error(ErrorKind::kInvalidParameter, "max_rays must be >= 1");
  }
  if (depth < 0 || depth > filling.levels()) depth = filling.levels();

  std::vector<std::vector<VertexId>> choices(depth + 1);
  for (int n = 0; n <= depth; ++n) {
    choices[n] = BoundaryNeighborhood(filling, xi, n);
    if (choices[n].empty()) {
      throw Error(ErrorKind::kInvariantViolation,
                  "empty V_n(xi) at level " + std::to_string(n));
    }
  }

  std::vector<GeodesicRay> rays;
  GeodesicRay current{xi, {}};
  std::function<void(int)> descend = [&](int n) {
    if (static_cast<int>(rays.size()) >= max_rays) return;
    if (n > depth) {
      rays.push_back(current);
      return;
    }
    for (VertexId v : choices[n]) {
      if (n > 0 && !filling.find_edge(current.vertices.back(), v)) continue;
      current.vertices.push_back(v);
      descend(n + 1);
      current.vertices.pop_back();
      if (static_cast<int>(rays.size()) >= max_rays) return;
    }
  };
  descend(0);
  return rays;
}

GeodesicRay InterleaveRays(const GeodesicRay& r1, const GeodesicRay& r2) {
  if (r1.xi != r2.xi) {
    throw Error(ErrorKind::kMismatchedTargets, "rays target different points");
  }
  const std::size_t len = std::min(r1.vertices.size(), r2.vertices.size());
  GeodesicRay out{r1.xi, {}};
  out.vertices.reserve(len);
  for (std::size_t n = 0; n < len; ++n) {
    out.vertices.push_back(n % 2 == 0 ? r1.vertices[n] : r2.vertices[n]);
  }
  return out;
}

bool IsValidRay(const Filling& filling, const GeodesicRay& ray) {
  if (ray.vertices.empty() || ray.xi >= filling.space().size()) return false;
  for (std::size_t n = 0; n < ray.vertices.size(); ++n) {
    const VertexId v = ray.vertices[n];
    if (v >= filling.num_vertices()) return false;
    const Vertex& vx = filling.vertex(v);
    if (vx.level != static_cast<int>(n)) return false;
    if (!(filling.space().distance(vx.center, ray.xi) < vx.radius)) return false;
    if (n > 0 && !filling.find_edge(ray.vertices[n - 1], v)) return false;
  }
  return true;
}

double RayLength(const Filling& filling, const GeodesicRay& ray) {
  double total = 0.0;
  for (std::size_t n = 1; n < ray.vertices.size(); ++n) {
    const auto e = filling.find_edge(ray.vertices[n - 1], ray.vertices[n]);
    if (!e) {
      throw Error(ErrorKind::kInvariantViolation,
                  "ray vertices " + std::to_string(n - 1) + " and " +
                      std::to_string(n) + " are not adjacent");
    }
    total += UniformizedEdgeLength(filling, *e);
  }
  return total;
}

double ClosedFormRayLength(double epsilon, int depth) {
  return -std::expm1(-epsilon * depth) / epsilon;
}

}  // namespace hyperfill
