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

// Uniformized length structure ds = exp(-eps |x|) d|x| on a filling, graph
// height, and geodesic rays towards sample points.

#ifndef HYPERFILL_GEOMETRY_HPP_
#define HYPERFILL_GEOMETRY_HPP_

#include <vector>

#include "hyperfill/filling.hpp"

namespace hyperfill {

// A point inside edge `edge`, at parameter t measured from edge.a.
struct EdgePoint {
  EdgeId edge = 0;
  double t = 0.0;
};

// Graph distance to the root. Every vertex has a vertical neighbour one
// level down and an edge changes the level by at most one, so this is the
// level; tests cross-check it against BFS.
inline int VertexHeight(const Filling& filling, VertexId v) {
  return filling.vertex(v).level;
}

// min(|a| + t, |b| + 1 - t).
double GraphHeight(const Filling& filling, const EdgePoint& x);

// int_0^1 exp(-eps |x(t)|) dt in closed form.
double UniformizedEdgeLength(const Filling& filling, EdgeId e);

// int_0^t exp(-eps |x(s)|) ds.
double PartialEdgeLength(const Filling& filling, EdgeId e, double t);

// Endpoint nearest to x; the midpoint of an edge goes to the lower level
// (edge.a for horizontal edges).
VertexId NearestVertex(const Filling& filling, const EdgePoint& x);

// An EdgePoint sitting on vertex v (t = 0 or 1 of some incident edge).
EdgePoint AtVertex(const Filling& filling, VertexId v);

double UniformizedDistance(const Filling& filling, const EdgePoint& x,
                           const EdgePoint& y);
double UniformizedDistance(const Filling& filling, VertexId v, VertexId w);

// Uniformized distance from the root to every vertex.
std::vector<double> RootDistances(const Filling& filling);

struct GeodesicRay {
  PointIndex xi = 0;
  // vertices[n] is the level-n vertex.
  std::vector<VertexId> vertices;

  int depth() const { return static_cast<int>(vertices.size()) - 1; }
};

// V_n(xi): level-n vertices whose centre is within alpha^-n of xi.
std::vector<VertexId> BoundaryNeighborhood(const Filling& filling,
                                           PointIndex xi, int level);

// Depth-first over V_1(xi), V_2(xi), ... in ascending centre order, stopping
// after `max_rays` complete rays. depth < 0 means the full filling depth.
std::vector<GeodesicRay> EnumerateRays(const Filling& filling, PointIndex xi,
                                       int max_rays = 64, int depth = -1);

// Even levels from r1, odd levels from r2; truncated to the shorter ray.
GeodesicRay InterleaveRays(const GeodesicRay& r1, const GeodesicRay& r2);

bool IsValidRay(const Filling& filling, const GeodesicRay& ray);

// Sum of the vertical edge lengths along the ray.
double RayLength(const Filling& filling, const GeodesicRay& ray);

// (1 - exp(-eps N)) / eps.
double ClosedFormRayLength(double epsilon, int depth);

}  // namespace hyperfill

#endif  // HYPERFILL_GEOMETRY_HPP_
