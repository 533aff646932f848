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

// Nested nets A_0 ⊆ A_1 ⊆ ... and the leveled graph built on them.

#ifndef HYPERFILL_FILLING_HPP_
#define HYPERFILL_FILLING_HPP_

#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "hyperfill/space.hpp"

namespace hyperfill {

using VertexId = std::size_t;
using EdgeId = std::size_t;

struct NetHierarchy {
  double alpha = 2.0;
  int max_level = 0;
  // levels[n] = A_n, sorted by point index.
  std::vector<std::vector<PointIndex>> levels;
};

// Greedy maximal alpha^-n separated nets, scanning points by index.
NetHierarchy BuildNets(const MetricSpaceSample& space, double alpha,
                       int max_level);

struct Vertex {
  PointIndex center = 0;
  int level = 0;
  double radius = 1.0;
  double mass = 0.0;
};

enum class EdgeKind { kHorizontal, kVertical };

// a < b always; for vertical edges a is the lower level.
struct Edge {
  VertexId a = 0;
  VertexId b = 0;
  EdgeKind kind = EdgeKind::kVertical;
};

class Filling {
 public:
  // Takes already validated parts; used by the builder and the loader.
  Filling(std::shared_ptr<const MetricSpaceSample> space, double alpha,
          double tau, int levels, std::vector<Vertex> vertices,
          std::vector<Edge> edges);

  double alpha() const { return alpha_; }
  double tau() const { return tau_; }
  double epsilon() const { return epsilon_; }
  int levels() const { return levels_; }
  const MetricSpaceSample& space() const { return *space_; }
  std::shared_ptr<const MetricSpaceSample> space_ptr() const { return space_; }

  std::size_t num_vertices() const { return vertices_.size(); }
  std::size_t num_edges() const { return edges_.size(); }
  const std::vector<Vertex>& vertices() const { return vertices_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const Vertex& vertex(VertexId v) const;  // throws UnknownVertex
  const Edge& edge(EdgeId e) const;        // throws UnknownEdge
  VertexId root() const { return 0; }

  // (neighbor, edge) pairs, neighbors ascending.
  const std::vector<std::pair<VertexId, EdgeId>>& neighbors(VertexId v) const;
  std::optional<VertexId> find_vertex(PointIndex center, int level) const;
  std::optional<EdgeId> find_edge(VertexId v, VertexId w) const;
  // Vertex ids at one level, ascending by center.
  std::vector<VertexId> level_vertices(int level) const;

 private:
  std::shared_ptr<const MetricSpaceSample> space_;
  double alpha_;
  double tau_;
  double epsilon_;
  int levels_;
  std::vector<Vertex> vertices_;
  std::vector<Edge> edges_;
  std::vector<std::vector<std::pair<VertexId, EdgeId>>> adjacency_;
  std::vector<std::size_t> level_offset_;  // first vertex id of each level
};

// Vertices sorted by (level, center); edges by the open-ball rule
// d < tau^(1-|n-m|) (alpha^-n + alpha^-m), |n-m| <= 1.
Filling BuildFilling(std::shared_ptr<const MetricSpaceSample> space,
                     const NetHierarchy& nets, double tau);

Filling BuildFilling(std::shared_ptr<const MetricSpaceSample> space,
                     double alpha, double tau, int levels);

struct LevelDegree {
  int level = 0;
  std::size_t count = 0;
  std::size_t min = 0;
  std::size_t max = 0;
  double mean = 0.0;
};

struct DegreeStats {
  std::vector<LevelDegree> per_level;
  std::size_t global_max = 0;
  std::size_t global_min = 0;
};

DegreeStats ComputeDegreeStats(const Filling& filling);

double VertexBallMass(const Filling& filling, VertexId v);

}  // namespace hyperfill

#endif  // HYPERFILL_FILLING_HPP_
