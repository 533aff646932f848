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

#include "hyperfill/filling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "hyperfill/error.hpp"

namespace hyperfill {

NetHierarchy BuildNets(const MetricSpaceSample& space, double alpha,
                       int max_level) {
  if (!(alpha > 1.0) || !std::isfinite(alpha)) {
    throw Error(ErrorKind::kInvalidParameter, "alpha must be > 1");
  }
  if (max_level < 1) {
    throw Error(ErrorKind::kInvalidParameter, "max_level must be >= 1");
  }
  NetHierarchy nets;
  nets.alpha = alpha;
  nets.max_level = max_level;
  nets.levels.push_back({space.base_index()});

  std::vector<char> member(space.size(), 0);
  member[space.base_index()] = 1;
  std::vector<PointIndex> current{space.base_index()};
  for (int n = 1; n <= max_level; ++n) {
    const double sep = std::pow(alpha, -n);
    for (PointIndex z = 0; z < space.size(); ++z) {
      if (member[z]) continue;
      bool separated = true;
      for (PointIndex y : current) {
        if (space.distance(z, y) < sep) {
          separated = false;
          break;
        }
      }
      if (separated) {
        current.push_back(z);
        member[z] = 1;
      }
    }
    std::vector<PointIndex> sorted = current;
    std::sort(sorted.begin(), sorted.end());
    nets.levels.push_back(std::move(sorted));
  }
  return nets;
}

Filling::Filling(std::shared_ptr<const MetricSpaceSample> space, double alpha,
                 double tau, int levels, std::vector<Vertex> vertices,
                 std::vector<Edge> edges)
    : space_(std::move(space)),
      alpha_(alpha),
      tau_(tau),
      epsilon_(std::log(alpha)),
      levels_(levels),
      vertices_(std::move(vertices)),
      edges_(std::move(edges)) {
  if (!space_) throw Error(ErrorKind::kInvariantViolation, "filling without space");
  if (!(alpha_ > 1.0)) throw Error(ErrorKind::kInvalidParameter, "alpha must be > 1");
  if (!(tau_ > 1.0)) throw Error(ErrorKind::kInvalidParameter, "tau must be > 1");
  if (vertices_.empty() || vertices_[0].level != 0) {
    throw Error(ErrorKind::kInvariantViolation, "filling has no root");
  }
  level_offset_.assign(static_cast<std::size_t>(levels_) + 2, vertices_.size());
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    const Vertex& v = vertices_[i];
    if (v.level < 0 || v.level > levels_ || v.center >= space_->size()) {
      throw Error(ErrorKind::kInvariantViolation, "vertex out of range");
    }
    if (i > 0) {
      const Vertex& u = vertices_[i - 1];
      if (std::pair(u.level, u.center) >= std::pair(v.level, v.center)) {
        throw Error(ErrorKind::kInvariantViolation,
                    "vertices not sorted by (level, center)");
      }
    }
    auto& off = level_offset_[static_cast<std::size_t>(v.level)];
    off = std::min(off, i);
  }
  for (int n = levels_; n >= 0; --n) {
    auto idx = static_cast<std::size_t>(n);
    level_offset_[idx] = std::min(level_offset_[idx], level_offset_[idx + 1]);
  }
  if (level_offset_[1] != 1) {
    throw Error(ErrorKind::kInvariantViolation, "level 0 must hold only the root");
  }

  adjacency_.assign(vertices_.size(), {});
  for (EdgeId e = 0; e < edges_.size(); ++e) {
    const Edge& edge = edges_[e];
    if (edge.a >= edge.b || edge.b >= vertices_.size()) {
      throw Error(ErrorKind::kInvariantViolation, "malformed edge");
    }
    const int gap = vertices_[edge.b].level - vertices_[edge.a].level;
    if ((edge.kind == EdgeKind::kHorizontal && gap != 0) ||
        (edge.kind == EdgeKind::kVertical && gap != 1)) {
      throw Error(ErrorKind::kInvariantViolation, "edge kind does not match levels");
    }
    adjacency_[edge.a].emplace_back(edge.b, e);
    adjacency_[edge.b].emplace_back(edge.a, e);
  }
  for (auto& list : adjacency_) std::sort(list.begin(), list.end());
}

const Vertex& Filling::vertex(VertexId v) const {
  if (v >= vertices_.size()) {
    throw Error(ErrorKind::kUnknownVertex, "unknown vertex " + std::to_string(v));
  }
  return vertices_[v];
}

const Edge& Filling::edge(EdgeId e) const {
  if (e >= edges_.size()) {
    throw Error(ErrorKind::kUnknownEdge, "unknown edge " + std::to_string(e));
  }
  return edges_[e];
}

const std::vector<std::pair<VertexId, EdgeId>>& Filling::neighbors(
    VertexId v) const {
  vertex(v);
  return adjacency_[v];
}

std::optional<VertexId> Filling::find_vertex(PointIndex center,
                                             int level) const {
  if (level < 0 || level > levels_) return std::nullopt;
  const auto lo = vertices_.begin() +
                  static_cast<std::ptrdiff_t>(level_offset_[level]);
  const auto hi = vertices_.begin() +
                  static_cast<std::ptrdiff_t>(level_offset_[level + 1]);
  const auto it = std::lower_bound(
      lo, hi, center,
      [](const Vertex& v, PointIndex c) { return v.center < c; });
  if (it == hi || it->center != center) return std::nullopt;
  return static_cast<VertexId>(it - vertices_.begin());
}

std::optional<EdgeId> Filling::find_edge(VertexId v, VertexId w) const {
  const auto& list = neighbors(v);
  const auto it = std::lower_bound(
      list.begin(), list.end(), std::pair<VertexId, EdgeId>(w, 0));
  if (it == list.end() || it->first != w) return std::nullopt;
  return it->second;
}

std::vector<VertexId> Filling::level_vertices(int level) const {
  std::vector<VertexId> out;
  if (level < 0 || level > levels_) return out;
  for (std::size_t i = level_offset_[level]; i < level_offset_[level + 1]; ++i) {
    out.push_back(i);
  }
  return out;
}

Filling BuildFilling(std::shared_ptr<const MetricSpaceSample> space,
                     const NetHierarchy& nets, double tau) {
  if (!(tau > 1.0) || !std::isfinite(tau)) {
    throw Error(ErrorKind::kInvalidParameter, "tau must be > 1");
  }
  const double alpha = nets.alpha;
  std::vector<Vertex> vertices;
  std::vector<std::size_t> first;  // first vertex id per level
  for (int n = 0; n <= nets.max_level; ++n) {
    first.push_back(vertices.size());
    const double radius = std::pow(alpha, -n);
    for (PointIndex z : nets.levels[n]) {
      vertices.push_back({z, n, radius, BallMeasure(*space, z, radius)});
    }
  }
  first.push_back(vertices.size());

  std::vector<Edge> edges;
  for (int n = 0; n <= nets.max_level; ++n) {
    const double rn = std::pow(alpha, -n);
    const double horizontal_reach = tau * 2.0 * rn;
    for (std::size_t i = first[n]; i < first[n + 1]; ++i) {
      for (std::size_t j = i + 1; j < first[n + 1]; ++j) {
        if (space->distance(vertices[i].center, vertices[j].center) <
            horizontal_reach) {
          edges.push_back({i, j, EdgeKind::kHorizontal});
        }
      }
    }
    if (n == nets.max_level) continue;
    // tau^0 = 1 for consecutive levels.
    const double vertical_reach = rn + std::pow(alpha, -(n + 1));
    for (std::size_t i = first[n]; i < first[n + 1]; ++i) {
      for (std::size_t j = first[n + 1]; j < first[n + 2]; ++j) {
        if (space->distance(vertices[i].center, vertices[j].center) <
            vertical_reach) {
          edges.push_back({i, j, EdgeKind::kVertical});
        }
      }
    }
  }
  std::sort(edges.begin(), edges.end(), [](const Edge& x, const Edge& y) {
    return std::pair(x.a, x.b) < std::pair(y.a, y.b);
  });
  return Filling(std::move(space), alpha, tau, nets.max_level,
                 std::move(vertices), std::move(edges));
}

Filling BuildFilling(std::shared_ptr<const MetricSpaceSample> space,
                     double alpha, double tau, int levels) {
  if (!(tau > 1.0) || !std::isfinite(tau)) {
    throw Error(ErrorKind::kInvalidParameter, "tau must be > 1");
  }
  const NetHierarchy nets = BuildNets(*space, alpha, levels);
  return BuildFilling(std::move(space), nets, tau);
}

DegreeStats ComputeDegreeStats(const Filling& filling) {
  DegreeStats stats;
  stats.global_min = std::numeric_limits<std::size_t>::max();
  for (int n = 0; n <= filling.levels(); ++n) {
    LevelDegree row;
    row.level = n;
    row.min = std::numeric_limits<std::size_t>::max();
    double sum = 0.0;
    for (VertexId v : filling.level_vertices(n)) {
      const std::size_t d = filling.neighbors(v).size();
      row.min = std::min(row.min, d);
      row.max = std::max(row.max, d);
      sum += static_cast<double>(d);
      ++row.count;
    }
    if (row.count == 0) row.min = 0;
    row.mean = row.count ? sum / static_cast<double>(row.count) : 0.0;
    stats.global_max = std::max(stats.global_max, row.max);
    stats.global_min = std::min(stats.global_min, row.min);
    stats.per_level.push_back(row);
  }
  return stats;
}

double VertexBallMass(const Filling& filling, VertexId v) {
  return filling.vertex(v).mass;
}

}  // namespace hyperfill
