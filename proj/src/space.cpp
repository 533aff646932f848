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

#include "hyperfill/space.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "hyperfill/error.hpp"

namespace hyperfill {
namespace {

constexpr std::size_t kMaxPoints = 1000000;
constexpr std::uint64_t kExhaustiveTriples = 100000;
constexpr double kMetricSlack = 1e-12;

[[noreturn]] void Violation(const std::string& what) {
  throw Error(ErrorKind::kInvariantViolation, what);
}

double Cross(const std::array<double, 2>& o, const std::array<double, 2>& a,
             const std::array<double, 2>& b) {
  return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

double PlanarDiameter(std::vector<std::array<double, 2>> pts) {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 2) return 0.0;
  // Monotone chain hull, then brute force over hull vertices.
  std::vector<std::array<double, 2>> hull(2 * pts.size());
  std::size_t k = 0;
  for (const auto& p : pts) {
    while (k >= 2 && Cross(hull[k - 2], hull[k - 1], p) <= 0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && Cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k > 1 ? k - 1 : k);
  double best = 0.0;
  for (std::size_t i = 0; i < hull.size(); ++i) {
    for (std::size_t j = i + 1; j < hull.size(); ++j) {
      best = std::max(best, std::hypot(hull[i][0] - hull[j][0],
                                       hull[i][1] - hull[j][1]));
    }
  }
  return best;
}

void CheckTriple(const MetricSpaceSample& s, std::size_t a, std::size_t b,
                 std::size_t c) {
  const double ab = s.distance(a, b);
  const double bc = s.distance(b, c);
  const double ac = s.distance(a, c);
  const auto fail = [](double lhs, double x, double y) {
    std::ostringstream msg;
    msg << "triangle failure: " << lhs << " > " << x + y;
    Violation(msg.str());
  };
  if (ac > ab + bc + kMetricSlack) fail(ac, ab, bc);
  if (ab > ac + bc + kMetricSlack) fail(ab, ac, bc);
  if (bc > ab + ac + kMetricSlack) fail(bc, ab, ac);
}

}  // namespace

MetricSpaceSample MetricSpaceSample::Euclidean(
    std::vector<std::vector<double>> points, std::vector<double> weights,
    PointIndex base_index) {
  MetricSpaceSample s;
  s.mode_ = MetricMode::kEuclidean;
  if (points.empty()) Violation("empty point set");
  if (points.size() > kMaxPoints) {
    throw Error(ErrorKind::kCapacityExceeded, "too many sample points");
  }
  const std::size_t d = points.front().size();
  if (d != 1 && d != 2) Violation("points must have 1 or 2 coordinates");
  s.dim_ = static_cast<int>(d);
  s.coords_.reserve(points.size());
  for (const auto& p : points) {
    if (p.size() != d) Violation("mixed point dimensions");
    for (double x : p) {
      if (!std::isfinite(x)) Violation("non-finite coordinate");
    }
    s.coords_.push_back({p[0], d == 2 ? p[1] : 0.0});
  }
  s.weights_ = std::move(weights);
  s.base_index_ = base_index;
  s.FinishValidation();
  return s;
}

MetricSpaceSample MetricSpaceSample::Matrix(
    std::vector<std::vector<double>> matrix, std::vector<double> weights,
    PointIndex base_index) {
  MetricSpaceSample s;
  s.mode_ = MetricMode::kMatrix;
  const std::size_t n = matrix.size();
  if (n == 0) Violation("empty distance matrix");
  if (n > 4096) {
    throw Error(ErrorKind::kCapacityExceeded, "distance matrix too large");
  }
  s.matrix_.resize(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    if (matrix[i].size() != n) Violation("distance matrix is not square");
    for (std::size_t j = 0; j < n; ++j) {
      const double v = matrix[i][j];
      if (!std::isfinite(v) || v < 0.0) Violation("negative distance");
      s.matrix_[i * n + j] = v;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (s.matrix_[i * n + i] != 0.0) Violation("nonzero diagonal");
    for (std::size_t j = i + 1; j < n; ++j) {
      if (s.matrix_[i * n + j] != s.matrix_[j * n + i]) {
        Violation("asymmetric matrix");
      }
    }
  }
  s.weights_ = std::move(weights);
  s.base_index_ = base_index;
  s.FinishValidation();
  return s;
}

void MetricSpaceSample::FinishValidation() {
  const std::size_t n =
      mode_ == MetricMode::kEuclidean ? coords_.size() : weights_.size();
  if (weights_.size() != n) Violation("weights and points differ in length");
  if (mode_ == MetricMode::kMatrix && matrix_.size() != n * n) {
    Violation("weights and matrix differ in length");
  }
  if (base_index_ >= n) Violation("base_index out of range");
  total_mass_ = 0.0;
  for (double w : weights_) {
    if (!(w > 0.0) || !std::isfinite(w)) Violation("nonpositive weight");
    total_mass_ += w;
  }

  if (mode_ == MetricMode::kEuclidean) {
    auto sorted = coords_;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      Violation("duplicate sample point");
    }
    diam_ = dim_ == 1 ? sorted.back()[0] - sorted.front()[0]
                      : PlanarDiameter(sorted);
  } else {
    diam_ = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        if (!(matrix_[i * n + j] > 0.0)) Violation("zero distance off diagonal");
        diam_ = std::max(diam_, matrix_[i * n + j]);
      }
    }
    const std::uint64_t nn = n;
    const std::uint64_t triples = n < 3 ? 0 : nn * (nn - 1) * (nn - 2) / 6;
    if (triples <= kExhaustiveTriples) {
      for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = a + 1; b < n; ++b) {
          for (std::size_t c = b + 1; c < n; ++c) CheckTriple(*this, a, b, c);
        }
      }
    } else {
      std::mt19937_64 rng(0x5eed);
      std::uniform_int_distribution<std::size_t> pick(0, n - 1);
      for (std::uint64_t k = 0; k < kExhaustiveTriples; ++k) {
        CheckTriple(*this, pick(rng), pick(rng), pick(rng));
      }
    }
  }
  if (!(diam_ < 1.0)) {
    std::ostringstream msg;
    msg << "diam >= 1 (diam = " << diam_ << ")";
    Violation(msg.str());
  }
}

double MetricSpaceSample::distance(PointIndex i, PointIndex j) const {
  if (mode_ == MetricMode::kMatrix) return matrix_[i * size() + j];
  if (dim_ == 1) return std::abs(coords_[i][0] - coords_[j][0]);
  return std::hypot(coords_[i][0] - coords_[j][0],
                    coords_[i][1] - coords_[j][1]);
}

std::vector<std::vector<double>> MetricSpaceSample::matrix_rows() const {
  const std::size_t n = size();
  std::vector<std::vector<double>> rows(n, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) rows[i][j] = distance(i, j);
  }
  return rows;
}

MetricSpaceSample MetricSpaceSample::WithScaledWeights(double factor) const {
  if (!(factor > 0.0)) {
    throw Error(ErrorKind::kInvalidParameter, "weight scale must be positive");
  }
  MetricSpaceSample s = *this;
  for (double& w : s.weights_) w *= factor;
  s.total_mass_ *= factor;
  return s;
}

MetricSpaceSample GenCantor(int depth, double scale) {
  if (depth < 1) throw Error(ErrorKind::kInvalidParameter, "depth must be >= 1");
  if (!(scale > 0.0 && scale < 1.0)) {
    throw Error(ErrorKind::kInvalidParameter, "scale must lie in (0, 1)");
  }
  if (depth >= 20) {
    throw Error(ErrorKind::kCapacityExceeded, "2^depth exceeds 10^6");
  }
  const std::size_t intervals = std::size_t{1} << (depth - 1);
  const double width = scale * std::pow(3.0, -(depth - 1));
  std::vector<std::vector<double>> points;
  points.reserve(2 * intervals);
  for (std::size_t k = 0; k < intervals; ++k) {
    // Bits of k, most significant first, pick the left or right third.
    double left = 0.0;
    double step = scale;
    for (int bit = depth - 2; bit >= 0; --bit) {
      step /= 3.0;
      if ((k >> bit) & 1U) left += 2.0 * step;
    }
    points.push_back({left});
    points.push_back({left + width});
  }
  const double w = 1.0 / static_cast<double>(points.size());
  return MetricSpaceSample::Euclidean(std::move(points),
                                      std::vector<double>(2 * intervals, w), 0);
}

MetricSpaceSample GenGrid(int dim, int resolution, double scale) {
  if (dim != 1 && dim != 2) {
    throw Error(ErrorKind::kInvalidParameter, "grid dim must be 1 or 2");
  }
  if (resolution < 2) {
    throw Error(ErrorKind::kInvalidParameter, "resolution must be >= 2");
  }
  if (!(scale > 0.0 && scale < 1.0)) {
    throw Error(ErrorKind::kInvalidParameter, "scale must lie in (0, 1)");
  }
  const double count = std::pow(static_cast<double>(resolution), dim);
  if (count > static_cast<double>(kMaxPoints)) {
    throw Error(ErrorKind::kCapacityExceeded, "resolution^dim exceeds 10^6");
  }
  const double side = dim == 1 ? scale : scale / std::sqrt(2.0);
  const double h = side / (resolution - 1);
  std::vector<std::vector<double>> points;
  if (dim == 1) {
    for (int i = 0; i < resolution; ++i) {
      points.push_back({i + 1 == resolution ? side : h * i});
    }
  } else {
    for (int i = 0; i < resolution; ++i) {
      for (int j = 0; j < resolution; ++j) {
        points.push_back({i + 1 == resolution ? side : h * i,
                          j + 1 == resolution ? side : h * j});
      }
    }
  }
  const std::size_t n = points.size();
  return MetricSpaceSample::Euclidean(
      std::move(points), std::vector<double>(n, 1.0 / static_cast<double>(n)),
      0);
}

double BallMeasure(const MetricSpaceSample& space, PointIndex center,
                   double radius) {
  double mass = 0.0;
  for (PointIndex y = 0; y < space.size(); ++y) {
    if (space.distance(y, center) < radius) mass += space.weight(y);
  }
  return mass;
}

DoublingReport VerifyDoubling(const MetricSpaceSample& space,
                              const std::vector<double>& radii) {
  if (radii.empty()) {
    throw Error(ErrorKind::kInvalidParameter, "radii must be nonempty");
  }
  for (double r : radii) {
    if (!(r > 0.0)) {
      throw Error(ErrorKind::kInvalidParameter, "radii must be positive");
    }
  }
  DoublingReport report;
  report.argmax_radius = radii.front();
  for (PointIndex x = 0; x < space.size(); ++x) {
    for (double r : radii) {
      const double ratio =
          BallMeasure(space, x, 2.0 * r) / BallMeasure(space, x, r);
      if (ratio > report.max_ratio) {
        report.max_ratio = ratio;
        report.argmax_center = x;
        report.argmax_radius = r;
      }
    }
  }
  return report;
}

}  // namespace hyperfill
