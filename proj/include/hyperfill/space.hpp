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

// Finite samples (Z, d, nu) of a compact metric space with diam Z < 1.

#ifndef HYPERFILL_SPACE_HPP_
#define HYPERFILL_SPACE_HPP_

#include <array>
#include <cstddef>
#include <vector>

namespace hyperfill {

using PointIndex = std::size_t;

enum class MetricMode { kEuclidean, kMatrix };

// Immutable once constructed. Every factory validates the metric axioms,
// the diameter bound and positivity of the weights.
class MetricSpaceSample {
 public:
  // `points` hold 1 or 2 coordinates each (all the same length).
  static MetricSpaceSample Euclidean(std::vector<std::vector<double>> points,
                                     std::vector<double> weights,
                                     PointIndex base_index = 0);
  // Row-major symmetric matrix, n rows of n entries.
  static MetricSpaceSample Matrix(std::vector<std::vector<double>> matrix,
                                  std::vector<double> weights,
                                  PointIndex base_index = 0);

  std::size_t size() const { return weights_.size(); }
  MetricMode mode() const { return mode_; }
  int dim() const { return dim_; }
  double distance(PointIndex i, PointIndex j) const;
  double weight(PointIndex i) const { return weights_[i]; }
  const std::vector<double>& weights() const { return weights_; }
  PointIndex base_index() const { return base_index_; }
  double diam() const { return diam_; }
  double total_mass() const { return total_mass_; }

  // Coordinates (euclidean mode only); second entry is 0 for dim 1.
  const std::array<double, 2>& coords(PointIndex i) const { return coords_[i]; }
  // Raw matrix rows (matrix mode only).
  std::vector<std::vector<double>> matrix_rows() const;

  // Copy with every weight multiplied by `factor` > 0.
  MetricSpaceSample WithScaledWeights(double factor) const;

 private:
  MetricSpaceSample() = default;
  void FinishValidation();

  MetricMode mode_ = MetricMode::kEuclidean;
  int dim_ = 1;
  std::vector<std::array<double, 2>> coords_;
  std::vector<double> matrix_;
  std::vector<double> weights_;
  PointIndex base_index_ = 0;
  double diam_ = 0.0;
  double total_mass_ = 0.0;
};

// Endpoints of the middle-thirds construction on [0, scale] after `depth`
// generations: 2^depth points of weight 2^-depth, base point 0.
MetricSpaceSample GenCantor(int depth, double scale);

// Uniform grid with `resolution` points per axis. In 2D the side is
// scale/sqrt(2) so that the diagonal equals `scale`.
MetricSpaceSample GenGrid(int dim, int resolution, double scale);

// nu of the open ball {y : d(y, center) < radius}.
double BallMeasure(const MetricSpaceSample& space, PointIndex center,
                   double radius);

struct DoublingReport {
  double max_ratio = 1.0;
  PointIndex argmax_center = 0;
  double argmax_radius = 0.0;
};

// max over centers and radii of nu(B(x, 2r)) / nu(B(x, r)).
DoublingReport VerifyDoubling(const MetricSpaceSample& space,
                              const std::vector<double>& radii);

}  // namespace hyperfill

#endif  // HYPERFILL_SPACE_HPP_
