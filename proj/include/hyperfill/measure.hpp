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

// The lifted measure d mu = rho(|x|) (nu(B_a) + nu(B_b)) d|x| on edges.
// Vertices carry no mass under d|x|.

#ifndef HYPERFILL_MEASURE_HPP_
#define HYPERFILL_MEASURE_HPP_

#include <functional>
#include <vector>

#include "hyperfill/filling.hpp"
#include "hyperfill/geometry.hpp"
#include "hyperfill/radial_weight.hpp"

namespace hyperfill {

// Edges counted in a truncation X_N = {|x| <= N}: vertical edges leaving
// levels < N and horizontal edges at levels < N. N < 0 means everything.
bool EdgeBelow(const Filling& filling, EdgeId e, int max_level);

double EdgeMeasure(const Filling& filling, const RadialWeight& rho, EdgeId e);

// Point evaluation of the density 2 rho(|v|) nu(B_v) at a vertex; it is
// never integrated since vertices are mu-null.
double VertexDensity(const Filling& filling, const RadialWeight& rho,
                     VertexId v);

using EdgeFunction = std::function<double(const EdgePoint&)>;

// sum over edges of int_0^1 f rho(|x|) (m_a + m_b) dt.
double IntegrateOverFilling(const Filling& filling, const RadialWeight& rho,
                            const EdgeFunction& f, int max_level = -1);

// Per level n: S_V(n) = sum of m_a + m_b over vertical edges n -> n+1,
// S_H(n) the same over horizontal edges at level n.
struct LevelMassSums {
  std::vector<double> vertical;
  std::vector<double> horizontal;
};
LevelMassSums ComputeLevelMassSums(const Filling& filling);

// Contribution of level n to int_X phi(|x|) dmu, for n < max_level:
// S_V(n) int_n^{n+1} phi rho + S_H(n) 2 int_n^{n+1/2} phi rho.
// phi is passed as its logarithm (-inf where phi = 0) so huge or tiny
// factors cancel before exponentiation. `cuts` are extra split points.
std::vector<double> RadialLevelIntegrals(const Filling& filling,
                                         const RadialWeight& rho,
                                         const std::function<double(double)>& log_phi,
                                         const std::vector<double>& cuts,
                                         int max_level = -1);

// int_X phi(|x|) dmu for phi >= 0.
double IntegrateRadial(const Filling& filling, const RadialWeight& rho,
                       const std::function<double(double)>& phi,
                       int max_level = -1);

enum class RayMode { kPlain, kMassNormalized };

// Along a (vertical) ray, f given as a function of height.
// kPlain: int f dmu. kMassNormalized: int f^p / nu(B_{v_x}) dmu.
double IntegrateAlongRay(const Filling& filling, const GeodesicRay& ray,
                         const RadialWeight& rho,
                         const std::function<double(double)>& f, RayMode mode,
                         double p = 1.0);

struct RayAverageResult {
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
};

// lhs = sum_xi nu_xi int_{first ray to xi} phi^p / nu(B_{v_x}) dmu,
// rhs = int_{X_N} phi^p dmu.
RayAverageResult RayAverageRatio(const Filling& filling, const RadialWeight& rho,
                           const std::function<double(double)>& phi, double p,
                           int max_level = -1);

struct TotalMassResult {
  double mu_XN = 0.0;
  double nuZ_times_intrho = 0.0;
  double ratio = 0.0;
};

TotalMassResult TotalMass(const Filling& filling, const RadialWeight& rho,
                          int max_level);

// Along each edge the nearest-vertex mass against m_a + m_b.
struct ComparabilityReport {
  double min_ratio = 1.0;           // min over edges of min(m_a, m_b)/(m_a + m_b)
  double max_neighbor_ratio = 1.0;  // max over edges of max/min mass
  double lower_bound = 0.5;         // 1 / (1 + max_neighbor_ratio)
};
ComparabilityReport CheckEdgeComparability(const Filling& filling);

}  // namespace hyperfill

#endif  // HYPERFILL_MEASURE_HPP_
