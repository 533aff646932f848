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

// Radial functions u(x) = U(|x|) on a filling, their Sobolev norms, and
// boundary traces along geodesic rays (T) and by level averages (tilde).

#ifndef HYPERFILL_TRACE_LAB_HPP_
#define HYPERFILL_TRACE_LAB_HPP_

#include <cstdint>
#include <functional>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "hyperfill/filling.hpp"
#include "hyperfill/geometry.hpp"
#include "hyperfill/radial_weight.hpp"

namespace hyperfill {

// A bump of U on [a, b]: U(a) = U(b) = 0, U(c) = 1.
struct TentCell {
  double a = 0.0;
  double c = 0.0;
  double b = 0.0;
};

// U and a density q with |U'(t)| <= q(t) exp(-eps t), so that q(|x|) is an
// upper gradient of u for the uniformized length.
struct RadialFunction {
  std::string tag;
  double epsilon = 0.0;
  std::function<double(double)> profile;
  std::function<double(double)> log_density;  // -inf where q = 0
  // Heights that trace sampling must hit (cell ends, peaks).
  std::vector<double> features;
  std::vector<TentCell> cells;

  double value(double t) const { return profile(t); }
  double density(double t) const;
};

// Values on the filling. Radial functions depend on height only; tests use
// vertex tables to build ray-dependent fixtures.
class XFunction {
 public:
  virtual ~XFunction() = default;
  // Value at fraction s of the vertical edge lower -> upper.
  virtual double OnVertical(const Filling& filling, VertexId lower,
                            VertexId upper, double s) const = 0;
  virtual double AtVertex(const Filling& filling, VertexId v) const = 0;
  virtual bool radial() const { return false; }
  // Extra fractions in (0, 1) to sample on edges starting at level n.
  virtual std::vector<double> Features(int n) const {
    (void)n;
    return {};
  }
};

std::shared_ptr<const XFunction> FromRadial(RadialFunction u);

// ---- norms ----

struct SobolevNorms {
  double Lp_u = 0.0;
  double Lp_g = 0.0;
  double N_norm = 0.0;
  double dotN_norm = 0.0;
  // Per level n: int over level-n edges of |u|^p and q^p.
  std::vector<double> level_u;
  std::vector<double> level_g;
  // S_V(n) + 2 S_H(n): bounds a level increment by the 1-D integral.
  std::vector<double> level_weight;
};

SobolevNorms ComputeSobolevNorms(const Filling& filling, const RadialWeight& rho,
                                 const RadialFunction& u, double p,
                                 int max_level = -1);

// int_a^b q^p rho dt.
double RadialEnergy(const RadialWeight& rho, const RadialFunction& u, double p,
                    double a, double b);

// Largest violation of |u(x) - u(y)| <= int_path q ds over sub-paths of
// the vertex path; <= 0 when the upper-gradient inequality holds.
double UpperGradientDefect(const Filling& filling, const RadialFunction& u,
                           const std::vector<VertexId>& path,
                           int samples_per_edge = 16);

// ---- traces ----

enum class TraceStatus { kConverged, kOscillating, kDiverged, kUndetermined };

std::string TraceStatusName(TraceStatus s);

struct TraceOptions {
  double tol = 1e-4;
  int window = 5;
  int max_rays = 64;
  int depth = -1;  // -1: all levels of the filling
  int samples_per_edge = 8;
};

struct LimitVerdict {
  TraceStatus status = TraceStatus::kUndetermined;
  double value = 0.0;    // converged: last sample
  double liminf = 0.0;   // over the second half
  double limsup = 0.0;
  int direction = 0;     // diverged: +1 or -1
  double depth = 0.0;
};

// Classifies a sampled sequence; heights ascending, last one = depth.
LimitVerdict DetectLimit(const std::vector<double>& heights,
                         const std::vector<double>& values,
                         const TraceOptions& opt);

struct RaySamples {
  std::vector<double> heights;
  std::vector<double> values;
};

RaySamples SampleRay(const XFunction& u, const Filling& filling,
                     const GeodesicRay& ray, int samples_per_edge);
// Radial sampling only needs the depth.
RaySamples SampleRadial(const RadialFunction& u, int depth,
                        int samples_per_edge);

LimitVerdict TraceAlongRay(const RadialFunction& u, const GeodesicRay& ray,
                           const TraceOptions& opt = {});
LimitVerdict TraceAlongRay(const XFunction& u, const Filling& filling,
                           const GeodesicRay& ray, const TraceOptions& opt = {});

struct RayTrace {
  int first = 0;
  int second = -1;  // >= 0 for the interleaving of rays first and second
  LimitVerdict verdict;
};

struct TraceVerdict {
  LimitVerdict overall;
  bool ray_independent = true;
  int depth = 0;
  int rays = 0;
  std::vector<RayTrace> per_ray;  // plain rays, then interleavings
};

TraceVerdict TraceT(const XFunction& u, const Filling& filling, PointIndex xi,
                    const TraceOptions& opt = {});

struct TildeTrace {
  std::vector<double> sequence;  // u_n(xi), n = 0..max_level
  LimitVerdict verdict;
};

TildeTrace TraceTilde(const XFunction& u, const Filling& filling, PointIndex xi,
                      int max_level = -1, const TraceOptions& opt = {});

struct PointTraces {
  PointIndex xi = 0;
  TraceVerdict T;
  TildeTrace tilde;
};

// Both traces at every boundary point, evaluated concurrently.
std::vector<PointTraces> TraceAllPoints(const XFunction& u,
                                        const Filling& filling,
                                        const TraceOptions& opt = {});

struct TraceNormBound {
  double trace_norm = 0.0;  // (sum_xi nu(xi) |Tu(xi)|^p)^(1/p), converged xi
  double dotN_norm = 0.0;
  double ratio = 0.0;
  int unconverged = 0;
};

// Compares the L^p(nu) norm of the sampled trace with the homogeneous norm.
TraceNormBound CheckTraceNormBound(const Filling& filling, const RadialWeight& rho,
                                   const RadialFunction& u, double p,
                                   const TraceOptions& opt = {});

// ---- constructors ----

struct BuildOptions {
  double alpha = 2.0;
  double horizon = 40.0;
  int min_cells = 3;
};

// U = log(1 + I), I(t) = int_0^t w, when R is infinite; a unit staircase
// over level-set cells when p = 1.
RadialFunction BuildDivergent(const RadialWeight& rho, double p,
                              const BuildOptions& opt = {});

// p = 1, R infinite: tents on intervals where exp(-eps t)/rho >= 2^k.
RadialFunction BuildLevelSetOscillator(const RadialWeight& rho,
                                       const BuildOptions& opt = {});

// p > 1, R infinite, finite measure: tents on cells carrying 2^j of the
// integral of w.
RadialFunction BuildPartitionOscillator(const RadialWeight& rho, double p,
                                        const BuildOptions& opt = {});

// p > 1, infinite measure, calR infinite: tents on sub-cells of rho-mass
// 2^-k picked inside unit-mass cells with a large integral of w.
RadialFunction BuildCellOscillator(const RadialWeight& rho, double p,
                                   const BuildOptions& opt = {});

struct GaussianPair {
  RadialWeight rho;
  RadialFunction u;
};

// rho = exp(-t^2 - eps p t) with tents on every [n, n+1]: U vanishes at the
// integers, so level averages vanish while U oscillates along rays.
GaussianPair BuildGaussianPair(double p, const BuildOptions& opt = {});

// U = a + b exp(-c t) with seeded coefficients; a = 0 when the limit must
// vanish.
RadialFunction MakeSmooth(std::mt19937_64& rng, double epsilon, bool zero_limit);

}  // namespace hyperfill

#endif  // HYPERFILL_TRACE_LAB_HPP_
