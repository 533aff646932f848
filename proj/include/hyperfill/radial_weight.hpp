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

// Radial densities rho : [0, inf) -> (0, inf).

#ifndef HYPERFILL_RADIAL_WEIGHT_HPP_
#define HYPERFILL_RADIAL_WEIGHT_HPP_

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace hyperfill {

enum class RhoFamily {
  kBbs,        // exp(-eps p (1 - theta) t)
  kGaussian,  // exp(-t^2 - eps p t)
  kConstant,   // c
  kExpRate,    // exp(-lambda t)
  kPiecewise,  // scale * exp(-rate t) per segment
  kCustom,     // sampled, linear interpolation
  kDip,        // |t - c|^power exp(-rate t), floored at 1e-300
};

enum class TailFlag { kIntegrable, kNonintegrable, kUnknown };

// Behaviour of int^inf exp(-eps p t/(p-1)) rho^(1/(1-p)) beyond a table.
enum class RpTailFlag { kConvergent, kDivergent, kUnknown, kFromContinuation };

struct PiecewiseSegment {
  double from = 0.0;
  double to = 0.0;
  double scale = 1.0;
  double rate = 0.0;
};

// Closed-form description of rho on [from, inf).
struct Asymptotics {
  enum class Kind { kScaledExp, kGaussian, kDip };
  Kind kind = Kind::kScaledExp;
  double from = 0.0;
  double scale = 1.0;  // kScaledExp
  double rate = 0.0;   // all kinds: the linear exponent
  double center = 0.0;  // kDip
  double power = 0.0;   // kDip
};

inline constexpr double kRhoFloor = 1e-300;

class RadialWeight {
 public:
  static RadialWeight Bbs(double theta, double p, double alpha);
  static RadialWeight Gaussian(double p, double alpha);
  static RadialWeight Constant(double c);
  static RadialWeight ExpRate(double lambda);
  static RadialWeight Piecewise(std::vector<PiecewiseSegment> segments,
                                std::optional<TailFlag> declared_tail,
                                RpTailFlag rp_tail = RpTailFlag::kFromContinuation);
  static RadialWeight Custom(std::vector<double> t, std::vector<double> rho,
                             std::optional<TailFlag> declared_tail,
                             RpTailFlag rp_tail = RpTailFlag::kFromContinuation);
  static RadialWeight Dip(double center, double power, double rate);

  RhoFamily family() const { return family_; }
  std::string family_name() const;
  // Scalar parameters as they appear in the document.
  const std::map<std::string, double>& params() const { return params_; }
  const std::vector<PiecewiseSegment>& segments() const { return segments_; }
  const std::vector<double>& sample_t() const { return sample_t_; }
  const std::vector<double>& sample_rho() const { return sample_rho_; }

  // Integrability of rho over [0, inf): declared for tables when given,
  // otherwise read off the asymptotics.
  TailFlag tail() const { return tail_; }
  bool tail_declared() const { return tail_declared_; }
  RpTailFlag rp_tail() const { return rp_tail_; }
  Asymptotics asymptotics() const;

  double value(double t) const;
  double log_value(double t) const;
  // int_a^b rho; closed form when the family has one.
  double Integral(double a, double b) const;
  // Points in (a, b) where rho is not smooth.
  std::vector<double> Breakpoints(double a, double b) const;

  // Short label such as "bbs(theta=0.5,p=2)".
  std::string Describe() const;

 private:
  RadialWeight() = default;
  void FinishTail(std::optional<TailFlag> declared);

  RhoFamily family_ = RhoFamily::kConstant;
  std::map<std::string, double> params_;
  // Linear-exponent families reduce to scale * exp(-rate t).
  double scale_ = 1.0;
  double rate_ = 0.0;
  double center_ = 0.0;
  double power_ = 0.0;
  std::vector<PiecewiseSegment> segments_;
  std::vector<double> sample_t_;
  std::vector<double> sample_rho_;
  TailFlag tail_ = TailFlag::kUnknown;
  bool tail_declared_ = false;
  RpTailFlag rp_tail_ = RpTailFlag::kFromContinuation;
};

// Unit-width gaps where rho = exp(-eps p t) alternating with unit-mass
// spikes of height e^j and width e^-j (j capped at 20), up to `horizon`. Declared
// non-integrable with a divergent Rp tail.
RadialWeight MakeSpikeGap(double alpha, double p, double horizon = 80.0);

// Unit-mass unit cells [j-1, j) holding a deep valley on [j-1/2, j-1/4)
// whose Rp integral grows like e^(2j). Declared non-integrable with a
// divergent Rp tail.
RadialWeight MakeValley(double alpha, double p, int cells = 30);

// |t - 1|^(2(p-1)) exp(-eps p t); power 1, rate eps when p = 1.
RadialWeight MakeDip(double alpha, double p);

}  // namespace hyperfill

#endif  // HYPERFILL_RADIAL_WEIGHT_HPP_
