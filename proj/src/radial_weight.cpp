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

#include "hyperfill/radial_weight.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "hyperfill/error.hpp"
#include "hyperfill/quadrature.hpp"

namespace hyperfill {
namespace {

[[noreturn]] void Bad(const std::string& what) {
  throw Error(ErrorKind::kInvalidParameter, what);
}

// int_a^b scale * exp(-rate t) dt
double ExpIntegral(double scale, double rate, double a, double b) {
  if (rate == 0.0) return scale * (b - a);
  return scale * std::exp(-rate * a) * -std::expm1(-rate * (b - a)) / rate;
}

const double kLogFloor = std::log(kRhoFloor);

}  // namespace

RadialWeight RadialWeight::Bbs(double theta, double p, double alpha) {
  if (!(theta > 0.0 && theta < 1.0)) Bad("bbs theta must lie in (0, 1)");
  if (!(p >= 1.0)) Bad("bbs p must be >= 1");
  if (!(alpha > 1.0)) Bad("alpha must be > 1");
  RadialWeight w;
  w.family_ = RhoFamily::kBbs;
  w.params_ = {{"theta", theta}, {"p", p}, {"alpha", alpha}};
  w.rate_ = std::log(alpha) * p * (1.0 - theta);
  w.FinishTail(std::nullopt);
  return w;
}

RadialWeight RadialWeight::Gaussian(double p, double alpha) {
  if (!(p >= 1.0)) Bad("gaussian p must be >= 1");
  if (!(alpha > 1.0)) Bad("alpha must be > 1");
  RadialWeight w;
  w.family_ = RhoFamily::kGaussian;
  w.params_ = {{"p", p}, {"alpha", alpha}};
  w.rate_ = std::log(alpha) * p;
  w.FinishTail(std::nullopt);
  return w;
}

RadialWeight RadialWeight::Constant(double c) {
  if (!(c > 0.0) || !std::isfinite(c)) Bad("constant rho must be positive");
  RadialWeight w;
  w.family_ = RhoFamily::kConstant;
  w.params_ = {{"c", c}};
  w.scale_ = c;
  w.FinishTail(std::nullopt);
  return w;
}

RadialWeight RadialWeight::ExpRate(double lambda) {
  if (!std::isfinite(lambda)) Bad("exp_rate lambda must be finite");
  RadialWeight w;
  w.family_ = RhoFamily::kExpRate;
  w.params_ = {{"lambda", lambda}};
  w.rate_ = lambda;
  w.FinishTail(std::nullopt);
  return w;
}

RadialWeight RadialWeight::Piecewise(std::vector<PiecewiseSegment> segments,
                                     std::optional<TailFlag> declared_tail,
                                     RpTailFlag rp_tail) {
  if (segments.empty()) Bad("piecewise table is empty");
  if (segments.front().from != 0.0) Bad("piecewise table must start at 0");
  for (std::size_t i = 0; i < segments.size(); ++i) {
    const auto& s = segments[i];
    if (!(s.to > s.from)) Bad("piecewise segment with to <= from");
    if (!(s.scale > 0.0) || !std::isfinite(s.scale) || !std::isfinite(s.rate)) {
      Bad("piecewise segment scale must be positive");
    }
    if (i > 0 && segments[i - 1].to != s.from) Bad("piecewise segments not contiguous");
  }
  RadialWeight w;
  w.family_ = RhoFamily::kPiecewise;
  w.segments_ = std::move(segments);
  w.scale_ = w.segments_.back().scale;
  w.rate_ = w.segments_.back().rate;
  w.rp_tail_ = rp_tail;
  w.FinishTail(declared_tail);
  return w;
}

RadialWeight RadialWeight::Custom(std::vector<double> t, std::vector<double> rho,
                                  std::optional<TailFlag> declared_tail,
                                  RpTailFlag rp_tail) {
  if (t.empty() || t.size() != rho.size()) Bad("custom samples malformed");
  if (t.front() != 0.0) Bad("custom samples must start at t = 0");
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!(rho[i] > 0.0) || !std::isfinite(rho[i])) Bad("custom rho must be positive");
    if (i > 0 && !(t[i] > t[i - 1])) Bad("custom t must increase strictly");
  }
  RadialWeight w;
  w.family_ = RhoFamily::kCustom;
  w.sample_t_ = std::move(t);
  w.sample_rho_ = std::move(rho);
  w.scale_ = w.sample_rho_.back();
  w.rp_tail_ = rp_tail;
  w.FinishTail(declared_tail);
  return w;
}

RadialWeight RadialWeight::Dip(double center, double power, double rate) {
  if (!(center >= 0.0) || !(power >= 0.0) || !std::isfinite(rate)) {
    Bad("dip needs center >= 0, power >= 0");
  }
  RadialWeight w;
  w.family_ = RhoFamily::kDip;
  w.params_ = {{"center", center}, {"power", power}, {"rate", rate}};
  w.center_ = center;
  w.power_ = power;
  w.rate_ = rate;
  w.FinishTail(std::nullopt);
  return w;
}

void RadialWeight::FinishTail(std::optional<TailFlag> declared) {
  const Asymptotics a = asymptotics();
  TailFlag analytic = TailFlag::kNonintegrable;
  if (a.kind == Asymptotics::Kind::kGaussian || a.rate > 0.0) {
    analytic = TailFlag::kIntegrable;
  }
  const bool table =
      family_ == RhoFamily::kPiecewise || family_ == RhoFamily::kCustom;
  if (declared && table) {
    tail_ = *declared;
    tail_declared_ = true;
    return;
  }
  if (declared && *declared != TailFlag::kUnknown && *declared != analytic) {
    Bad("declared tail contradicts the family");
  }
  tail_ = analytic;
}

std::string RadialWeight::family_name() const {
  switch (family_) {
    case RhoFamily::kBbs: return "bbs";
    case RhoFamily::kGaussian: return "gaussian";
    case RhoFamily::kConstant: return "constant";
    case RhoFamily::kExpRate: return "exp_rate";
    case RhoFamily::kPiecewise: return "piecewise";
    case RhoFamily::kCustom: return "custom";
    case RhoFamily::kDip: return "dip";
  }
  return "unknown";
}

Asymptotics RadialWeight::asymptotics() const {
  Asymptotics a;
  switch (family_) {
    case RhoFamily::kGaussian:
      a.kind = Asymptotics::Kind::kGaussian;
      a.rate = rate_;
      break;
    case RhoFamily::kDip:
      a.kind = Asymptotics::Kind::kDip;
      a.from = center_;
      a.center = center_;
      a.power = power_;
      a.rate = rate_;
      break;
    case RhoFamily::kPiecewise:
      a.from = segments_.back().from;
      a.scale = scale_;
      a.rate = rate_;
      break;
    case RhoFamily::kCustom:
      a.from = sample_t_.back();
      a.scale = scale_;
      a.rate = 0.0;
      break;
    default:
      a.scale = scale_;
      a.rate = rate_;
      break;
  }
  return a;
}

double RadialWeight::log_value(double t) const {
  switch (family_) {
    case RhoFamily::kGaussian:
      return -t * t - rate_ * t;
    case RhoFamily::kDip: {
      if (power_ == 0.0) return -rate_ * t;
      const double gap = std::abs(t - center_);
      if (gap == 0.0) return kLogFloor;
      return std::max(power_ * std::log(gap) - rate_ * t, kLogFloor);
    }
    case RhoFamily::kPiecewise: {
      auto it = std::upper_bound(
          segments_.begin(), segments_.end(), t,
          [](double x, const PiecewiseSegment& s) { return x < s.to; });
      if (it == segments_.end()) --it;
      return std::log(it->scale) - it->rate * t;
    }
    case RhoFamily::kCustom:
      return std::log(value(t));
    default:
      return std::log(scale_) - rate_ * t;
  }
}

double RadialWeight::value(double t) const {
  if (family_ == RhoFamily::kCustom) {
    if (t <= 0.0) return sample_rho_.front();
    if (t >= sample_t_.back()) return sample_rho_.back();
    const auto it = std::upper_bound(sample_t_.begin(), sample_t_.end(), t);
    const std::size_t j = static_cast<std::size_t>(it - sample_t_.begin());
    const double t0 = sample_t_[j - 1];
    const double t1 = sample_t_[j];
    const double s = (t - t0) / (t1 - t0);
    return (1.0 - s) * sample_rho_[j - 1] + s * sample_rho_[j];
  }
  return std::exp(log_value(t));
}

double RadialWeight::Integral(double a, double b) const {
  if (!(b > a)) return 0.0;
  switch (family_) {
    case RhoFamily::kBbs:
    case RhoFamily::kConstant:
    case RhoFamily::kExpRate:
      return ExpIntegral(scale_, rate_, a, b);
    case RhoFamily::kPiecewise: {
      double total = 0.0;
      for (std::size_t i = 0; i < segments_.size(); ++i) {
        const auto& s = segments_[i];
        const double lo = std::max(a, i == 0 ? a : s.from);
        const double hi =
            std::min(b, i + 1 == segments_.size() ? b : s.to);
        if (hi > lo) total += ExpIntegral(s.scale, s.rate, lo, hi);
      }
      return total;
    }
    case RhoFamily::kCustom: {
      std::vector<double> nodes{a};
      for (double x : sample_t_) {
        if (x > a && x < b) nodes.push_back(x);
      }
      nodes.push_back(b);
      double total = 0.0;
      for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
        total += 0.5 * (nodes[i + 1] - nodes[i]) *
                 (value(nodes[i]) + value(nodes[i + 1]));
      }
      return total;
    }
    case RhoFamily::kGaussian: {
      // e^{beta^2/4} int exp(-(t + beta/2)^2)
      const double h = 0.5 * rate_;
      if (b - a >= 0.05 && a + h < 20.0) {
        return std::exp(h * h) * 0.5 * std::sqrt(std::numbers::pi) *
               (std::erfc(a + h) - std::erfc(b + h));
      }
      break;
    }
    case RhoFamily::kDip:
      break;
  }
  const auto cuts = Breakpoints(a, b);
  return quad::IntegrateExpSplit([this](double t) { return log_value(t); }, a,
                                 b, cuts, 1e-13)
      .value();
}

std::vector<double> RadialWeight::Breakpoints(double a, double b) const {
  std::vector<double> out;
  const auto keep = [&](double x) {
    if (x > a && x < b) out.push_back(x);
  };
  switch (family_) {
    case RhoFamily::kPiecewise:
      for (const auto& s : segments_) keep(s.from);
      break;
    case RhoFamily::kCustom:
      for (double x : sample_t_) keep(x);
      break;
    case RhoFamily::kDip:
      keep(center_);
      break;
    default:
      break;
  }
  return out;
}

std::string RadialWeight::Describe() const {
  std::ostringstream out;
  out << family_name();
  if (!params_.empty()) {
    out << "(";
    bool first = true;
    for (const auto& [k, v] : params_) {
      if (!first) out << ",";
      out << k << "=" << v;
      first = false;
    }
    out << ")";
  } else if (family_ == RhoFamily::kPiecewise) {
    out << "[" << segments_.size() << " segments]";
  } else if (family_ == RhoFamily::kCustom) {
    out << "[" << sample_t_.size() << " samples]";
  }
  return out.str();
}

RadialWeight MakeSpikeGap(double alpha, double p, double horizon) {
  if (!(alpha > 1.0)) Bad("alpha must be > 1");
  const double eps = std::log(alpha);
  std::vector<PiecewiseSegment> segs;
  double s = 0.0;
  for (int j = 1; s < horizon; ++j) {
    segs.push_back({s, s + 1.0, 1.0, eps * p});
    s += 1.0;
    // Capped so the spike stays resolvable next to s.
    const double order = std::min(j, 20);
    const double width = std::exp(-order);
    segs.push_back({s, s + width, std::exp(order), 0.0});
    s += width;
  }
  return RadialWeight::Piecewise(std::move(segs), TailFlag::kNonintegrable,
                                 RpTailFlag::kDivergent);
}

RadialWeight MakeValley(double alpha, double p, int cells) {
  if (!(alpha > 1.0)) Bad("alpha must be > 1");
  if (!(p > 1.0)) Bad("valley fixture needs p > 1");
  if (cells < 1) Bad("valley fixture needs cells >= 1");
  const double kappa = std::log(alpha) * p + 2.0 * (p - 1.0);
  std::vector<PiecewiseSegment> segs;
  for (int j = 1; j <= cells; ++j) {
    const double d = std::exp(-kappa * j);
    segs.push_back({j - 1.0, j - 0.5, 1.0, 0.0});
    segs.push_back({j - 0.5, j - 0.25, d, 0.0});
    segs.push_back({j - 0.25, static_cast<double>(j), 2.0 - d, 0.0});
  }
  return RadialWeight::Piecewise(std::move(segs), TailFlag::kNonintegrable,
                                 RpTailFlag::kDivergent);
}

RadialWeight MakeDip(double alpha, double p) {
  if (!(alpha > 1.0)) Bad("alpha must be > 1");
  if (!(p >= 1.0)) Bad("p must be >= 1");
  const double eps = std::log(alpha);
  if (p == 1.0) return RadialWeight::Dip(1.0, 1.0, eps);
  return RadialWeight::Dip(1.0, 2.0 * (p - 1.0), eps * p);
}

}  // namespace hyperfill
