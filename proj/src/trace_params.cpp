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

#include "hyperfill/trace_params.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "hyperfill/error.hpp"
#include "hyperfill/quadrature.hpp"
#include "hyperfill/singularity.hpp"

namespace hyperfill {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void CheckP(double p) {
  if (!(p >= 1.0) || !std::isfinite(p)) {
    throw Error(ErrorKind::kInvalidParameter, "p must be >= 1");
  }
}

Quantity Infinite(Provenance why) {
  Quantity q;
  q.value = kInf;
  q.infinite = true;
  q.provenance = why;
  return q;
}

// What is known about R restricted to [from, inf) without quadrature.
struct TailVerdict {
  bool divergent = false;
  Provenance provenance = Provenance::kNone;
  bool known = true;      // false: only a lower bound is available
  double log_value = -kInf;  // p > 1: log of int_T^inf w; p = 1: log sup
  double from = 0.0;      // where the closed form starts
};

TailVerdict AnalyseTail(const RadialWeight& rho, double p, double eps,
                        double t_max) {
  TailVerdict v;
  const Asymptotics a = rho.asymptotics();
  const double start = std::max(t_max, a.from);
  v.from = start;
  switch (rho.rp_tail()) {
    case RpTailFlag::kDivergent:
      v.divergent = true;
      v.provenance = Provenance::kDeclared;
      return v;
    case RpTailFlag::kUnknown:
      v.known = false;
      return v;
    default:
      break;
  }
  const double lw = LogRpIntegrand(rho, p, eps, start);
  if (p == 1.0) {
    // g = exp(-eps t) / rho, sup over [start, inf).
    double slope = 0.0;
    switch (a.kind) {
      case Asymptotics::Kind::kGaussian:
        v.divergent = true;
        break;
      default:
        slope = a.rate - eps;
        v.divergent = slope > 0.0;
        break;
    }
    if (v.divergent) {
      v.provenance = Provenance::kAnalytic;
    } else {
      v.log_value = lw;  // non-increasing from here on
    }
    return v;
  }
  const double q = p - 1.0;
  switch (a.kind) {
    case Asymptotics::Kind::kGaussian:
      v.divergent = true;
      break;
    case Asymptotics::Kind::kScaledExp: {
      const double kappa = (a.rate - eps * p) / q;
      if (kappa >= 0.0) {
        v.divergent = true;
      } else {
        v.log_value = lw - std::log(-kappa);
      }
      break;
    }
    case Asymptotics::Kind::kDip: {
      const double slope = (a.rate - eps * p) / q;
      const double s = a.power / q;
      if (slope > 1e-12) {
        v.divergent = true;
      } else if (std::abs(slope) <= 1e-12) {
        if (s > 1.0) {
          // int_T^inf (t - c)^-s, up to the constant factor in lw
          v.log_value = lw + std::log(start - a.center) - std::log(s - 1.0);
        } else {
          v.divergent = true;
        }
      } else {
        const double span = 60.0 / -slope;
        const auto r = quad::IntegrateExp(
            [&](double t) { return LogRpIntegrand(rho, p, eps, t); }, start,
            start + span, 1e-12);
        v.log_value = r.log_value;
      }
      break;
    }
  }
  if (v.divergent) v.provenance = Provenance::kAnalytic;
  // A table declared convergent whose continuation diverges: lower bound.
  if (rho.rp_tail() == RpTailFlag::kConvergent && v.divergent) {
    v = TailVerdict{};
    v.from = start;
    v.known = false;
  }
  return v;
}

std::vector<double> Cells(double a, double b) {
  std::vector<double> edges{a};
  for (double k = std::floor(a) + 1.0; k < b; k += 1.0) edges.push_back(k);
  edges.push_back(b);
  return edges;
}

}  // namespace

std::string ProvenanceName(Provenance p) {
  switch (p) {
    case Provenance::kNone: return "finite";
    case Provenance::kAnalytic: return "analytic";
    case Provenance::kDeclared: return "declared";
    case Provenance::kNumericGuard: return "numeric_guard";
  }
  return "unknown";
}

double LogRpIntegrand(const RadialWeight& rho, double p, double epsilon,
                      double t) {
  if (p == 1.0) return -epsilon * t - rho.log_value(t);
  return (-epsilon * p * t - rho.log_value(t)) / (p - 1.0);
}

double LocalNorm::value() const { return finite ? std::exp(log_value) : kInf; }

LocalNorm LocalRpNorm(const RadialWeight& rho, double p, double epsilon,
                      double a, double b) {
  CheckP(p);
  LocalNorm out;
  const auto log_f = [&](double t) { return LogRpIntegrand(rho, p, epsilon, t); };
  const BlowupReport blow = DetectBlowup(log_f, a, b);
  const double threshold = p == 1.0 ? kBoundedExponent : kIntegrableExponent;
  if (blow.spike || blow.exponent >= threshold) {
    out.finite = false;
    out.singular_at = blow.location;
    out.log_value = kInf;
    return out;
  }
  if (p == 1.0) {
    out.log_value = blow.log_max;
    return out;
  }
  auto cuts = rho.Breakpoints(a, b);
  for (double k = std::floor(a) + 1.0; k < b; k += 1.0) cuts.push_back(k);
  const auto r = quad::IntegrateExpSplit(log_f, a, b, cuts, 1e-12);
  out.log_value = r.log_value;
  if (!std::isfinite(r.log_value) && r.log_value > 0.0) {
    out.finite = false;
    out.singular_at = r.failed_at;
  }
  return out;
}

FpCertificate FpMembership(const RadialWeight& rho, double p, double alpha,
                           double horizon) {
  CheckP(p);
  if (!(horizon > 0.0)) {
    throw Error(ErrorKind::kInvalidParameter, "horizon must be positive");
  }
  const double eps = std::log(alpha);
  FpCertificate cert;
  const auto edges = Cells(0.0, horizon);
  for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
    const LocalNorm n = LocalRpNorm(rho, p, eps, edges[k], edges[k + 1]);
    cert.log_local_norms.push_back(n.log_value);
    if (!n.finite && cert.member) {
      cert.member = false;
      cert.singular_at = n.singular_at;
      std::ostringstream msg;
      msg << (p == 1.0 ? "exp(-eps t)/rho unbounded" : "local Rp integral diverges")
          << " on [" << edges[k] << ", " << edges[k + 1] << "]";
      cert.reason = msg.str();
    }
  }
  return cert;
}

Quantity ParamR(const RadialWeight& rho, double p, const ParamOptions& opt) {
  CheckP(p);
  if (!(opt.alpha > 1.0)) throw Error(ErrorKind::kInvalidParameter, "alpha must be > 1");
  if (!(opt.t_max > 0.0)) throw Error(ErrorKind::kInvalidParameter, "t_max must be > 0");
  const double eps = std::log(opt.alpha);
  const TailVerdict tail = AnalyseTail(rho, p, eps, opt.t_max);
  if (tail.divergent) return Infinite(tail.provenance);

  double log_total = -kInf;
  const auto edges = Cells(0.0, tail.from);
  for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
    const LocalNorm n = LocalRpNorm(rho, p, eps, edges[k], edges[k + 1]);
    if (!n.finite) return Infinite(Provenance::kNumericGuard);
    log_total = p == 1.0 ? std::max(log_total, n.log_value)
                         : quad::LogAddExp(log_total, n.log_value);
    if (log_total > std::log(kDivergenceGuard)) {
      return Infinite(Provenance::kNumericGuard);
    }
  }
  Quantity q;
  if (tail.known) {
    log_total = p == 1.0 ? std::max(log_total, tail.log_value)
                         : quad::LogAddExp(log_total, tail.log_value);
  } else {
    q.lower_bound = true;
  }
  q.value = std::exp(log_total);
  if (q.value > kDivergenceGuard) return Infinite(Provenance::kNumericGuard);
  return q;
}

UnitMassPartition PartitionUnitMass(const RadialWeight& rho, int max_cells,
                                    double t_max, double tol) {
  if (max_cells < 1) throw Error(ErrorKind::kInvalidParameter, "max_cells must be >= 1");
  if (!(t_max > 0.0)) throw Error(ErrorKind::kInvalidParameter, "t_max must be > 0");
  if (!(tol > 0.0)) throw Error(ErrorKind::kInvalidParameter, "tol must be > 0");
  UnitMassPartition part;
  double t = 0.0;
  part.breakpoints.push_back(t);
  while (static_cast<int>(part.cells()) < max_cells) {
    const double remaining = rho.Integral(t, t_max);
    if (remaining < 1.0) break;
    // Bracket: grow the step until the cell mass reaches 1.
    double lo = t;
    double hi = std::min(t + 1.0, t_max);
    for (double step = 1.0; rho.Integral(t, hi) < 1.0; step *= 2.0) {
      lo = hi;
      hi = std::min(t + 2.0 * step, t_max);
    }
    const double start = t;
    const double slack = tol * 1e-3;
    double next = quad::Bisect(
        [&](double x) {
          const double d = rho.Integral(start, x) - 1.0;
          return std::abs(d) <= slack ? 0.0 : d;
        },
        lo, hi);
    if (!(next > t)) {
      throw Error(ErrorKind::kQuadratureFailure, "partition made no progress");
    }
    part.masses.push_back(rho.Integral(t, next));
    part.breakpoints.push_back(next);
    t = next;
  }
  if (part.cells() == 0) {
    std::ostringstream msg;
    msg << "int rho over [0, " << t_max << "] is below 1";
    throw Error(ErrorKind::kInsufficientMass, msg.str());
  }
  part.partial_from = t;
  part.partial_mass = t < t_max ? rho.Integral(t, t_max) : 0.0;
  return part;
}

CalRResult ParamCalR(const RadialWeight& rho, double p, const ParamOptions& opt) {
  CheckP(p);
  CalRResult out;
  if (p == 1.0 || rho.tail() == TailFlag::kIntegrable) {
    out.value = ParamR(rho, p, opt);
    out.used_R = true;
    return out;
  }
  const double eps = std::log(opt.alpha);
  const UnitMassPartition part = PartitionUnitMass(rho, opt.max_cells, opt.t_max, opt.tol);
  double sup = 0.0;
  bool blown = false;
  for (std::size_t k = 0; k < part.cells(); ++k) {
    const LocalNorm n =
        LocalRpNorm(rho, p, eps, part.breakpoints[k], part.breakpoints[k + 1]);
    const double v = n.value();
    out.cell_values.push_back(v);
    if (!n.finite || v > kDivergenceGuard) blown = true;
    sup = std::max(sup, v);
  }
  // Monotone over the last half of the cells, with a relative slack.
  const std::size_t n = out.cell_values.size();
  bool up = true;
  bool down = true;
  for (std::size_t k = n / 2 + 1; k < n; ++k) {
    const double prev = out.cell_values[k - 1];
    const double cur = out.cell_values[k];
    const double slack = 1e-9 * std::max(std::abs(prev), std::abs(cur));
    if (cur < prev - slack) up = false;
    if (cur > prev + slack) down = false;
  }
  out.eventually_monotone = up || down;
  if (blown) {
    out.value = Infinite(Provenance::kNumericGuard);
    return out;
  }
  out.value.value = sup;
  out.value.lower_bound =
      !out.eventually_monotone || rho.tail() == TailFlag::kUnknown;
  return out;
}

RegimeReport ClassifyRegime(const RadialWeight& rho, double p,
                            const ParamOptions& opt) {
  CheckP(p);
  const FpCertificate fp = FpMembership(rho, p, opt.alpha, opt.t_max);
  if (!fp.member) {
    throw Error(ErrorKind::kHypothesisViolation, "rho is not in F_p: " + fp.reason);
  }
  RegimeReport r;
  r.p = p;
  r.alpha = opt.alpha;
  r.rho = rho.Describe();
  switch (rho.tail()) {
    case TailFlag::kIntegrable: r.mu = MeasureRegime::kFinite; break;
    case TailFlag::kNonintegrable: r.mu = MeasureRegime::kInfinite; break;
    case TailFlag::kUnknown: r.mu = MeasureRegime::kUnknown; break;
  }
  r.R = ParamR(rho, p, opt);
  r.calR = ParamCalR(rho, p, opt);
  if (r.mu == MeasureRegime::kFinite && !r.calR.used_R) {
    throw Error(ErrorKind::kInvariantViolation, "finite measure must use calR = R");
  }
  if (!r.R.infinite && r.calR.value.infinite) {
    throw Error(ErrorKind::kInvariantViolation, "R finite but calR infinite");
  }
  r.traces_exist_N = !r.calR.value.infinite;
  r.traces_exist_dotN = !r.R.infinite;
  r.traces_vanish = r.mu == MeasureRegime::kInfinite && r.traces_exist_N;
  return r;
}

}  // namespace hyperfill
