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

#include "hyperfill/modulus.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "hyperfill/error.hpp"
#include "hyperfill/geometry.hpp"
#include "hyperfill/quadrature.hpp"
#include "hyperfill/trace_params.hpp"

namespace hyperfill {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double Epsilon(double alpha) {
  if (!(alpha > 1.0)) throw Error(ErrorKind::kInvalidParameter, "alpha must be > 1");
  return std::log(alpha);
}

void CheckInterval(double p, double a, double b) {
  if (!(p >= 1.0) || !std::isfinite(p)) {
    throw Error(ErrorKind::kInvalidParameter, "p must be >= 1");
  }
  if (!(a >= 0.0 && a < b && std::isfinite(b))) {
    throw Error(ErrorKind::kInvalidParameter, "need 0 <= a < b < inf");
  }
}

// Log of int exp(log_f) over [lo, hi], -inf on an empty piece.
// Extra cuts at s +- 2^j r_in keep the panels near s graded.
double LogPiece(const std::function<double(double)>& log_f,
                const RadialWeight& rho, double lo, double hi,
                std::optional<double> s = std::nullopt) {
  if (!(hi > lo)) return -kInf;
  std::vector<double> cuts = rho.Breakpoints(lo, hi);
  if (s) {
    const double near = std::max(std::abs(lo - *s), std::abs(hi - *s));
    for (double r = std::min(std::abs(lo - *s), std::abs(hi - *s)) * 2.0;
         r > 0.0 && r < near; r *= 2.0) {
      cuts.push_back(*s + (lo < *s ? -r : r));
    }
    std::sort(cuts.begin(), cuts.end());
  }
  const auto r = quad::IntegrateExpSplit(log_f, lo, hi, cuts, 1e-12);
  if (!r.converged) {
    throw Error(ErrorKind::kQuadratureFailure,
                "shell integral did not converge near t=" +
                    std::to_string(r.failed_at));
  }
  return r.log_value;
}

// Left and right parts of {r_in <= |t - s| < r_out} inside [a, b].
std::vector<std::pair<double, double>> Annulus(double s, double r_in,
                                               double r_out, double a, double b) {
  std::vector<std::pair<double, double>> out;
  const double l0 = std::max(a, s - r_out);
  const double l1 = std::max(a, s - r_in);
  if (l1 > l0) out.emplace_back(l0, l1);
  const double h0 = std::min(b, s + r_in);
  const double h1 = std::min(b, s + r_out);
  if (h1 > h0) out.emplace_back(h0, h1);
  return out;
}

// Fills line_integral and energy of a shell from phi, independently of the
// normalisation used to build it.
void MeasureShell(WitnessShell& shell, const RadialWeight& rho, double p,
                  double eps, double s,
                  const std::function<double(double)>& log_phi) {
  shell.line_integral = 0.0;
  double log_energy = -kInf;
  for (const auto& [lo, hi] : shell.pieces) {
    shell.line_integral += std::exp(LogPiece(
        [&](double t) { return log_phi(t) - eps * t; }, rho, lo, hi, s));
    log_energy = quad::LogAddExp(
        log_energy,
        LogPiece([&](double t) { return p * log_phi(t) + rho.log_value(t); }, rho,
                 lo, hi, s));
  }
  shell.energy = std::exp(log_energy);
}

double ResolutionLimit(double s) {
  return 64.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(s));
}

ZeroModulusWitness ShellsP(const RadialWeight& rho, double p, double eps,
                           double a, double b, double s, int depth) {
  const auto log_w = [&](double t) { return LogRpIntegrand(rho, p, eps, t); };
  const auto log_shell = [&](double r_in, double r_out) {
    double v = -kInf;
    for (const auto& [lo, hi] : Annulus(s, r_in, r_out, a, b)) {
      v = quad::LogAddExp(v, LogPiece(log_w, rho, lo, hi, s));
    }
    return v;
  };
  ZeroModulusWitness out;
  out.singular_at = s;
  double r_out = std::max(s - a, b - s);
  const double r_min = ResolutionLimit(s);
  for (int k = 1; k <= depth; ++k) {
    const double target = std::log(1.5) + k * std::numbers::ln2;
    double lo = r_out / 2.0;
    while (log_shell(lo, r_out) < target) {
      lo /= 2.0;
      if (lo < r_min) {
        throw Error(ErrorKind::kShellExhaustion,
                    "only " + std::to_string(k - 1) +
                        " shells resolvable around t=" + std::to_string(s));
      }
    }
    const double lr = quad::Bisect(
        [&](double u) { return target - log_shell(std::exp(u), r_out); },
        std::log(lo), std::log(std::min(r_out, 2.0 * lo)));
    const double r_in = std::exp(lr);
    WitnessShell shell;
    shell.level = k;
    shell.pieces = Annulus(s, r_in, r_out, a, b);
    const double log_lambda = log_shell(r_in, r_out);
    shell.lambda = std::exp(log_lambda);
    MeasureShell(shell, rho, p, eps, s, [&](double t) {
      return log_w(t) + eps * t - log_lambda;
    });
    out.shells.push_back(std::move(shell));
    r_out = r_in;
  }
  return out;
}

ZeroModulusWitness LevelSets1(const RadialWeight& rho, double eps, double a,
                              double b, double s, int depth) {
  const auto log_g = [&](double t) { return LogRpIntegrand(rho, 1.0, eps, t); };
  const double r_min = ResolutionLimit(s);
  // Radius on one side where g first reaches 2^k, walking in from the end.
  const auto radius = [&](int side, int k) -> std::optional<double> {
    const double reach = side < 0 ? s - a : b - s;
    if (!(reach > r_min)) return std::nullopt;
    const double level = k * std::numbers::ln2;
    const auto f = [&](double u) { return log_g(s + side * std::exp(u)) - level; };
    if (f(std::log(reach)) >= 0.0) return reach;
    if (f(std::log(r_min)) < 0.0) {
      throw Error(ErrorKind::kShellExhaustion,
                  "level 2^" + std::to_string(k) + " not resolvable near t=" +
                      std::to_string(s));
    }
    return std::exp(quad::Bisect(f, std::log(r_min), std::log(reach)));
  };
  const int k0 = static_cast<int>(
                     std::floor(std::max(log_g(a), log_g(b)) / std::numbers::ln2)) +
                 1;
  ZeroModulusWitness out;
  out.singular_at = s;
  for (int n = 0; n < depth; ++n) {
    const int k = k0 + n;
    WitnessShell shell;
    shell.level = k;
    for (int side : {-1, 1}) {
      const auto outer = radius(side, k);
      if (!outer) continue;
      const double inner = *radius(side, k + 1);
      if (!(*outer > inner)) continue;
      if (side < 0) {
        shell.pieces.emplace_back(s - *outer, s - inner);
      } else {
        shell.pieces.emplace_back(s + inner, s + *outer);
      }
    }
    std::sort(shell.pieces.begin(), shell.pieces.end());
    for (const auto& [lo, hi] : shell.pieces) {
      shell.lambda += (std::exp(-eps * lo) - std::exp(-eps * hi)) / eps;
    }
    if (!(shell.lambda > 0.0)) {
      throw Error(ErrorKind::kShellExhaustion,
                  "empty level set after " + std::to_string(n) + " shells");
    }
    const double log_lambda = std::log(shell.lambda);
    MeasureShell(shell, rho, 1.0, eps, s,
                 [&](double) { return -log_lambda; });
    out.shells.push_back(std::move(shell));
  }
  return out;
}

}  // namespace

Condition1 CheckCondition1(const RadialWeight& rho, double p, double alpha,
                           double a, double b) {
  CheckInterval(p, a, b);
  const LocalNorm n = LocalRpNorm(rho, p, Epsilon(alpha), a, b);
  Condition1 out;
  out.holds = n.finite;
  out.log_norm = n.log_value;
  out.norm = n.value();
  out.singular_at = n.singular_at;
  return out;
}

ZeroModulusWitness WitnessZeroModulus(const RadialWeight& rho, double p,
                                      double alpha, double a, double b,
                                      int depth) {
  if (depth < 1) throw Error(ErrorKind::kInvalidParameter, "depth must be >= 1");
  const double eps = Epsilon(alpha);
  const Condition1 c = CheckCondition1(rho, p, alpha, a, b);
  if (c.holds || !c.singular_at) {
    throw Error(ErrorKind::kPreconditionFailure,
                "local integrability holds on the interval; modulus is positive");
  }
  const double s = *c.singular_at;
  ZeroModulusWitness out = p == 1.0 ? LevelSets1(rho, eps, a, b, s, depth)
                                    : ShellsP(rho, p, eps, a, b, s, depth);
  double line = 0.0;
  double energy = 0.0;
  for (const WitnessShell& sh : out.shells) {
    line += sh.line_integral;
    energy += sh.energy;
    out.line_partial.push_back(line);
    out.energy_partial.push_back(energy);
  }
  struct Piece {
    double lo, hi, log_lambda;
  };
  std::vector<Piece> pieces;
  for (const WitnessShell& sh : out.shells) {
    for (const auto& [lo, hi] : sh.pieces) {
      pieces.push_back({lo, hi, std::log(sh.lambda)});
    }
  }
  out.phi = [rho, p, eps, pieces](double t) {
    for (const Piece& pc : pieces) {
      if (t >= pc.lo && t < pc.hi) {
        const double base = p == 1.0 ? -eps * t : LogRpIntegrand(rho, p, eps, t);
        return std::exp(base + eps * t - pc.log_lambda);
      }
    }
    return 0.0;
  };
  return out;
}

ModulusCertificate ProbeModulus(const RadialWeight& rho, double p, double alpha,
                                double a, double b, int depth) {
  ModulusCertificate out;
  out.condition = CheckCondition1(rho, p, alpha, a, b);
  if (out.condition.holds) {
    out.positive = true;
    // Hoelder along the segment: 1 <= int phi ds <= |phi|_p |w|_{p'}.
    out.lower_bound = p == 1.0 ? std::exp(-out.condition.log_norm)
                               : std::exp((1.0 - p) * out.condition.log_norm);
    return out;
  }
  out.positive = false;
  out.witness = WitnessZeroModulus(rho, p, alpha, a, b, depth);
  return out;
}

HolderCheck HolderBoundCheck(
    const Filling& filling, const RadialWeight& rho, double p,
    const std::vector<EdgeId>& curve,
    const std::function<double(std::size_t, double)>& phi, int max_level) {
  if (!(p >= 1.0)) throw Error(ErrorKind::kInvalidParameter, "p must be >= 1");
  if (curve.empty()) throw Error(ErrorKind::kInvalidParameter, "empty curve");
  const int top = max_level < 0 ? filling.levels() : max_level;
  const double eps = filling.epsilon();
  const double q = p > 1.0 ? p / (p - 1.0) : kInf;
  const double cuts[] = {0.5};
  quad::Options opt;
  opt.abs_tol = 1e-13;
  opt.rel_tol = 1e-11;

  HolderCheck out;
  double energy = 0.0;
  double dual = 0.0;
  double sup = 0.0;
  double min_mass = kInf;
  for (std::size_t i = 0; i < curve.size(); ++i) {
    const Edge& e = filling.edge(curve[i]);
    const Vertex& va = filling.vertex(e.a);
    const Vertex& vb = filling.vertex(e.b);
    if (std::max(va.level, vb.level) > top) {
      throw Error(ErrorKind::kInvalidParameter, "curve edge above level N");
    }
    min_mass = std::min({min_mass, va.mass, vb.mass});
    const double m = va.mass + vb.mass;
    const auto h = [&](double t) { return GraphHeight(filling, {curve[i], t}); };
    const auto value = [&](double t) {
      const double v = phi(i, t);
      if (v < 0.0) throw Error(ErrorKind::kInvalidParameter, "phi must be >= 0");
      return v;
    };
    const auto integrate = [&](const quad::Integrand& f) {
      const auto r = quad::AdaptiveSimpsonSplit(f, 0.0, 1.0, cuts, opt);
      if (!r.converged) {
        throw Error(ErrorKind::kQuadratureFailure, "curve integral did not converge");
      }
      return r.value;
    };
    out.lhs += integrate([&](double t) { return value(t) * std::exp(-eps * h(t)); });
    energy += integrate([&](double t) {
      return std::pow(value(t), p) * rho.value(h(t)) * m;
    });
    if (p > 1.0) {
      dual += integrate([&](double t) {
        const double hh = h(t);
        return std::exp(-eps * q * hh + (1.0 - q) * (rho.log_value(hh) + std::log(m)));
      });
    } else {
      for (int k = 0; k <= 1024; ++k) {
        const double hh = h(k / 1024.0);
        sup = std::max(sup, std::exp(-eps * hh - rho.log_value(hh)) / m);
      }
    }
  }
  out.rhs = std::pow(energy, 1.0 / p);
  out.holder_constant = p > 1.0 ? std::pow(dual, 1.0 / q) : sup;
  out.empirical_constant = out.rhs > 0.0 ? out.lhs / out.rhs : 0.0;
  out.ratio = out.rhs > 0.0 ? out.lhs / (out.holder_constant * out.rhs) : 0.0;
  out.mass_lower_bound = min_mass / filling.space().total_mass();
  return out;
}

}  // namespace hyperfill
