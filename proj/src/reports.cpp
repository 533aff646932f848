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

#include "hyperfill/reports.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <memory>
#include <random>
#include <sstream>

#include "hyperfill/error.hpp"
#include "hyperfill/filling.hpp"
#include "hyperfill/modulus.hpp"
#include "hyperfill/trace_lab.hpp"

namespace hyperfill {
namespace {

struct Candidate {
  std::string name;
  std::string expected;
  RadialFunction u;
};

FunctionOutcome Evaluate(const Candidate& c, const Filling& filling,
                         const RadialWeight& rho, double p,
                         const TraceOptions& topt, double zero_tol) {
  FunctionOutcome out;
  out.name = c.name;
  out.expected = c.expected;
  const auto x = FromRadial(c.u);
  const auto traces = TraceAllPoints(*x, filling, topt);
  out.points = static_cast<int>(traces.size());
  out.min_band = std::numeric_limits<double>::infinity();
  bool tilde_ok = true;
  for (const PointTraces& pt : traces) {
    const LimitVerdict& t = pt.T.overall;
    out.ray_independent = out.ray_independent && pt.T.ray_independent;
    switch (t.status) {
      case TraceStatus::kConverged:
        ++out.converged;
        out.max_abs_value = std::max(out.max_abs_value, std::abs(t.value));
        if (pt.tilde.verdict.status == TraceStatus::kConverged) {
          out.max_gap = std::max(out.max_gap,
                                 std::abs(t.value - pt.tilde.verdict.value));
        } else {
          tilde_ok = false;
        }
        break;
      case TraceStatus::kOscillating:
        ++out.oscillating;
        out.min_band = std::min(out.min_band, t.limsup - t.liminf);
        break;
      case TraceStatus::kDiverged:
        ++out.diverged;
        break;
      case TraceStatus::kUndetermined:
        ++out.undetermined;
        break;
    }
    if (c.expected == "oscillating_tilde_zero") {
      const LimitVerdict& v = pt.tilde.verdict;
      tilde_ok = tilde_ok && v.status == TraceStatus::kConverged &&
                 std::abs(v.value) <= zero_tol;
    }
  }
  if (out.oscillating == 0) out.min_band = 0.0;
  out.N_norm = ComputeSobolevNorms(filling, rho, c.u, p, filling.levels()).N_norm;

  const int n = out.points;
  if (c.expected == "converged" || c.expected == "converged_zero") {
    out.agree = out.converged == n && out.ray_independent && tilde_ok &&
                out.max_gap <= zero_tol && std::isfinite(out.N_norm);
    if (c.expected == "converged_zero") {
      out.agree = out.agree && out.max_abs_value <= zero_tol;
    }
  } else if (c.expected == "oscillating" || c.expected == "oscillating_tilde_zero") {
    out.agree = out.oscillating == n && tilde_ok;
  } else if (c.expected == "diverged") {
    out.agree = out.diverged == n;
  }
  return out;
}

std::string Summary(const FunctionOutcome& f) {
  std::ostringstream s;
  s << f.name << ": ";
  if (f.expected.rfind("converged", 0) == 0) {
    s << f.converged << "/" << f.points << " converged";
  } else if (f.expected.rfind("oscillating", 0) == 0) {
    s << f.oscillating << "/" << f.points << " oscillating";
  } else {
    s << f.diverged << "/" << f.points << " diverged";
  }
  return s.str();
}

void RunTraces(VerificationRow& row, const RadialWeight& rho,
               const RegimeReport& regime, std::uint64_t seed,
               const VerifyOptions& opt) {
  const Scenario& sc = row.scenario;
  auto space = std::make_shared<const MetricSpaceSample>(ParseSpaceSpec(sc.space));
  const Filling filling = BuildFilling(space, sc.alpha, sc.tau, sc.levels);
  const double eps = std::log(sc.alpha);

  const bool calR_finite = !regime.calR.value.infinite;
  const bool R_finite = !regime.R.infinite;
  const bool vanish = regime.traces_vanish;
  if (calR_finite) {
    row.predicted = vanish ? "traces exist and vanish" : "traces exist";
  } else {
    row.predicted = "trace may fail";
  }
  if (!R_finite) row.predicted += "; homogeneous traces may fail";

  std::vector<Candidate> cands;
  for (int k = 0; k < opt.smooth_per_row; ++k) {
    std::mt19937_64 rng(seed + static_cast<std::uint64_t>(k));
    const bool zero = regime.mu == MeasureRegime::kInfinite;
    cands.push_back({"smooth" + std::to_string(k), zero ? "converged_zero" : "converged",
                     MakeSmooth(rng, eps, zero)});
  }
  BuildOptions bopt;
  bopt.alpha = sc.alpha;
  if (rho.family() == RhoFamily::kGaussian) {
    cands.push_back({"gaussian_tents", "oscillating_tilde_zero",
                     BuildGaussianPair(sc.p, bopt).u});
  }
  if (!R_finite) {
    cands.push_back({"divergent", "diverged", BuildDivergent(rho, sc.p, bopt)});
    if (sc.p == 1.0) {
      cands.push_back({"level_set_oscillator", "oscillating",
                       BuildLevelSetOscillator(rho, bopt)});
    } else if (regime.mu == MeasureRegime::kFinite) {
      cands.push_back({"partition_oscillator", "oscillating",
                       BuildPartitionOscillator(rho, sc.p, bopt)});
    }
  }
  if (!calR_finite && sc.p > 1.0 && regime.mu == MeasureRegime::kInfinite) {
    cands.push_back({"cell_oscillator", "oscillating",
                     BuildCellOscillator(rho, sc.p, bopt)});
  }

  TraceOptions topt;
  topt.tol = opt.tol;
  bool agree = true;
  std::string observed;
  for (const Candidate& c : cands) {
    row.functions.push_back(Evaluate(c, filling, rho, sc.p, topt, opt.zero_tol));
    agree = agree && row.functions.back().agree;
    if (!observed.empty()) observed += "; ";
    observed += Summary(row.functions.back());
  }
  if (sc.expect_calR_finite && *sc.expect_calR_finite != calR_finite) {
    agree = false;
    observed += "; regime differs from the declared expectation";
  }
  row.observed = observed;
  row.agree = agree;
}

void RunModulus(VerificationRow& row, const RadialWeight& rho) {
  const Scenario& sc = row.scenario;
  const int depth = 8;
  const ModulusCertificate cert =
      ProbeModulus(rho, sc.p, sc.alpha, sc.a, sc.b, depth);
  row.modulus = ToJson(cert);
  row.predicted = cert.condition.holds ? "positive modulus" : "zero modulus";
  bool ok = false;
  std::ostringstream obs;
  if (cert.positive) {
    ok = cert.lower_bound > 0.0 && std::isfinite(cert.lower_bound);
    obs << "lower bound " << cert.lower_bound;
  } else {
    const ZeroModulusWitness& w = *cert.witness;
    const double line = w.line_partial.empty() ? 0.0 : w.line_partial.back();
    const double energy = w.energy_partial.empty() ? 0.0 : w.energy_partial.back();
    const double shells = static_cast<double>(w.shells.size());
    ok = static_cast<int>(w.shells.size()) >= depth &&
         line >= shells * (1.0 - 1e-9) && energy < 1.0;
    obs << w.shells.size() << " shells, line " << line << ", energy " << energy;
  }
  ok = ok && cert.positive == cert.condition.holds;
  if (sc.expect_modulus_positive && *sc.expect_modulus_positive != cert.positive) {
    ok = false;
    obs << "; differs from the declared expectation";
  }
  row.observed = obs.str();
  row.agree = ok;
}

VerificationRow RunRow(const Scenario& sc, std::uint64_t seed,
                       const VerifyOptions& opt) {
  VerificationRow row;
  row.scenario = sc;
  try {
    if (!(sc.alpha > 1.0) || !(sc.tau > 1.0)) {
      throw Error(ErrorKind::kInvalidParameter, "alpha and tau must exceed 1");
    }
    const RadialWeight rho = ParseRhoSpec(sc.rho, sc.alpha);
    row.rho_label = rho.Describe();
    if (sc.check == ScenarioCheck::kModulus) {
      RunModulus(row, rho);
      return row;
    }
    ParamOptions popt;
    popt.alpha = sc.alpha;
    popt.t_max = opt.tmax;
    const RegimeReport regime = ClassifyRegime(rho, sc.p, popt);
    if (regime.mu != MeasureRegime::kUnknown) {
      row.mu_finite = regime.mu == MeasureRegime::kFinite;
    }
    row.R = regime.R;
    row.calR = regime.calR.value;
    RunTraces(row, rho, regime, seed, opt);
  } catch (const std::exception& e) {
    row.error = ErrorToJson(e)["error"].dump();
    row.agree = false;
  }
  return row;
}

ScenarioCheck CheckFromName(const std::string& s) {
  if (s == "traces") return ScenarioCheck::kTraces;
  if (s == "modulus") return ScenarioCheck::kModulus;
  throw Error(ErrorKind::kParseError, "check must be traces or modulus");
}

}  // namespace

bool VerificationMatrix::all_agree() const {
  return !rows.empty() && std::all_of(rows.begin(), rows.end(),
                                      [](const VerificationRow& r) { return r.agree; });
}

std::vector<Scenario> DefaultScenarios() {
  std::vector<Scenario> out;
  const auto traces = [&](std::string name, std::string rho, double p,
                          bool calR_finite) {
    Scenario s;
    s.name = std::move(name);
    s.rho = std::move(rho);
    s.p = p;
    s.expect_calR_finite = calR_finite;
    out.push_back(s);
  };
  traces("bbs_theta_0.25", "bbs:theta=0.25,p=2", 2.0, true);
  traces("bbs_theta_0.5", "bbs:theta=0.5,p=2", 2.0, true);
  traces("constant_one", "constant:c=1", 2.0, true);
  traces("gaussian_p2", "gaussian:p=2", 2.0, false);
  traces("gaussian_p1", "gaussian:p=1", 1.0, false);
  traces("spike_gap", "spike_gap:p=2", 2.0, true);
  traces("valley", "valley:p=2", 2.0, false);
  // rho = exp(-2 eps t) with eps = log 2.
  std::ostringstream lambda;
  lambda.precision(17);
  lambda << 2.0 * std::log(2.0);
  traces("exp_rate_p1", "exp_rate:lambda=" + lambda.str(), 1.0, false);
  const auto modulus = [&](std::string name, std::string rho, bool positive) {
    Scenario s;
    s.name = std::move(name);
    s.rho = std::move(rho);
    s.p = 2.0;
    s.check = ScenarioCheck::kModulus;
    s.a = 0.0;
    s.b = 2.0;
    s.expect_modulus_positive = positive;
    out.push_back(s);
  };
  modulus("dip_modulus", "dip:p=2", false);
  modulus("bbs_modulus", "bbs:theta=0.5,p=2", true);
  return out;
}

std::vector<Scenario> ScenariosFromJson(const Json& doc) {
  if (!doc.is_array()) throw Error(ErrorKind::kParseError, "scenarios must be a list");
  std::vector<Scenario> out;
  try {
    for (const Json& j : doc) {
      Scenario s;
      s.name = j.at("name").get<std::string>();
      s.rho = j.at("rho").get<std::string>();
      s.p = j.value("p", s.p);
      s.alpha = j.value("alpha", s.alpha);
      s.tau = j.value("tau", s.tau);
      s.space = j.value("space", s.space);
      s.levels = j.value("levels", s.levels);
      if (j.contains("check")) s.check = CheckFromName(j.at("check").get<std::string>());
      if (j.contains("interval")) {
        const auto iv = j.at("interval").get<std::vector<double>>();
        if (iv.size() != 2) throw Error(ErrorKind::kParseError, "interval is [a, b]");
        s.a = iv[0];
        s.b = iv[1];
      }
      if (j.contains("expect_calR_finite")) {
        s.expect_calR_finite = j.at("expect_calR_finite").get<bool>();
      }
      if (j.contains("expect_modulus_positive")) {
        s.expect_modulus_positive = j.at("expect_modulus_positive").get<bool>();
      }
      out.push_back(std::move(s));
    }
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::kParseError, std::string("scenario: ") + e.what());
  }
  return out;
}

VerificationMatrix RunVerification(const std::vector<Scenario>& scenarios,
                                   const VerifyOptions& opt) {
  std::vector<std::future<VerificationRow>> jobs;
  for (std::size_t i = 0; i < scenarios.size(); ++i) {
    const std::uint64_t seed = opt.seed * 1000003u + 1000u * i;
    jobs.push_back(std::async(std::launch::async, RunRow, std::cref(scenarios[i]),
                              seed, std::cref(opt)));
  }
  VerificationMatrix m;
  for (auto& j : jobs) m.rows.push_back(j.get());
  return m;
}

Json ToJson(const VerificationRow& row) {
  const Scenario& sc = row.scenario;
  Json doc{{"scenario", sc.name},
           {"rho", row.rho_label.empty() ? sc.rho : row.rho_label},
           {"p", sc.p},
           {"alpha", sc.alpha},
           {"tau", sc.tau},
           {"space", sc.space},
           {"check", sc.check == ScenarioCheck::kTraces ? "traces" : "modulus"},
           {"predicted", row.predicted},
           {"observed", row.observed},
           {"agree", row.agree}};
  if (sc.check == ScenarioCheck::kTraces) {
    doc["mu_finite"] = row.mu_finite ? Json(*row.mu_finite) : Json(nullptr);
    doc["R"] = ToJson(row.R);
    doc["calR"] = ToJson(row.calR);
    Json fns = Json::array();
    for (const FunctionOutcome& f : row.functions) {
      fns.push_back({{"name", f.name},
                     {"expected", f.expected},
                     {"points", f.points},
                     {"converged", f.converged},
                     {"oscillating", f.oscillating},
                     {"diverged", f.diverged},
                     {"undetermined", f.undetermined},
                     {"ray_independent", f.ray_independent},
                     {"max_abs_value", Num(f.max_abs_value)},
                     {"max_gap", Num(f.max_gap)},
                     {"min_band", Num(f.min_band)},
                     {"N_norm", Num(f.N_norm)},
                     {"agree", f.agree}});
    }
    doc["functions"] = std::move(fns);
  } else {
    doc["interval"] = {sc.a, sc.b};
    doc["certificate"] = row.modulus;
  }
  if (!row.error.empty()) doc["error"] = Json::parse(row.error);
  return doc;
}

Json ToJson(const VerificationMatrix& m) {
  Json rows = Json::array();
  for (const VerificationRow& r : m.rows) rows.push_back(ToJson(r));
  return {{"rows", std::move(rows)}, {"all_agree", m.all_agree()}};
}

}  // namespace hyperfill
