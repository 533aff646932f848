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

// hyperfill: build | params | trace | modulus | verify.
// JSON documents go to stdout (or --out), summaries to stderr.

#include <cstdint>
#include <cstdio>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "hyperfill/documents.hpp"
#include "hyperfill/error.hpp"
#include "hyperfill/filling.hpp"
#include "hyperfill/modulus.hpp"
#include "hyperfill/reports.hpp"
#include "hyperfill/trace_lab.hpp"
#include "hyperfill/trace_params.hpp"

namespace hf = hyperfill;

namespace {

struct Globals {
  double alpha = 2.0;
  double tau = 1.5;
  double p = 2.0;
  double tmax = 80.0;
  double tol = 1e-4;
  std::uint64_t seed = 7;
  std::string out;
};

void Emit(const Globals& g, const hf::Json& doc) {
  if (g.out.empty()) {
    std::cout << doc.dump(2) << "\n";
  } else {
    hf::WriteJsonFile(g.out, doc);
  }
}

void RequireGreaterThanOne(double v, const char* name) {
  if (!(v > 1.0)) {
    throw hf::Error(hf::ErrorKind::kInvalidParameter,
                    std::string(name) + " must be > 1");
  }
}

std::pair<double, double> ParseInterval(const std::string& s) {
  const auto comma = s.find(',');
  if (comma == std::string::npos) {
    throw hf::Error(hf::ErrorKind::kParseError, "interval must be a,b");
  }
  try {
    return {std::stod(s.substr(0, comma)), std::stod(s.substr(comma + 1))};
  } catch (const std::exception&) {
    throw hf::Error(hf::ErrorKind::kParseError, "interval must be a,b");
  }
}

int RunBuild(const Globals& g, const std::string& space_spec, int levels) {
  RequireGreaterThanOne(g.alpha, "alpha");
  RequireGreaterThanOne(g.tau, "tau");
  if (levels < 1) throw hf::Error(hf::ErrorKind::kInvalidParameter, "levels must be >= 1");
  auto space = std::make_shared<const hf::MetricSpaceSample>(hf::ParseSpaceSpec(space_spec));
  const hf::Filling f = hf::BuildFilling(space, g.alpha, g.tau, levels);
  const hf::DegreeStats stats = hf::ComputeDegreeStats(f);
  Emit(g, hf::FillingToJson(f));
  std::cerr << "vertices " << f.num_vertices() << ", edges " << f.num_edges()
            << ", degree " << stats.global_min << ".." << stats.global_max << "\n";
  for (const hf::LevelDegree& l : stats.per_level) {
    std::cerr << "  level " << l.level << ": " << l.count << " vertices, degree "
              << l.min << ".." << l.max << " (mean " << l.mean << ")\n";
  }
  return 0;
}

int RunParams(const Globals& g, const std::string& rho_spec, int cells) {
  RequireGreaterThanOne(g.alpha, "alpha");
  const hf::RadialWeight rho = hf::ParseRhoSpec(rho_spec, g.alpha);
  hf::ParamOptions opt;
  opt.alpha = g.alpha;
  opt.t_max = g.tmax;
  opt.max_cells = cells;
  const hf::RegimeReport r = hf::ClassifyRegime(rho, g.p, opt);
  Emit(g, hf::ToJson(r));
  std::cerr << r.rho << " p=" << g.p << ": R "
            << (r.R.infinite ? "inf" : std::to_string(r.R.value)) << ", calR "
            << (r.calR.value.infinite ? "inf" : std::to_string(r.calR.value.value))
            << "\n";
  return 0;
}

int RunTrace(const Globals& g, const std::string& filling_path,
             const std::string& rho_spec, const std::string& u_spec,
             const std::string& xi_arg, int depth) {
  const hf::Filling f = hf::FillingFromJson(hf::ReadJsonFile(filling_path));
  const hf::RadialWeight rho = hf::ParseRhoSpec(rho_spec, f.alpha());
  const hf::RadialFunction u = hf::ParseFunctionSpec(u_spec, rho, g.p, f.alpha());
  const auto x = hf::FromRadial(u);
  hf::TraceOptions opt;
  opt.tol = g.tol;
  opt.depth = depth;

  std::vector<hf::PointTraces> traces;
  if (xi_arg == "all") {
    traces = hf::TraceAllPoints(*x, f, opt);
  } else {
    hf::PointIndex xi = 0;
    try {
      xi = static_cast<hf::PointIndex>(std::stoull(xi_arg));
    } catch (const std::exception&) {
      throw hf::Error(hf::ErrorKind::kParseError, "xi must be an index or 'all'");
    }
    if (xi >= f.space().size()) {
      throw hf::Error(hf::ErrorKind::kUnknownBoundaryPoint,
                      "no boundary point " + xi_arg);
    }
    hf::PointTraces pt;
    pt.xi = xi;
    pt.T = hf::TraceT(*x, f, xi, opt);
    pt.tilde = hf::TraceTilde(*x, f, xi, depth, opt);
    traces.push_back(std::move(pt));
  }
  hf::Json points = hf::Json::array();
  int converged = 0;
  for (const hf::PointTraces& pt : traces) {
    points.push_back({{"xi", pt.xi},
                      {"T_verdict", hf::ToJson(pt.T)},
                      {"tilde_verdict", hf::ToJson(pt.tilde)}});
    if (pt.T.overall.status == hf::TraceStatus::kConverged) ++converged;
  }
  Emit(g, {{"function", u.tag}, {"p", g.p}, {"points", std::move(points)}});
  std::cerr << u.tag << ": T converged at " << converged << "/" << traces.size()
            << " points\n";
  return 0;
}

int RunModulus(const Globals& g, const std::string& rho_spec,
               const std::string& interval, int depth) {
  RequireGreaterThanOne(g.alpha, "alpha");
  const auto [a, b] = ParseInterval(interval);
  const hf::RadialWeight rho = hf::ParseRhoSpec(rho_spec, g.alpha);
  const hf::ModulusCertificate c = hf::ProbeModulus(rho, g.p, g.alpha, a, b, depth);
  Emit(g, hf::ToJson(c));
  if (c.positive) {
    std::cerr << "modulus >= " << c.lower_bound << "\n";
  } else {
    std::cerr << "modulus 0: " << c.witness->shells.size() << " shells, energy "
              << c.witness->energy_partial.back() << "\n";
  }
  return 0;
}

int RunVerify(const Globals& g, const std::string& scenarios_path) {
  const std::vector<hf::Scenario> scenarios =
      scenarios_path.empty() ? hf::DefaultScenarios()
                             : hf::ScenariosFromJson(hf::ReadJsonFile(scenarios_path));
  hf::VerifyOptions opt;
  opt.seed = g.seed;
  opt.tmax = g.tmax;
  opt.tol = g.tol;
  const hf::VerificationMatrix m = hf::RunVerification(scenarios, opt);
  Emit(g, hf::ToJson(m));
  for (const hf::VerificationRow& r : m.rows) {
    std::cerr << (r.agree ? "agree    " : "DISAGREE ") << r.scenario.name << ": "
              << r.predicted << " | "
              << (r.error.empty() ? r.observed : r.error) << "\n";
  }
  return m.all_agree() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hyperbolic fillings, trace parameters and boundary traces"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--alpha", g.alpha, "filling parameter alpha > 1");
  app.add_option("--tau", g.tau, "edge parameter tau > 1");
  app.add_option("--p", g.p, "Sobolev exponent p >= 1");
  app.add_option("--tmax", g.tmax, "height horizon for parameters");
  app.add_option("--tol", g.tol, "trace convergence tolerance");
  app.add_option("--seed", g.seed, "seed for random test functions");
  app.add_option("--out", g.out, "write the document here instead of stdout");

  std::string space_spec;
  int levels = 8;
  auto* build = app.add_subcommand("build", "build a filling document");
  build->add_option("--space", space_spec, "cantor:..., grid:... or a space file")
      ->required();
  build->add_option("--levels", levels, "number of levels");

  std::string rho_spec;
  int cells = 200;
  auto* params = app.add_subcommand("params", "classify the trace regime of rho");
  params->add_option("--rho", rho_spec, "weight spec or file")->required();
  params->add_option("--cells", cells, "unit-mass cells to examine");

  std::string filling_path, u_spec, xi_arg = "all";
  int depth = -1;
  auto* trace = app.add_subcommand("trace", "traces of a radial function");
  trace->add_option("--filling", filling_path, "filling document")->required();
  trace->add_option("--rho", rho_spec, "weight spec or file");
  trace->add_option("--u", u_spec, "builtin function or profile table")->required();
  trace->add_option("--xi", xi_arg, "boundary point index or 'all'");
  trace->add_option("--depth", depth, "levels to use (-1: all)");

  std::string interval;
  int mod_depth = 8;
  auto* modulus = app.add_subcommand("modulus", "modulus of a vertical segment");
  modulus->add_option("--rho", rho_spec, "weight spec or file")->required();
  modulus->add_option("--interval", interval, "a,b")->required();
  modulus->add_option("--depth", mod_depth, "witness shells");

  std::string scenarios_path;
  auto* verify = app.add_subcommand("verify", "run the regime verification matrix");
  verify->add_option("--scenarios", scenarios_path, "scenario list (JSON)");

  // Global flags may follow the subcommand too.
  for (CLI::App* sub : {build, params, trace, modulus, verify}) {
    sub->fallthrough();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (build->parsed()) return RunBuild(g, space_spec, levels);
    if (params->parsed()) return RunParams(g, rho_spec, cells);
    if (trace->parsed()) {
      return RunTrace(g, filling_path, rho_spec.empty() ? "constant:c=1" : rho_spec,
                      u_spec, xi_arg, depth);
    }
    if (modulus->parsed()) return RunModulus(g, rho_spec, interval, mod_depth);
    if (verify->parsed()) return RunVerify(g, scenarios_path);
  } catch (const std::exception& e) {
    std::cout << hf::ErrorToJson(e).dump(2) << "\n";
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
