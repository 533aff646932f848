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

#include "hyperfill/documents.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <memory>
#include <random>
#include <sstream>

#include "hyperfill/error.hpp"

namespace hyperfill {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

[[noreturn]] void ParseFail(const std::string& what) {
  throw Error(ErrorKind::kParseError, what);
}

template <typename F>
auto Guard(const char* what, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Json::exception& e) {
    ParseFail(std::string(what) + ": " + e.what());
  }
}

struct SpecString {
  std::string name;
  std::map<std::string, double> kv;

  double get(const std::string& key, double fallback) const {
    const auto it = kv.find(key);
    return it == kv.end() ? fallback : it->second;
  }
  double need(const std::string& key) const {
    const auto it = kv.find(key);
    if (it == kv.end()) ParseFail(name + " spec needs " + key);
    return it->second;
  }
};

// "name:k=v,k=v" with numeric values.
SpecString SplitSpec(const std::string& spec) {
  SpecString out;
  const auto colon = spec.find(':');
  out.name = spec.substr(0, colon);
  if (colon == std::string::npos) return out;
  std::stringstream rest(spec.substr(colon + 1));
  std::string item;
  while (std::getline(rest, item, ',')) {
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos) ParseFail("expected key=value in '" + item + "'");
    const std::string key = item.substr(0, eq);
    const std::string val = item.substr(eq + 1);
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(val, &used);
    } catch (const std::exception&) {
      ParseFail("bad number '" + val + "' for " + key);
    }
    if (used != val.size()) ParseFail("bad number '" + val + "' for " + key);
    out.kv[key] = v;
  }
  return out;
}

bool LooksLikeFile(const std::string& spec) {
  return spec.find(':') == std::string::npos ||
         spec.find('/') != std::string::npos ||
         spec.find(".json") != std::string::npos;
}

std::string TailName(TailFlag t) {
  switch (t) {
    case TailFlag::kIntegrable:
      return "integrable";
    case TailFlag::kNonintegrable:
      return "nonintegrable";
    case TailFlag::kUnknown:
      return "unknown";
  }
  return "unknown";
}

TailFlag TailFromName(const std::string& s) {
  if (s == "integrable") return TailFlag::kIntegrable;
  if (s == "nonintegrable") return TailFlag::kNonintegrable;
  if (s == "unknown") return TailFlag::kUnknown;
  ParseFail("unknown tail flag '" + s + "'");
}

std::string RpTailName(RpTailFlag t) {
  switch (t) {
    case RpTailFlag::kConvergent:
      return "convergent";
    case RpTailFlag::kDivergent:
      return "divergent";
    case RpTailFlag::kUnknown:
      return "unknown";
    case RpTailFlag::kFromContinuation:
      return "from_continuation";
  }
  return "unknown";
}

RpTailFlag RpTailFromName(const std::string& s) {
  if (s == "convergent") return RpTailFlag::kConvergent;
  if (s == "divergent") return RpTailFlag::kDivergent;
  if (s == "unknown") return RpTailFlag::kUnknown;
  if (s == "from_continuation") return RpTailFlag::kFromContinuation;
  ParseFail("unknown rp_tail flag '" + s + "'");
}

std::string MeasureName(MeasureRegime m) {
  switch (m) {
    case MeasureRegime::kFinite:
      return "finite";
    case MeasureRegime::kInfinite:
      return "infinite";
    case MeasureRegime::kUnknown:
      return "unknown";
  }
  return "unknown";
}

}  // namespace

Json ReadJsonFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) ParseFail("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    ParseFail(path + ": " + e.what());
  }
}

void WriteJsonFile(const std::string& path, const Json& doc) {
  std::ofstream out(path);
  if (!out) {
    throw Error(ErrorKind::kInvalidParameter, "cannot write " + path);
  }
  out << doc.dump(2) << "\n";
}

Json Num(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

// ---- space ----

Json SpaceToJson(const MetricSpaceSample& space) {
  Json doc;
  doc["weights"] = space.weights();
  doc["base_index"] = space.base_index();
  if (space.mode() == MetricMode::kMatrix) {
    doc["metric"] = "matrix";
    doc["matrix"] = space.matrix_rows();
    return doc;
  }
  doc["metric"] = "euclidean";
  Json pts = Json::array();
  for (PointIndex i = 0; i < space.size(); ++i) {
    const auto& c = space.coords(i);
    if (space.dim() == 1) {
      pts.push_back({c[0]});
    } else {
      pts.push_back({c[0], c[1]});
    }
  }
  doc["points"] = std::move(pts);
  return doc;
}

MetricSpaceSample SpaceFromJson(const Json& doc) {
  return Guard("space document", [&] {
    const std::string metric = doc.at("metric").get<std::string>();
    auto weights = doc.at("weights").get<std::vector<double>>();
    const auto base = doc.value("base_index", std::size_t{0});
    if (metric == "euclidean") {
      return MetricSpaceSample::Euclidean(
          doc.at("points").get<std::vector<std::vector<double>>>(),
          std::move(weights), base);
    }
    if (metric == "matrix") {
      return MetricSpaceSample::Matrix(
          doc.at("matrix").get<std::vector<std::vector<double>>>(),
          std::move(weights), base);
    }
    ParseFail("metric must be \"euclidean\" or \"matrix\"");
  });
}

MetricSpaceSample ParseSpaceSpec(const std::string& spec) {
  const SpecString s = SplitSpec(spec);
  if (s.name == "cantor") {
    return GenCantor(static_cast<int>(s.need("depth")), s.get("scale", 0.9));
  }
  if (s.name == "grid") {
    return GenGrid(static_cast<int>(s.get("dim", 1)),
                   static_cast<int>(s.need("res")), s.get("scale", 0.9));
  }
  if (LooksLikeFile(spec)) return SpaceFromJson(ReadJsonFile(spec));
  ParseFail("unknown space spec '" + spec + "'");
}

// ---- filling ----

Json FillingToJson(const Filling& filling) {
  Json doc;
  doc["alpha"] = filling.alpha();
  doc["tau"] = filling.tau();
  doc["levels"] = filling.levels();
  Json verts = Json::array();
  for (const Vertex& v : filling.vertices()) {
    verts.push_back({{"center", v.center},
                     {"level", v.level},
                     {"radius", v.radius},
                     {"mass", v.mass}});
  }
  doc["vertices"] = std::move(verts);
  Json edges = Json::array();
  for (const Edge& e : filling.edges()) {
    edges.push_back({e.a, e.b, e.kind == EdgeKind::kHorizontal ? "H" : "V"});
  }
  doc["edges"] = std::move(edges);
  doc["space"] = SpaceToJson(filling.space());
  return doc;
}

Filling FillingFromJson(const Json& doc) {
  return Guard("filling document", [&] {
    auto space = std::make_shared<const MetricSpaceSample>(
        SpaceFromJson(doc.at("space")));
    std::vector<Vertex> verts;
    for (const Json& v : doc.at("vertices")) {
      verts.push_back({v.at("center").get<PointIndex>(), v.at("level").get<int>(),
                       v.at("radius").get<double>(), v.at("mass").get<double>()});
    }
    std::vector<Edge> edges;
    for (const Json& e : doc.at("edges")) {
      if (!e.is_array() || e.size() != 3) ParseFail("edge must be [a, b, kind]");
      const std::string kind = e[2].get<std::string>();
      if (kind != "H" && kind != "V") ParseFail("edge kind must be H or V");
      edges.push_back({e[0].get<VertexId>(), e[1].get<VertexId>(),
                       kind == "H" ? EdgeKind::kHorizontal : EdgeKind::kVertical});
    }
    return Filling(std::move(space), doc.at("alpha").get<double>(),
                   doc.at("tau").get<double>(), doc.at("levels").get<int>(),
                   std::move(verts), std::move(edges));
  });
}

Json RayToJson(const GeodesicRay& ray) {
  return {{"xi", ray.xi}, {"vertices", ray.vertices}};
}

GeodesicRay RayFromJson(const Json& doc) {
  return Guard("ray document", [&] {
    return GeodesicRay{doc.at("xi").get<PointIndex>(),
                       doc.at("vertices").get<std::vector<VertexId>>()};
  });
}

// ---- rho ----

Json RhoToJson(const RadialWeight& rho) {
  Json doc;
  doc["family"] = rho.family_name();
  Json params = Json::object();
  for (const auto& [k, v] : rho.params()) params[k] = v;
  if (rho.family() == RhoFamily::kPiecewise) {
    Json segs = Json::array();
    for (const auto& s : rho.segments()) {
      segs.push_back({s.from, s.to, s.scale, s.rate});
    }
    params["segments"] = std::move(segs);
  } else if (rho.family() == RhoFamily::kCustom) {
    params["t"] = rho.sample_t();
    params["rho"] = rho.sample_rho();
  }
  doc["params"] = std::move(params);
  doc["tail"] = TailName(rho.tail());
  doc["rp_tail"] = RpTailName(rho.rp_tail());
  return doc;
}

RadialWeight RhoFromJson(const Json& doc) {
  return Guard("rho document", [&] {
    const std::string family = doc.at("family").get<std::string>();
    const Json& params = doc.contains("params") ? doc.at("params") : Json::object();
    std::optional<TailFlag> tail;
    if (doc.contains("tail")) tail = TailFromName(doc.at("tail").get<std::string>());
    const RpTailFlag rp = doc.contains("rp_tail")
                              ? RpTailFromName(doc.at("rp_tail").get<std::string>())
                              : RpTailFlag::kFromContinuation;
    const auto num = [&](const char* key) { return params.at(key).get<double>(); };
    const auto checked = [&](RadialWeight w) {
      if (tail && *tail != TailFlag::kUnknown && *tail != w.tail()) {
        throw Error(ErrorKind::kInvalidParameter,
                    "declared tail contradicts the " + family + " family");
      }
      return w;
    };
    if (family == "bbs") {
      return checked(RadialWeight::Bbs(num("theta"), num("p"), num("alpha")));
    }
    if (family == "gaussian") {
      return checked(RadialWeight::Gaussian(num("p"), num("alpha")));
    }
    if (family == "constant") return checked(RadialWeight::Constant(num("c")));
    if (family == "exp_rate") return checked(RadialWeight::ExpRate(num("lambda")));
    if (family == "dip") {
      return checked(RadialWeight::Dip(num("center"), num("power"), num("rate")));
    }
    if (family == "piecewise") {
      std::vector<PiecewiseSegment> segs;
      for (const Json& s : params.at("segments")) {
        if (!s.is_array() || s.size() != 4) {
          ParseFail("segment must be [from, to, scale, rate]");
        }
        segs.push_back({s[0].get<double>(), s[1].get<double>(), s[2].get<double>(),
                        s[3].get<double>()});
      }
      return RadialWeight::Piecewise(std::move(segs), tail, rp);
    }
    if (family == "custom") {
      return RadialWeight::Custom(params.at("t").get<std::vector<double>>(),
                                  params.at("rho").get<std::vector<double>>(), tail,
                                  rp);
    }
    ParseFail("unknown rho family '" + family + "'");
  });
}

RadialWeight ParseRhoSpec(const std::string& spec, double alpha) {
  const SpecString s = SplitSpec(spec);
  const double a = s.get("alpha", alpha);
  if (s.name == "bbs") return RadialWeight::Bbs(s.need("theta"), s.need("p"), a);
  if (s.name == "gaussian") return RadialWeight::Gaussian(s.need("p"), a);
  if (s.name == "constant") return RadialWeight::Constant(s.get("c", 1.0));
  if (s.name == "exp_rate") return RadialWeight::ExpRate(s.need("lambda"));
  if (s.name == "spike_gap") return MakeSpikeGap(a, s.need("p"), s.get("horizon", 80.0));
  if (s.name == "valley") {
    return MakeValley(a, s.need("p"), static_cast<int>(s.get("cells", 30)));
  }
  if (s.name == "dip") return MakeDip(a, s.need("p"));
  if (LooksLikeFile(spec)) return RhoFromJson(ReadJsonFile(spec));
  ParseFail("unknown rho spec '" + spec + "'");
}

// ---- test functions ----

RadialFunction ProfileFromJson(const Json& doc, double alpha) {
  const auto t = Guard("profile table", [&] { return doc.at("t").get<std::vector<double>>(); });
  const auto u = Guard("profile table", [&] { return doc.at("u").get<std::vector<double>>(); });
  if (t.size() < 2 || t.size() != u.size()) {
    ParseFail("profile table needs matching t and u with >= 2 samples");
  }
  if (t.front() != 0.0) ParseFail("profile table must start at t = 0");
  for (std::size_t i = 1; i < t.size(); ++i) {
    if (!(t[i] > t[i - 1])) ParseFail("profile t must increase strictly");
  }
  const double eps = std::log(alpha);
  RadialFunction f;
  f.tag = "table";
  f.epsilon = eps;
  f.features = t;
  const auto locate = [t](double x) {
    const auto it = std::upper_bound(t.begin(), t.end(), x);
    return static_cast<std::size_t>(it - t.begin()) - 1;
  };
  f.profile = [t, u, locate](double x) {
    if (x <= 0.0) return u.front();
    if (x >= t.back()) return u.back();
    const std::size_t i = locate(x);
    return u[i] + (u[i + 1] - u[i]) * (x - t[i]) / (t[i + 1] - t[i]);
  };
  f.log_density = [t, u, locate, eps](double x) {
    if (x < 0.0 || x >= t.back()) return -kInf;
    const std::size_t i = locate(x);
    const double slope = std::abs(u[i + 1] - u[i]) / (t[i + 1] - t[i]);
    return slope == 0.0 ? -kInf : std::log(slope) + eps * x;
  };
  return f;
}

RadialFunction ParseFunctionSpec(const std::string& spec, const RadialWeight& rho,
                                 double p, double alpha) {
  const SpecString s = SplitSpec(spec);
  BuildOptions opt;
  opt.alpha = alpha;
  opt.horizon = s.get("horizon", opt.horizon);
  if (s.name == "gaussian_tents") return BuildGaussianPair(p, opt).u;
  if (s.name == "divergent") return BuildDivergent(rho, p, opt);
  if (s.name == "level_set_oscillator") return BuildLevelSetOscillator(rho, opt);
  if (s.name == "partition_oscillator") return BuildPartitionOscillator(rho, p, opt);
  if (s.name == "cell_oscillator") return BuildCellOscillator(rho, p, opt);
  if (s.name == "smooth" || s.name == "smooth0") {
    std::mt19937_64 rng(static_cast<std::uint64_t>(s.get("seed", 0)));
    return MakeSmooth(rng, std::log(alpha), s.name == "smooth0");
  }
  if (s.name == "one_minus_exp") {
    const double eps = std::log(alpha);
    RadialFunction f;
    f.tag = "one_minus_exp";
    f.epsilon = eps;
    f.profile = [](double t) { return -std::expm1(-t); };
    f.log_density = [eps](double t) { return (eps - 1.0) * t; };
    return f;
  }
  if (LooksLikeFile(spec)) return ProfileFromJson(ReadJsonFile(spec), alpha);
  ParseFail("unknown function spec '" + spec + "'");
}

// ---- reports ----

Json ToJson(const Quantity& q) {
  return {{"value", Num(q.value)},
          {"infinite", q.infinite},
          {"provenance", ProvenanceName(q.provenance)},
          {"lower_bound", q.lower_bound}};
}

Json ToJson(const RegimeReport& r) {
  Json cells = Json::array();
  for (double v : r.calR.cell_values) cells.push_back(Num(v));
  return {{"p", r.p},
          {"alpha", r.alpha},
          {"rho", r.rho},
          {"mu", MeasureName(r.mu)},
          {"R", ToJson(r.R)},
          {"calR",
           {{"value", ToJson(r.calR.value)},
            {"cell_values", std::move(cells)},
            {"eventually_monotone", r.calR.eventually_monotone},
            {"used_R", r.calR.used_R}}},
          {"traces_exist_N", r.traces_exist_N},
          {"traces_exist_dotN", r.traces_exist_dotN},
          {"traces_vanish", r.traces_vanish}};
}

Json ToJson(const LimitVerdict& v) {
  Json doc{{"status", TraceStatusName(v.status)}, {"depth", v.depth}};
  switch (v.status) {
    case TraceStatus::kConverged:
      doc["value"] = Num(v.value);
      break;
    case TraceStatus::kOscillating:
      doc["liminf"] = Num(v.liminf);
      doc["limsup"] = Num(v.limsup);
      break;
    case TraceStatus::kDiverged:
      doc["direction"] = v.direction > 0 ? "+inf" : "-inf";
      break;
    case TraceStatus::kUndetermined:
      doc["liminf"] = Num(v.liminf);
      doc["limsup"] = Num(v.limsup);
      break;
  }
  return doc;
}

Json ToJson(const TraceVerdict& v) {
  Json rays = Json::array();
  std::map<std::string, int> interleaved;
  for (const RayTrace& r : v.per_ray) {
    if (r.second < 0) {
      Json one = ToJson(r.verdict);
      one["ray"] = r.first;
      rays.push_back(std::move(one));
    } else {
      ++interleaved[TraceStatusName(r.verdict.status)];
    }
  }
  return {{"verdict", ToJson(v.overall)},
          {"ray_independent", v.ray_independent},
          {"rays", std::move(rays)},
          {"interleavings", interleaved}};
}

Json ToJson(const TildeTrace& t) {
  Json seq = Json::array();
  for (double v : t.sequence) seq.push_back(Num(v));
  return {{"verdict", ToJson(t.verdict)}, {"sequence", std::move(seq)}};
}

Json ToJson(const SobolevNorms& n) {
  return {{"Lp_u", Num(n.Lp_u)},
          {"Lp_g", Num(n.Lp_g)},
          {"N_norm", Num(n.N_norm)},
          {"dotN_norm", Num(n.dotN_norm)},
          {"level_u", n.level_u},
          {"level_g", n.level_g}};
}

Json ToJson(const ModulusCertificate& c) {
  Json doc;
  doc["condition1"] = {{"holds", c.condition.holds},
                       {"norm", Num(c.condition.norm)},
                       {"singular_at", c.condition.singular_at
                                           ? Num(*c.condition.singular_at)
                                           : Json(nullptr)}};
  if (c.positive) {
    doc["verdict"] = "positive_bound";
    doc["lower_bound"] = Num(c.lower_bound);
    return doc;
  }
  doc["verdict"] = "zero_witness";
  const ZeroModulusWitness& w = *c.witness;
  Json shells = Json::array();
  for (const WitnessShell& s : w.shells) {
    Json pieces = Json::array();
    for (const auto& [lo, hi] : s.pieces) pieces.push_back({lo, hi});
    shells.push_back({{"level", s.level},
                      {"pieces", std::move(pieces)},
                      {"lambda", Num(s.lambda)},
                      {"line_integral", Num(s.line_integral)},
                      {"energy", Num(s.energy)}});
  }
  doc["witness"] = {{"singular_at", w.singular_at},
                    {"shells", std::move(shells)},
                    {"line_partial", w.line_partial},
                    {"energy_partial", w.energy_partial}};
  return doc;
}

Json ToJson(const HolderCheck& h) {
  return {{"lhs", Num(h.lhs)},
          {"rhs", Num(h.rhs)},
          {"holder_constant", Num(h.holder_constant)},
          {"empirical_constant", Num(h.empirical_constant)},
          {"ratio", Num(h.ratio)},
          {"mass_lower_bound", Num(h.mass_lower_bound)}};
}

Json ToJson(const DegreeStats& d) {
  Json levels = Json::array();
  for (const LevelDegree& l : d.per_level) {
    levels.push_back({{"level", l.level},
                      {"count", l.count},
                      {"min", l.min},
                      {"max", l.max},
                      {"mean", l.mean}});
  }
  return {{"per_level", std::move(levels)},
          {"global_max", d.global_max},
          {"global_min", d.global_min}};
}

Json ErrorToJson(const std::exception& e) {
  if (const auto* err = dynamic_cast<const Error*>(&e)) {
    return {{"error",
             {{"kind", std::string(ErrorKindName(err->kind()))},
              {"message", err->what()}}}};
  }
  return {{"error", {{"kind", "Internal"}, {"message", e.what()}}}};
}

}  // namespace hyperfill
