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

// JSON documents and the short spec strings accepted on the command line.
// Non-finite reals serialise as null.

#ifndef HYPERFILL_DOCUMENTS_HPP_
#define HYPERFILL_DOCUMENTS_HPP_

#include <exception>
#include <string>

#include "json.hpp"

#include "hyperfill/filling.hpp"
#include "hyperfill/geometry.hpp"
#include "hyperfill/modulus.hpp"
#include "hyperfill/radial_weight.hpp"
#include "hyperfill/space.hpp"
#include "hyperfill/trace_lab.hpp"
#include "hyperfill/trace_params.hpp"

namespace hyperfill {

using Json = nlohmann::json;

Json ReadJsonFile(const std::string& path);
void WriteJsonFile(const std::string& path, const Json& doc);

Json SpaceToJson(const MetricSpaceSample& space);
MetricSpaceSample SpaceFromJson(const Json& doc);
// "cantor:depth=8,scale=0.9", "grid:dim=2,res=8,scale=0.9" or a file.
MetricSpaceSample ParseSpaceSpec(const std::string& spec);

// Embeds the space so the document is self-contained.
Json FillingToJson(const Filling& filling);
Filling FillingFromJson(const Json& doc);

Json RayToJson(const GeodesicRay& ray);
GeodesicRay RayFromJson(const Json& doc);

Json RhoToJson(const RadialWeight& rho);
RadialWeight RhoFromJson(const Json& doc);
// "bbs:theta=0.5,p=2", "gaussian:p=2", "constant:c=1", "exp_rate:lambda=1",
// "spike_gap:p=2", "valley:p=2", "dip:p=2" or a file. `alpha` fills in
// when the string does not carry its own.
RadialWeight ParseRhoSpec(const std::string& spec, double alpha);

// Built-in test functions: "gaussian_tents", "divergent",
// "level_set_oscillator", "partition_oscillator", "cell_oscillator",
// "smooth:seed=N", "smooth0:seed=N", "one_minus_exp"; otherwise a file
// {"t": [...], "u": [...]} read as a piecewise-linear profile.
RadialFunction ParseFunctionSpec(const std::string& spec, const RadialWeight& rho,
                                 double p, double alpha);
RadialFunction ProfileFromJson(const Json& doc, double alpha);

Json Num(double v);
Json ToJson(const Quantity& q);
Json ToJson(const RegimeReport& r);
Json ToJson(const LimitVerdict& v);
Json ToJson(const TraceVerdict& v);
Json ToJson(const TildeTrace& t);
Json ToJson(const SobolevNorms& n);
Json ToJson(const ModulusCertificate& c);
Json ToJson(const HolderCheck& h);
Json ToJson(const DegreeStats& d);
Json ErrorToJson(const std::exception& e);

}  // namespace hyperfill

#endif  // HYPERFILL_DOCUMENTS_HPP_
