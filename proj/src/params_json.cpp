// Copyright 2026 The cvqkd Authors
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

#include "cvqkd/params_json.hpp"

#include <numbers>
#include <set>
#include <string>

#include "cvqkd/errors.hpp"

namespace cvqkd {

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

double num(const nlohmann::json& j, const std::string& key) {
  if (!j.at(key).is_number()) throw ConfigError("key '" + key + "' must be a number");
  return j.at(key).get<double>();
}

}  // namespace

PhysicalParams params_from_json(const nlohmann::json& j, PhysicalParams p) {
  if (!j.is_object()) throw ConfigError("params must be a JSON object");
  static const std::set<std::string> known = {"eta",   "eps",    "theta_deg", "phi_deg", "eta_d",
                                              "eta_bs", "alpha", "v_a",       "beta"};
  for (const auto& [k, v] : j.items())
    if (!known.count(k)) throw ConfigError("unknown params key '" + k + "'");
  if (j.contains("eta")) p.eta = num(j, "eta");
  if (j.contains("eps")) p.eps = num(j, "eps");
  if (j.contains("theta_deg")) p.theta = num(j, "theta_deg") * kDeg;
  if (j.contains("phi_deg")) p.phi = num(j, "phi_deg") * kDeg;
  if (j.contains("eta_d")) p.eta_d = num(j, "eta_d");
  if (j.contains("eta_bs")) p.eta_bs = num(j, "eta_bs");
  if (j.contains("alpha")) p.alpha = num(j, "alpha");
  if (j.contains("v_a")) p.v_a = num(j, "v_a");
  if (j.contains("beta")) p.beta = num(j, "beta");
  return p;
}

nlohmann::ordered_json params_to_json(const PhysicalParams& p) {
  nlohmann::ordered_json j;
  j["eta"] = p.eta;
  j["eps"] = p.eps;
  j["theta_deg"] = p.theta / kDeg;
  j["phi_deg"] = p.phi / kDeg;
  j["eta_d"] = p.eta_d;
  j["eta_bs"] = p.eta_bs;
  j["alpha"] = p.alpha;
  j["v_a"] = p.v_a;
  j["beta"] = p.beta;
  return j;
}

}  // namespace cvqkd
