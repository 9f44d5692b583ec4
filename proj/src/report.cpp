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

#include "cvqkd/report.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "cvqkd/csv.hpp"

namespace cvqkd {

namespace {

constexpr double kDeg = 180.0 / std::numbers::pi;

}  // namespace

nlohmann::ordered_json EstimationReport::to_json() const {
  nlohmann::ordered_json j;
  auto put = [&](const char* k, double v) {
    if (std::isfinite(v))
      j[k] = v;
    else
      j[k] = nullptr;
  };
  put("m", m);
  put("theta_hat_deg", theta_hat * kDeg);
  put("phi_hat_deg", phi_hat * kDeg);
  put("delta_hat_deg", delta_hat * kDeg);
  put("crosscheck_delta_deg", crosscheck_delta * kDeg);
  put("eta_bs_hat", eta_bs_hat);
  put("alpha_hat", alpha_hat);
  put("alpha_rel_diff", alpha_rel_diff);
  put("eta_hat", eta_hat);
  put("eps_hat", eps_hat);
  put("eps_hat_crosscorr", eps_hat_crosscorr);
  put("var_theta", var_theta);
  put("var_phi", var_phi);
  put("var_eta", var_eta);
  put("var_eps", var_eps);
  put("var_crosscheck", var_crosscheck);
  put("var_delta_hat", var_delta_hat);
  return j;
}

std::string EstimationReport::to_text() const {
  std::ostringstream os;
  const auto j = to_json();
  for (const auto& [k, v] : j.items())
    os << k << '=' << (v.is_null() ? std::string("nan") : fmt_double(v.get<double>())) << '\n';
  return os.str();
}

}  // namespace cvqkd
