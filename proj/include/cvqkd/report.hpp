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

#pragma once

#include <json.hpp>
#include <string>

namespace cvqkd {

// Point estimates and their variances. Angles in radians.
struct EstimationReport {
  double m = 0;  // samples behind the estimates and variances

  double theta_hat = 0;
  double phi_hat = 0;
  double delta_hat = 0;
  double crosscheck_delta = 0;  // Bob-Bob route
  double eta_bs_hat = 0.5;
  double alpha_hat = 1;
  double alpha_rel_diff = 0;
  double eta_hat = 1;
  double eps_hat = 0;            // conditional route
  double eps_hat_crosscorr = 0;  // NaN when the imbalance is too small

  double var_theta = 0;
  double var_phi = 0;
  double var_eta = 0;
  double var_eps = 0;
  double var_crosscheck = 0;  // delta-method, empirical reports only
  double var_delta_hat = 0;   // delta-method, empirical reports only

  nlohmann::ordered_json to_json() const;
  // Flat "key=value" lines, angles in degrees with a _deg suffix.
  std::string to_text() const;
};

}  // namespace cvqkd
