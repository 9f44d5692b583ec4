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

#include "cvqkd/channel_model.hpp"

namespace cvqkd {

// Keys: eta, eps, theta_deg, phi_deg, eta_d, eta_bs, alpha, v_a, beta.
// Missing keys keep `base` values; unknown keys raise ConfigError.
PhysicalParams params_from_json(const nlohmann::json& j, PhysicalParams base = {});
nlohmann::ordered_json params_to_json(const PhysicalParams& p);

}  // namespace cvqkd
