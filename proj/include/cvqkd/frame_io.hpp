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

#include <string>

#include "cvqkd/simulator.hpp"

namespace cvqkd {

// CSV with header x_a,p_a,x_b,p_b plus a JSON sidecar at `path + ".json"`
// holding the parameters, seed, frame index and SNU flag.
void write_frame(const std::string& path, const QuadratureFrame& frame);

// Validates the version line, column count and finiteness. The sidecar is
// optional; when present its metadata is loaded.
QuadratureFrame read_frame(const std::string& path);

}  // namespace cvqkd
