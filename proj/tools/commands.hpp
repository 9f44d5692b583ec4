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

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace cvqkd::cli {

struct RunOptions {
  std::string command;
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::vector<std::string> frame_files;  // estimate only
};

// Strictly validated config with flag overrides applied.
struct RunConfig {
  nlohmann::json doc;
  std::uint64_t seed = 0;
  std::string out_dir = ".";
};

RunConfig load_config(const RunOptions& opt);

// Each command writes its files into cfg.out_dir and returns the paths.
std::vector<std::string> cmd_keyrate(const RunConfig& cfg);
std::vector<std::string> cmd_tolerance(const RunConfig& cfg);
std::vector<std::string> cmd_finite(const RunConfig& cfg);
std::vector<std::string> cmd_simulate(const RunConfig& cfg);
std::vector<std::string> cmd_estimate(const RunConfig& cfg, const std::vector<std::string>& frames);

// Full front end: parses argv, dispatches, maps errors to exit codes
// (0 ok, 2 config error, 3 numeric failure).
int run_cli(int argc, char** argv);

}  // namespace cvqkd::cli
