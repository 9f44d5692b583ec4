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

#include <iosfwd>
#include <string>
#include <vector>

namespace cvqkd {

inline constexpr const char* kCsvVersionLine = "# cvqkd-csv v1";

// Shortest round-trip decimal form of a double.
std::string fmt_double(double v);

// Writes the version comment line and the header row.
void write_csv_header(std::ostream& os, const std::vector<std::string>& columns);

// Reads the version line and header. Throws ConfigError on a missing or
// mismatched version, or a header different from `expected`.
void read_csv_header(std::istream& is, const std::vector<std::string>& expected);

std::vector<std::string> split_csv_line(const std::string& line);

}  // namespace cvqkd
