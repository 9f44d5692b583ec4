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

#include "cvqkd/csv.hpp"

#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>

#include "cvqkd/errors.hpp"

namespace cvqkd {

std::string fmt_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void write_csv_header(std::ostream& os, const std::vector<std::string>& columns) {
  os << kCsvVersionLine << '\n';
  for (std::size_t i = 0; i < columns.size(); ++i) os << (i ? "," : "") << columns[i];
  os << '\n';
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

void read_csv_header(std::istream& is, const std::vector<std::string>& expected) {
  std::string line;
  if (!std::getline(is, line)) throw ConfigError("empty CSV file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kCsvVersionLine)
    throw ConfigError("unsupported CSV version line: '" + line + "'");
  if (!std::getline(is, line)) throw ConfigError("CSV header row missing");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (split_csv_line(line) != expected) throw ConfigError("unexpected CSV header: '" + line + "'");
}

}  // namespace cvqkd
