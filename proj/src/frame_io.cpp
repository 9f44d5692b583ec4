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

#include "cvqkd/frame_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <json.hpp>

#include "cvqkd/csv.hpp"
#include "cvqkd/errors.hpp"
#include "cvqkd/params_json.hpp"

namespace cvqkd {

void write_frame(const std::string& path, const QuadratureFrame& frame) {
  frame.validate();
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ConfigError("cannot open " + path + " for writing");
  write_csv_header(os, {"x_a", "p_a", "x_b", "p_b"});
  std::string row;
  for (std::size_t i = 0; i < frame.m(); ++i) {
    row.clear();
    row += fmt_double(frame.x_a[i]);
    row += ',';
    row += fmt_double(frame.p_a[i]);
    row += ',';
    row += fmt_double(frame.x_b[i]);
    row += ',';
    row += fmt_double(frame.p_b[i]);
    row += '\n';
    os << row;
  }
  nlohmann::ordered_json meta;
  meta["params"] = params_to_json(frame.params);
  meta["seed"] = frame.seed;
  meta["frame_idx"] = frame.frame_idx;
  meta["snu"] = frame.snu;
  meta["transformed"] = frame.transformed;
  meta["m"] = frame.m();
  std::ofstream ms(path + ".json", std::ios::binary);
  if (!ms) throw ConfigError("cannot open sidecar for " + path);
  ms << meta.dump(2) << '\n';
}

namespace {

double parse_cell(const std::string& s, std::size_t line) {
  double v = 0;
  const char* b = s.data();
  const char* e = s.data() + s.size();
  auto res = std::from_chars(b, e, v);
  if (res.ec != std::errc() || res.ptr != e || !std::isfinite(v))
    throw ConfigError("bad value '" + s + "' on line " + std::to_string(line));
  return v;
}

}  // namespace

QuadratureFrame read_frame(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ConfigError("cannot open frame file " + path);
  read_csv_header(is, {"x_a", "p_a", "x_b", "p_b"});
  QuadratureFrame f;
  std::string line;
  std::size_t lineno = 2;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != 4)
      throw ConfigError("expected 4 columns on line " + std::to_string(lineno));
    f.x_a.push_back(parse_cell(cells[0], lineno));
    f.p_a.push_back(parse_cell(cells[1], lineno));
    f.x_b.push_back(parse_cell(cells[2], lineno));
    f.p_b.push_back(parse_cell(cells[3], lineno));
  }
  std::ifstream ms(path + ".json");
  if (ms) {
    nlohmann::json meta;
    try {
      meta = nlohmann::json::parse(ms);
      f.params = params_from_json(meta.at("params"));
      f.seed = meta.at("seed").get<std::uint64_t>();
      f.frame_idx = meta.at("frame_idx").get<std::uint64_t>();
      f.snu = meta.at("snu").get<bool>();
      f.transformed = meta.value("transformed", false);
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError("bad frame sidecar " + path + ".json: " + e.what());
    }
  }
  f.validate();
  return f;
}

}  // namespace cvqkd
