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

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <random>

#include "cvqkd/errors.hpp"
#include "cvqkd/frame_io.hpp"
#include "cvqkd/philox.hpp"
#include "cvqkd/simulator.hpp"
#include "test_util.hpp"

using namespace cvqkd;
using testutil::kDeg;

namespace {

std::filesystem::path temp_dir(const std::string& name) {
  auto d = std::filesystem::temp_directory_path() / ("cvqkd_test_" + name);
  std::filesystem::remove_all(d);
  std::filesystem::create_directories(d);
  return d;
}

void check_within_se(const SimConfig& cfg, std::uint64_t frame, double k) {
  const auto emp = empirical_covariance(generate_frame(cfg, frame));
  const auto model = build_pm_covariance(cfg.params);
  const auto se = covariance_standard_errors(model, static_cast<double>(cfg.m));
  for (int i = 0; i < 4; ++i)
    for (int j = i; j < 4; ++j) {
      INFO("entry " << i << "," << j << " emp " << emp(i, j) << " model " << model(i, j));
      CHECK(std::abs(emp(i, j) - model(i, j)) < k * se(i, j));
    }
}

}  // namespace

TEST_CASE("Philox4x32-10 known-answer vectors") {
  using C = Philox4x32::Counter;
  using K = Philox4x32::Key;
  CHECK(Philox4x32::generate(C{0, 0, 0, 0}, K{0, 0}) ==
        C{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  CHECK(Philox4x32::generate(C{0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff},
                             K{0xffffffff, 0xffffffff}) ==
        C{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  CHECK(Philox4x32::generate(C{0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344},
                             K{0xa4093822, 0x299f31d0}) ==
        C{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("uniforms stay strictly inside the unit interval") {
  CHECK(philox_uniform(0, 0) > 0);
  CHECK(philox_uniform(0xffffffff, 0xffffffff) < 1);
  const auto z = philox_normal_pair({0, 0, 0, 0});
  CHECK(std::isfinite(z[0]));
  CHECK(std::isfinite(z[1]));
}

TEST_CASE("normals have unit moments") {
  double s1 = 0, s2 = 0, s4 = 0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const auto z = philox_normal_pair(Philox4x32::generate({std::uint32_t(i), 0, 0, 0}, {1, 2}));
    for (double v : z) s1 += v, s2 += v * v, s4 += v * v * v * v;
  }
  const double m = 2.0 * n;
  CHECK(std::abs(s1 / m) < 5 / std::sqrt(m));
  CHECK(std::abs(s2 / m - 1) < 5 * std::sqrt(2 / m));
  CHECK(std::abs(s4 / m - 3) < 5 * std::sqrt(96 / m));
}

TEST_CASE("frames are deterministic in seed and index") {
  SimConfig cfg;
  cfg.m = 5000;
  cfg.seed = 42;
  const auto a = generate_frame(cfg, 7);
  const auto b = generate_frame(cfg, 7);
  CHECK(a.x_a == b.x_a);
  CHECK(a.p_b == b.p_b);
  CHECK(a.seed == 42);
  CHECK(a.frame_idx == 7);
  const auto c = generate_frame(cfg, 8);
  CHECK(a.x_a != c.x_a);
  cfg.seed = 43;
  CHECK(generate_frame(cfg, 7).x_a != a.x_a);
}

TEST_CASE("frames do not depend on the thread count") {
  SimConfig cfg;
  cfg.params = testutil::operating_point();
  cfg.m = 100003;
  cfg.seed = 9;
  const auto seq = generate_frame(cfg, 1, 1);
  for (unsigned t : {2u, 3u, 8u}) {
    const auto par = generate_frame(cfg, 1, t);
    CHECK(par.x_a == seq.x_a);
    CHECK(par.p_a == seq.p_a);
    CHECK(par.x_b == seq.x_b);
    CHECK(par.p_b == seq.p_b);
  }
}

TEST_CASE("balanced lossless frame matches the model") {
  SimConfig cfg;
  cfg.m = 1000000;
  cfg.seed = 1;
  check_within_se(cfg, 0, 5);
}

TEST_CASE("Bob-Bob covariance carries no vacuum term") {
  SimConfig cfg;
  cfg.params.theta = 10 * kDeg;
  cfg.params.eps = 0.1;
  cfg.m = 1000000;
  cfg.seed = 2;
  const auto g = empirical_covariance(generate_frame(cfg, 0));
  const auto& p = cfg.params;
  const double expect =
      -p.eta * std::sqrt(p.tau_x() * p.tau_p()) * (p.v_m() + p.eps) * std::sin(p.delta());
  const double se = covariance_standard_errors(build_pm_covariance(p), 1e6)(2, 3);
  CHECK(std::abs(g.s_bxbp() - expect) < 5 * se);
  // A vacuum contribution of sqrt(tau_x tau_p) sin(delta) would be visible.
  CHECK(std::abs(0.5 * std::sin(p.delta())) > 20 * se);
}

TEST_CASE("paper-like frame with detector loss matches the model") {
  SimConfig cfg;
  cfg.params = testutil::operating_point();
  cfg.params.eta_bs = 0.55;
  cfg.params.phi = -3 * kDeg;
  cfg.params.alpha = 1.1;
  cfg.m = 1000000;
  cfg.seed = 3;
  check_within_se(cfg, 0, 5);
}

TEST_CASE("degenerate frames are rejected") {
  QuadratureFrame f;
  f.resize(10);
  std::fill(f.x_a.begin(), f.x_a.end(), 1.0);
  std::iota(f.p_a.begin(), f.p_a.end(), 0.0);
  std::iota(f.x_b.begin(), f.x_b.end(), 0.0);
  std::iota(f.p_b.begin(), f.p_b.end(), 0.0);
  CHECK_THROWS_WITH_AS(empirical_covariance(f), "degenerate frame", NumericError);
  f.resize(1);
  CHECK_THROWS_AS(empirical_covariance(f), DomainError);
}

TEST_CASE("frame validation") {
  QuadratureFrame f;
  f.resize(3);
  f.x_b.push_back(0);
  CHECK_THROWS_AS(f.validate(), DomainError);
  f.resize(3);
  f.p_a[1] = std::nan("");
  CHECK_THROWS_AS(f.validate(), DomainError);
}

TEST_CASE("errors shrink as 1/sqrt(m)") {
  SimConfig cfg;
  cfg.params = testutil::operating_point();
  const auto model = build_pm_covariance(cfg.params);
  const auto se1 = covariance_standard_errors(model, 1e4);
  const auto se4 = covariance_standard_errors(model, 4e4);
  CHECK((se1.array() / se4.array() - 2.0).abs().maxCoeff() < 1e-12);

  auto rms = [&](std::size_t m) {
    cfg.m = m;
    double s = 0;
    for (std::uint64_t f = 0; f < 40; ++f) {
      const auto d = empirical_covariance(generate_frame(cfg, f)).mat() - model.mat();
      s += d.squaredNorm();
    }
    return std::sqrt(s / 40);
  };
  const double ratio = rms(10000) / rms(40000);
  CHECK(ratio > 1.6);
  CHECK(ratio < 2.5);
}

TEST_CASE("empirical covariance is invariant under sample permutation") {
  SimConfig cfg;
  cfg.params = testutil::operating_point();
  cfg.m = 20000;
  auto f = generate_frame(cfg, 0);
  const auto g = empirical_covariance(f);
  std::vector<std::size_t> perm(f.m());
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), std::mt19937_64(5));
  QuadratureFrame s = f;
  for (std::size_t i = 0; i < f.m(); ++i) {
    s.x_a[i] = f.x_a[perm[i]];
    s.p_a[i] = f.p_a[perm[i]];
    s.x_b[i] = f.x_b[perm[i]];
    s.p_b[i] = f.p_b[perm[i]];
  }
  CHECK((empirical_covariance(s).mat() - g.mat()).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("frame files round-trip exactly") {
  const auto dir = temp_dir("frame_io");
  SimConfig cfg;
  cfg.params = testutil::operating_point();
  cfg.m = 2000;
  cfg.seed = 123;
  const auto f = generate_frame(cfg, 4);
  const auto path = (dir / "f.csv").string();
  write_frame(path, f);
  const auto r = read_frame(path);
  CHECK(r.x_a == f.x_a);
  CHECK(r.p_a == f.p_a);
  CHECK(r.x_b == f.x_b);
  CHECK(r.p_b == f.p_b);
  CHECK(r.seed == 123);
  CHECK(r.frame_idx == 4);
  CHECK(r.snu);
  CHECK(r.params.eta == doctest::Approx(cfg.params.eta).epsilon(1e-15));
  CHECK(r.params.theta == doctest::Approx(cfg.params.theta).epsilon(1e-14));
  std::filesystem::remove_all(dir);
}

TEST_CASE("frame reader rejects malformed files") {
  const auto dir = temp_dir("frame_bad");
  auto write = [&](const std::string& name, const std::string& body) {
    const auto p = (dir / name).string();
    std::ofstream(p) << body;
    return p;
  };
  CHECK_THROWS_AS(read_frame(write("v.csv", "# cvqkd-csv v2\nx_a,p_a,x_b,p_b\n1,2,3,4\n")),
                  ConfigError);
  CHECK_THROWS_AS(read_frame(write("h.csv", "# cvqkd-csv v1\nx_a,p_a,x_b\n1,2,3\n")), ConfigError);
  CHECK_THROWS_AS(read_frame(write("c.csv", "# cvqkd-csv v1\nx_a,p_a,x_b,p_b\n1,2,3\n")),
                  ConfigError);
  CHECK_THROWS_AS(read_frame(write("n.csv", "# cvqkd-csv v1\nx_a,p_a,x_b,p_b\n1,2,nan,4\n")),
                  ConfigError);
  CHECK_THROWS_AS(read_frame(write("t.csv", "# cvqkd-csv v1\nx_a,p_a,x_b,p_b\n1,2,3x,4\n")),
                  ConfigError);
  CHECK_THROWS_AS(read_frame((dir / "missing.csv").string()), ConfigError);
  const auto ok = read_frame(write("ok.csv", "# cvqkd-csv v1\nx_a,p_a,x_b,p_b\n1,2,3,4\n5,6,7,8\n"));
  CHECK(ok.m() == 2);
  std::filesystem::remove_all(dir);
}
