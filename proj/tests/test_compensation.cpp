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

#include <cmath>
#include <random>

#include "cvqkd/compensation.hpp"
#include "cvqkd/errors.hpp"
#include "cvqkd/estimation.hpp"
#include "cvqkd/finite_size.hpp"
#include "cvqkd/info_metrics.hpp"
#include "cvqkd/simulator.hpp"
#include "test_util.hpp"

using namespace cvqkd;
using testutil::kDeg;

namespace {

CovMat4 pm(double theta_deg, double phi_deg) {
  PhysicalParams p;
  p.theta = theta_deg * kDeg;
  p.phi = phi_deg * kDeg;
  return build_pm_covariance(p);
}

double sign(double v) { return (v > 0) - (v < 0); }

}  // namespace

TEST_CASE("Alice angles invert the builder") {
  const auto s = alice_transform_angles(pm(10, 0));
  CHECK(s.side == Side::Alice);
  CHECK(s.theta_cap == doctest::Approx(10 * kDeg).epsilon(1e-14));
  CHECK(std::abs(s.phi_cap) < 1e-15);

  const auto z = alice_transform_angles(pm(0, 0));
  CHECK(z.theta_cap == 0);
  CHECK(z.phi_cap == 0);
}

TEST_CASE("Alice angles require correlation") {
  CHECK_THROWS_WITH_AS(alice_transform_angles(CovMat4(Eigen::Matrix4d::Identity())),
                       "no correlation to align", DomainError);
}

TEST_CASE("Alice angles from a simulated frame lie inside the finite-size interval") {
  SimConfig cfg;
  cfg.params.theta = 10 * kDeg;
  cfg.m = 1000000;
  cfg.seed = 5;
  const auto g = empirical_covariance(generate_frame(cfg, 0));
  const double sd = std::sqrt(var_theta_hat(cfg.params, static_cast<double>(cfg.m)));
  CHECK(std::abs(alice_transform_angles(g).theta_cap - 10 * kDeg) < 6.5 * sd);
}

TEST_CASE("Alice transform maximizes the aligned covariances") {
  std::mt19937_64 rng(41);
  for (int k = 0; k < 200; ++k) {
    const auto g = build_pm_covariance(testutil::random_params(rng));
    const auto s = alice_transform_angles(g);
    auto aligned = [&](double dt, double dp) {
      TransformSpec t = s;
      t.theta_cap += dt;
      t.phi_cap += dp;
      const auto h = apply_transform_gamma(g, t);
      return std::pair{h.sigma_x(), -h.sigma_p()};
    };
    const auto best = aligned(0, 0);
    for (double d : {-1.0, 1.0}) {
      CHECK(aligned(d * kDeg, 0).first < best.first);
      CHECK(aligned(0, d * kDeg).second < best.second);
    }
  }
}

TEST_CASE("Alice transform keeps an isotropic Alice block at the exact angles") {
  // With Phi = -Theta (canonical rotation) Alice's block stays V_A * I.
  const auto g = pm(10, -10);
  const auto s = alice_transform_angles(g);
  const auto h = apply_transform_gamma(g, s);
  CHECK((h.gamma_a() - g.gamma_a()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("Alice transform recovers the balanced ignorant MI") {
  const auto g = pm(10, -10);
  const auto h = apply_transform_gamma(g, alice_transform_angles(g));
  CHECK(ignorant_mi(h) == doctest::Approx(ignorant_mi(pm(0, 0))).epsilon(1e-12));
  CHECK(h.transformed());
}

TEST_CASE("true MI is unchanged by any nondegenerate transform") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(-1.4, 1.4);
  for (int k = 0; k < 500; ++k) {
    const auto g = build_pm_covariance(testutil::random_params(rng));
    TransformSpec t;
    t.side = (k % 2) ? Side::Alice : Side::Bob;
    t.theta_cap = u(rng);
    t.phi_cap = u(rng);
    if (std::abs(std::cos(t.theta_cap + t.phi_cap)) < 0.05) continue;
    CHECK(std::abs(true_mi(apply_transform_gamma(g, t)) - true_mi(g)) < 1e-9);
  }
}

TEST_CASE("identity transform leaves the covariance unchanged") {
  const auto g = pm(10, 3);
  for (Side side : {Side::Alice, Side::Bob}) {
    TransformSpec t;
    t.side = side;
    CHECK(apply_transform_gamma(g, t).mat() == g.mat());
  }
}

TEST_CASE("degenerate transform is rejected") {
  TransformSpec t;
  t.theta_cap = 0.6;
  t.phi_cap = std::numbers::pi / 2 - 0.6;
  CHECK_THROWS_WITH_AS(apply_transform_gamma(pm(10, 0), t), "degenerate transform", NumericError);
}

TEST_CASE("Bob angles and the feasibility flag") {
  const auto z = bob_transform_angles(pm(0, 0));
  CHECK(z.side == Side::Bob);
  CHECK(z.theta_cap == 0);
  CHECK(z.phi_cap == 0);
  CHECK(z.feasible);

  const auto g = pm(10, 0);
  const auto s = bob_transform_angles(g);
  CHECK(s.theta_cap == doctest::Approx(0).scale(1));
  CHECK(s.phi_cap == doctest::Approx(-std::atan(std::sin(10 * kDeg))).epsilon(1e-12));
  // Phi has the same sign as the Bob-Bob term, so the rule fails.
  CHECK_FALSE(s.feasible);
}

TEST_CASE("Bob feasibility flag follows the sign rule") {
  std::mt19937_64 rng(43);
  for (int k = 0; k < 1000; ++k) {
    const auto g = build_pm_covariance(testutil::random_params(rng));
    const auto s = bob_transform_angles(g);
    const double sb = sign(g.s_bxbp());
    const bool rule = sign(s.theta_cap) * sb <= 0 && sign(s.phi_cap) * sb <= 0;
    CHECK(s.feasible == rule);
  }
}

TEST_CASE("Bob transform locally maximizes the aligned covariances") {
  std::mt19937_64 rng(44);
  for (int k = 0; k < 200; ++k) {
    const auto g = build_pm_covariance(testutil::random_params(rng));
    const auto s = bob_transform_angles(g);
    auto aligned = [&](double dt, double dp) {
      TransformSpec t = s;
      t.theta_cap += dt;
      t.phi_cap += dp;
      const auto h = apply_transform_gamma(g, t);
      return std::pair{std::abs(h.sigma_x()), std::abs(h.sigma_p())};
    };
    const auto best = aligned(0, 0);
    for (double d : {-1.0, 1.0}) {
      CHECK(aligned(d * kDeg, 0).first < best.first);
      CHECK(aligned(0, d * kDeg).second < best.second);
    }
  }
}

TEST_CASE("an infeasible Bob transform can still raise ignorant MI") {
  // Counterexample to the claim that infeasible specs never help.
  const auto g = pm(10, 0);
  const auto s = bob_transform_angles(g);
  REQUIRE_FALSE(s.feasible);
  CHECK(ignorant_mi(apply_transform_gamma(g, s)) > ignorant_mi(g));
}

TEST_CASE("frame transform commutes with the empirical covariance") {
  SimConfig cfg;
  cfg.params.theta = 12 * kDeg;
  cfg.params.phi = -4 * kDeg;
  cfg.m = 20000;
  const auto f = generate_frame(cfg, 3);
  const auto g = empirical_covariance(f);
  for (Side side : {Side::Alice, Side::Bob}) {
    TransformSpec t = side == Side::Alice ? alice_transform_angles(g) : bob_transform_angles(g);
    const auto tf = apply_transform_frame(f, t);
    CHECK(tf.transformed);
    const auto lhs = empirical_covariance(tf);
    const auto rhs = apply_transform_gamma(g, t);
    CHECK((lhs.mat() - rhs.mat()).cwiseAbs().maxCoeff() < 1e-12);
  }
  TransformSpec id;
  const auto same = apply_transform_frame(f, id);
  CHECK(same.x_a == f.x_a);
  CHECK(same.p_b == f.p_b);
}

TEST_CASE("simulated frame recovers the balanced ignorant MI after the Alice transform") {
  SimConfig cfg;
  cfg.params.theta = 10 * kDeg;
  cfg.params.phi = -10 * kDeg;
  cfg.m = 1000000;
  cfg.seed = 17;
  const auto f = generate_frame(cfg, 0);
  const auto g = empirical_covariance(f);
  const auto h = empirical_covariance(apply_transform_frame(f, alice_transform_angles(g)));
  const double target = ignorant_mi(pm(0, 0));
  auto recovered = [](const CovMat4& c) {
    return ignorant_mi(apply_transform_gamma(c, alice_transform_angles(c)));
  };
  const double se = std::sqrt(delta_method_variance(build_pm_covariance(cfg.params),
                                                    static_cast<double>(cfg.m), recovered));
  CHECK(std::abs(ignorant_mi(h) - target) < 3 * se);
}

TEST_CASE("symmetrize zeroes cross-quadrature terms only") {
  const auto g = pm(10, 0);
  const auto s = symmetrize(g);
  CHECK(s.s_axbp() == 0);
  CHECK(s.s_apbx() == 0);
  CHECK(s.s_bxbp() == 0);
  CHECK(s.s_axap() == 0);
  CHECK(s.sigma_x() == g.sigma_x());
  CHECK(s.sigma_p() == g.sigma_p());
  CHECK(s.vb_x() == g.vb_x());
  CHECK(symmetrize(s).mat() == s.mat());
  const auto z = pm(0, 0);
  CHECK(symmetrize(z).mat() == z.mat());
}

TEST_CASE("symmetrizing a transformed covariance is flagged") {
  const auto g = pm(10, 0);
  const auto h = apply_transform_gamma(g, alice_transform_angles(g));
  CHECK_FALSE(symmetrize(g).symmetrized_after_transform());
  CHECK(symmetrize(h).symmetrized_after_transform());
}
