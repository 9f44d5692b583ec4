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
#include <vector>

#include "cvqkd/errors.hpp"
#include "cvqkd/estimation.hpp"
#include "cvqkd/simulator.hpp"
#include "test_util.hpp"

using namespace cvqkd;
using testutil::kDeg;

namespace {

struct Frame {
  CovMat4 g;
  QuadratureFrame f;
};

Frame simulate(const PhysicalParams& p, std::size_t m, std::uint64_t seed, std::uint64_t idx = 0) {
  SimConfig cfg;
  cfg.params = p;
  cfg.m = m;
  cfg.seed = seed;
  auto f = generate_frame(cfg, idx);
  auto g = empirical_covariance(f);
  return {g, std::move(f)};
}

double se_of(const PhysicalParams& p, double m, const std::function<double(const CovMat4&)>& fn) {
  return std::sqrt(delta_method_variance(build_pm_covariance(p), m, fn));
}

}  // namespace

TEST_CASE("imbalance estimates invert the builder") {
  PhysicalParams p;
  p.theta = 10 * kDeg;
  const auto e = estimate_imbalance(build_pm_covariance(p));
  CHECK(e.theta_hat == doctest::Approx(10 * kDeg).epsilon(1e-14));
  CHECK(std::abs(e.phi_hat) < 1e-15);
  CHECK(e.crosscheck_delta == doctest::Approx(10 * kDeg).epsilon(1e-12));

  const auto z = estimate_imbalance(build_pm_covariance(PhysicalParams{}));
  CHECK(z.theta_hat == 0);
  CHECK(z.phi_hat == 0);
  CHECK(std::abs(z.crosscheck_delta) < 1e-15);
}

TEST_CASE("builder round-trip is exact on a random grid") {
  std::mt19937_64 rng(61);
  for (int k = 0; k < 500; ++k) {
    const auto p = testutil::random_params(rng);
    const auto g = build_pm_covariance(p);
    const auto im = estimate_imbalance(g);
    CHECK(std::abs(im.theta_hat - p.theta) < 1e-9);
    CHECK(std::abs(im.phi_hat - p.phi) < 1e-9);
    CHECK(std::abs(im.crosscheck_delta - p.delta()) < 1e-9);
    CHECK(std::abs(estimate_eta_bs(g) - p.eta_bs) < 1e-9);
    const auto a = estimate_alpha(g, p.eta, p.v_a, p.eta_d);
    CHECK(std::abs(a.alpha_hat - p.alpha) < 1e-9);
    CHECK(a.rel_diff < 1e-9);
    CHECK(std::abs(estimate_transmission(g, p.alpha, p.v_a, p.eta_d) - p.eta) < 1e-9);
    CHECK(std::abs(estimate_excess_noise(g, NoiseMode::Conditional, p.eta, p.eta_d) - p.eps) <
          1e-9);
    if (std::abs(std::sin(p.delta())) > 1e-3)
      CHECK(std::abs(estimate_excess_noise(g, NoiseMode::CrossCorr, p.eta, p.eta_d) - p.eps) < 1e-9);
  }
}

TEST_CASE("splitter ratio examples") {
  PhysicalParams p;
  CHECK(estimate_eta_bs(build_pm_covariance(p)) == 0.5);
  p.eta_bs = 0.6;
  CHECK(estimate_eta_bs(build_pm_covariance(p)) == doctest::Approx(0.6).epsilon(1e-12));
}

TEST_CASE("mismatched modulation variance biases alpha as 1/v_a") {
  auto p = testutil::operating_point();
  const auto g = build_pm_covariance(p);
  const double a = estimate_alpha(g, p.eta, p.v_a, p.eta_d).alpha_hat;
  const double b = estimate_alpha(g, p.eta, 2 * p.v_a, p.eta_d).alpha_hat;
  CHECK(b == doctest::Approx(a / 2).epsilon(1e-12));
}

TEST_CASE("excess noise examples") {
  PhysicalParams p;
  p.eps = 0.005;
  p.theta = 10 * kDeg;
  const auto g = build_pm_covariance(p);
  CHECK(estimate_excess_noise(g, NoiseMode::Conditional, 1, 1) == doctest::Approx(0.005).epsilon(1e-9));
  CHECK(estimate_excess_noise(g, NoiseMode::CrossCorr, 1, 1) == doctest::Approx(0.005).epsilon(1e-9));
  p.theta = 0;
  const auto z = build_pm_covariance(p);
  CHECK_THROWS_WITH_AS(estimate_excess_noise(z, NoiseMode::CrossCorr, 1, 1),
                       "imbalance too small for cross-correlation route", DomainError);
  CHECK(estimate_excess_noise(z, NoiseMode::Conditional, 1, 1) == doctest::Approx(0.005));
}

TEST_CASE("estimator guards") {
  Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
  m(0, 2) = m(2, 0) = 0.5;
  m(1, 3) = m(3, 1) = -0.5;
  CHECK_THROWS_AS(estimate_imbalance(CovMat4(m)), DomainError);  // V_B = 1
  m(2, 2) = m(3, 3) = 1.1;
  m(2, 3) = m(3, 2) = 0.2;
  CHECK_THROWS_WITH_AS(estimate_imbalance(CovMat4(m)), "inconsistent covariance for cross-check",
                       NumericError);
  CHECK_THROWS_AS(estimate_imbalance(CovMat4(Eigen::Matrix4d::Identity())), DomainError);
}

TEST_CASE("Monte Carlo estimates agree with the truth") {
  auto p = testutil::operating_point();
  p.eta_bs = 0.55;
  p.eps = 0.05;
  const double m = 1e6;
  const auto fr = simulate(p, 1000000, 11);
  const auto& g = fr.g;

  auto eta_bs = [](const CovMat4& c) { return estimate_eta_bs(c); };
  CHECK(std::abs(estimate_eta_bs(g) - p.eta_bs) < 5 * se_of(p, m, eta_bs));

  auto alpha = [&](const CovMat4& c) { return estimate_alpha(c, p.eta, p.v_a, p.eta_d).alpha_hat; };
  CHECK(std::abs(alpha(g) - p.alpha) < 5 * se_of(p, m, alpha));

  auto cond = [&](const CovMat4& c) {
    return estimate_excess_noise(c, NoiseMode::Conditional, p.eta, p.eta_d);
  };
  auto cross = [&](const CovMat4& c) {
    return estimate_excess_noise(c, NoiseMode::CrossCorr, p.eta, p.eta_d);
  };
  const double s_cond = se_of(p, m, cond), s_cross = se_of(p, m, cross);
  CHECK(std::abs(cond(g) - p.eps) < 5 * s_cond);
  CHECK(std::abs(cross(g) - p.eps) < 5 * s_cross);
  CHECK(std::abs(cond(g) - cross(g)) < 5 * std::hypot(s_cond, s_cross));

  // Bob-Bob reconstruction of eta*eps.
  auto eta_eps = [&](const CovMat4& c) { return p.eta * cross(c); };
  CHECK(std::abs(eta_eps(g) - p.eta * p.eps) < 5 * se_of(p, m, eta_eps));
}

TEST_CASE("transmission estimate from frames") {
  auto p = testutil::operating_point();
  const double m = 1e6;
  const auto fr = simulate(p, 1000000, 12);
  const double t = estimate_transmission(fr.f, p.alpha, p.v_a, p.eta_d);
  CHECK(std::abs(t - p.eta) < 6.5 * std::sqrt(var_transmission_hat(p, m, 6.5)));

  PhysicalParams ideal;
  const auto fi = simulate(ideal, 1000000, 13);
  const double ti = estimate_transmission(fi.f, ideal.alpha, ideal.v_a, ideal.eta_d);
  CHECK(ti <= 1 + 5 * std::sqrt(var_transmission_hat(ideal, m, 6.5)));
}

TEST_CASE("transmission estimate coverage") {
  auto p = testutil::operating_point();
  SimConfig cfg;
  cfg.params = p;
  cfg.m = 10000;
  cfg.seed = 14;
  const double sd = std::sqrt(var_transmission_hat(p, static_cast<double>(cfg.m), 6.5));
  int inside = 0;
  const int trials = 1000;
  for (int t = 0; t < trials; ++t) {
    const auto f = generate_frame(cfg, static_cast<std::uint64_t>(t), 1);
    inside += std::abs(estimate_transmission(f, p.alpha, p.v_a, p.eta_d) - p.eta) < 6.5 * sd;
  }
  CHECK(inside >= 999);
}

TEST_CASE("both imbalance routes scatter around ten degrees") {
  // Ten frames across the modulation range used in the experiment.
  auto p = testutil::operating_point();
  double sum_main = 0, sum_cross = 0;
  int agree = 0;
  for (int k = 0; k < 10; ++k) {
    p.v_a = 1.6 + (4.5 - 1.6) * k / 9.0;
    const auto fr = simulate(p, 1000000, 15, static_cast<std::uint64_t>(k));
    const auto r = estimate_all(fr.f, {p.alpha, p.v_a, p.eta_d});
    sum_main += r.delta_hat;
    sum_cross += r.crosscheck_delta;
    const double combined = std::sqrt(r.var_delta_hat + r.var_crosscheck);
    agree += std::abs(r.delta_hat - r.crosscheck_delta) < 3 * combined;
  }
  CHECK(std::abs(sum_main / 10 - 10 * kDeg) < 0.5 * kDeg);
  CHECK(std::abs(sum_cross / 10 - 10 * kDeg) < 0.5 * kDeg);
  CHECK(agree >= 10);
}

TEST_CASE("shot-noise normalization") {
  auto p = testutil::operating_point();
  const auto fr = simulate(p, 1000000, 16);
  const double se = std::sqrt(2.0 / 1e6) * 2;  // generous SE on a variance near 1-2

  const auto same = shot_noise_normalize(fr.f, 0, p.theta, p.phi, p.eta_bs);
  CHECK(std::abs(same.vn_x - 1) < 5 * se);
  CHECK(std::abs(same.vn_p - 1) < 5 * se);

  QuadratureFrame scaled = fr.f;
  for (auto& v : scaled.x_b) v *= 3;
  for (auto& v : scaled.p_b) v *= 3;
  scaled.snu = false;
  const auto n = shot_noise_normalize(scaled, 0, p.theta, p.phi, p.eta_bs);
  CHECK(n.vn_x == doctest::Approx(9 * same.vn_x).epsilon(1e-9));
  CHECK(n.vn_p == doctest::Approx(9 * same.vn_p).epsilon(1e-9));
  CHECK(std::abs(n.vn_x - 9) < 9 * 5 * se);
  CHECK(n.frame.snu);
  const auto g0 = empirical_covariance(fr.f), g1 = empirical_covariance(n.frame);
  const auto ses = covariance_standard_errors(g0, 1e6);
  for (int i = 0; i < 4; ++i)
    for (int j = i; j < 4; ++j) CHECK(std::abs(g1(i, j) - g0(i, j)) < 5 * ses(i, j));

  // Electronic noise is removed from both quadratures.
  const auto e = shot_noise_normalize(fr.f, 0.1, p.theta, p.phi, p.eta_bs);
  CHECK(e.vn_x == doctest::Approx(same.vn_x - 0.1));

  CHECK_THROWS_AS(shot_noise_normalize(fr.f, 0, 0, 0, p.eta_bs), DomainError);
  CHECK_THROWS_WITH_AS(shot_noise_normalize(fr.f, 100, p.theta, p.phi, p.eta_bs),
                       "normalization failed", NumericError);
}

TEST_CASE("estimators are invariant under sample permutation") {
  auto p = testutil::operating_point();
  auto fr = simulate(p, 20000, 17);
  QuadratureFrame rev = fr.f;
  std::reverse(rev.x_a.begin(), rev.x_a.end());
  std::reverse(rev.p_a.begin(), rev.p_a.end());
  std::reverse(rev.x_b.begin(), rev.x_b.end());
  std::reverse(rev.p_b.begin(), rev.p_b.end());
  const KnownInputs known{p.alpha, p.v_a, p.eta_d};
  const auto a = estimate_all(fr.f, known), b = estimate_all(rev, known);
  CHECK(a.theta_hat == doctest::Approx(b.theta_hat).epsilon(1e-12));
  CHECK(a.eta_hat == doctest::Approx(b.eta_hat).epsilon(1e-12));
  CHECK(a.eps_hat == doctest::Approx(b.eps_hat).epsilon(1e-9));
}

TEST_CASE("estimation report on the exact covariance") {
  const auto p = testutil::operating_point();
  const KnownInputs known{p.alpha, p.v_a, p.eta_d};
  const auto r = estimate_all(build_pm_covariance(p), 1e6, known);
  CHECK(r.delta_hat == doctest::Approx(r.theta_hat + r.phi_hat));
  CHECK(r.eta_hat == doctest::Approx(p.eta).epsilon(1e-12));
  CHECK(r.eps_hat == doctest::Approx(p.eps).epsilon(1e-9));
  CHECK(r.var_theta > 0);
  CHECK(r.var_eta > 0);
  CHECK(r.var_eps > 0);
  CHECK(r.var_crosscheck > 0);
  const auto q = params_from_report(r, known, p.beta);
  CHECK(q.theta == doctest::Approx(p.theta));
  CHECK(q.eta_bs == doctest::Approx(p.eta_bs));

  const auto j = r.to_json();
  CHECK(j.at("theta_hat_deg").get<double>() == doctest::Approx(10.0));
  CHECK(r.to_text().find("theta_hat_deg=") != std::string::npos);
}
