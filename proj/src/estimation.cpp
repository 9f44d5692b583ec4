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

#include "cvqkd/estimation.hpp"

#include <cmath>
#include <limits>

#include "cvqkd/errors.hpp"
#include "cvqkd/parallel.hpp"

namespace cvqkd {

namespace {

Eigen::Matrix2d cond_b(const CovMat4& g) {
  return schur_condition(g.sym(), {0, 1}, zero_regularizer(2)).mat();
}

struct Taus {
  double tx, tp;
};

Taus taus(double eta_d, double eta_bs) { return {eta_d * eta_bs, eta_d * (1 - eta_bs)}; }

}  // namespace

ImbalanceEstimate estimate_imbalance(const CovMat4& g) {
  if (g.sigma_x() == 0 || g.sigma_p() == 0)
    throw DomainError("imbalance estimate needs nonzero sigma_x and sigma_p");
  ImbalanceEstimate e;
  e.theta_hat = std::atan(g.s_apbx() / g.sigma_x());
  e.phi_hat = std::atan(g.s_axbp() / g.sigma_p());
  if (!(g.vb_x() > 1) || !(g.vb_p() > 1))
    throw DomainError("cross-check needs Bob variances above shot noise");
  const double arg = g.s_bxbp() / std::sqrt((g.vb_x() - 1) * (g.vb_p() - 1));
  if (std::abs(arg) > 1) throw NumericError("inconsistent covariance for cross-check");
  // s_bxbp is negative for a positive imbalance, hence the sign.
  e.crosscheck_delta = -std::asin(arg);
  return e;
}

double estimate_eta_bs(const CovMat4& g) {
  const Eigen::Matrix2d c = cond_b(g);
  const double ex = g.vb_x() - c(0, 0);
  const double ep = g.vb_p() - c(1, 1);
  if (!(ex > 0) || !(ep > 0)) throw NumericError("eta_bs estimate needs correlated data");
  return ex / (ex + ep);
}

AlphaEstimate estimate_alpha(const CovMat4& g, double eta, double v_a, double eta_d) {
  const ImbalanceEstimate im = estimate_imbalance(g);
  const Taus t = taus(eta_d, estimate_eta_bs(g));
  AlphaEstimate a;
  a.alpha_x = g.sigma_x() / (std::sqrt(eta * t.tx) * std::cos(im.theta_hat) * v_a);
  a.alpha_p = -g.sigma_p() / (std::sqrt(eta * t.tp) * std::cos(im.phi_hat) * v_a);
  a.alpha_hat = 0.5 * (a.alpha_x + a.alpha_p);
  a.rel_diff = std::abs(a.alpha_x - a.alpha_p) / std::abs(a.alpha_hat);
  return a;
}

namespace {

double transmission_from(double c_ab, const CovMat4& g, double alpha, double v_a, double eta_d) {
  const ImbalanceEstimate im = estimate_imbalance(g);
  const Taus t = taus(eta_d, estimate_eta_bs(g));
  const double k = std::sqrt(t.tx) * std::cos(im.theta_hat) + std::sqrt(t.tp) * std::cos(im.phi_hat);
  return c_ab * c_ab / (alpha * alpha * v_a * v_a * k * k);
}

}  // namespace

double estimate_transmission(const CovMat4& g, double alpha, double v_a, double eta_d) {
  return transmission_from(g.sigma_x() - g.sigma_p(), g, alpha, v_a, eta_d);
}

double estimate_transmission(const QuadratureFrame& f, double alpha, double v_a, double eta_d) {
  const CovMat4 g = empirical_covariance(f);
  long double s = 0;
  for (std::size_t i = 0; i < f.m(); ++i) s += f.x_a[i] * f.x_b[i] - f.p_a[i] * f.p_b[i];
  return transmission_from(static_cast<double>(s / f.m()), g, alpha, v_a, eta_d);
}

double estimate_excess_noise(const CovMat4& g, NoiseMode mode, double eta, double eta_d) {
  const Taus t = taus(eta_d, estimate_eta_bs(g));
  const Eigen::Matrix2d c = cond_b(g);
  if (mode == NoiseMode::Conditional) {
    const double ex = (c(0, 0) - 1) / (eta * t.tx);
    const double ep = (c(1, 1) - 1) / (eta * t.tp);
    return 0.5 * (ex + ep);
  }
  const ImbalanceEstimate im = estimate_imbalance(g);
  const double sd = std::sin(im.theta_hat + im.phi_hat);
  if (std::abs(sd) <= 1e-3) throw DomainError("imbalance too small for cross-correlation route");
  // The conditional Bob-Bob term keeps only the noise part: the vacuum
  // cancels and the signal is removed by conditioning on Alice.
  const double eta_eps = -c(0, 1) / (std::sqrt(t.tx * t.tp) * sd);
  return eta_eps / eta;
}

NormalizationResult shot_noise_normalize(const QuadratureFrame& raw, double v_elec, double theta,
                                         double phi, double eta_bs) {
  const double sd = std::sin(theta + phi);
  if (std::abs(sd) <= 1e-3) throw DomainError("imbalance too small for shot-noise normalization");
  if (!(eta_bs > 0 && eta_bs < 1)) throw DomainError("eta_bs must be in (0,1)");
  const CovMat4 g = empirical_covariance(raw);
  const double r = std::sqrt(eta_bs / (1 - eta_bs));  // sqrt(tau_x / tau_p)
  NormalizationResult out;
  out.vn_x = g.vb_x() + r * g.s_bxbp() / sd - v_elec;
  out.vn_p = g.vb_p() + g.s_bxbp() / (r * sd) - v_elec;
  if (!(out.vn_x > 0) || !(out.vn_p > 0)) throw NumericError("normalization failed");
  out.frame = raw;
  const double sx = 1 / std::sqrt(out.vn_x), sp = 1 / std::sqrt(out.vn_p);
  for (auto& v : out.frame.x_b) v *= sx;
  for (auto& v : out.frame.p_b) v *= sp;
  out.frame.snu = true;
  return out;
}

double delta_method_variance(const CovMat4& g, double m,
                             const std::function<double(const CovMat4&)>& f) {
  int idx[10][2];
  int n = 0;
  for (int i = 0; i < 4; ++i)
    for (int j = i; j < 4; ++j) idx[n][0] = i, idx[n][1] = j, ++n;

  Eigen::Matrix<double, 10, 1> grad;
  const Eigen::Matrix4d& base = g.mat();
  for (int k = 0; k < 10; ++k) {
    const int i = idx[k][0], j = idx[k][1];
    const double h = 1e-6 * std::sqrt(base(i, i) * base(j, j));
    Eigen::Matrix4d up = base, dn = base;
    up(i, j) += h;
    dn(i, j) -= h;
    if (i != j) up(j, i) += h, dn(j, i) -= h;
    grad(k) = (f(CovMat4(up)) - f(CovMat4(dn))) / (2 * h);
  }
  Eigen::Matrix<double, 10, 10> cov;
  for (int a = 0; a < 10; ++a)
    for (int b = 0; b < 10; ++b) {
      const int i = idx[a][0], j = idx[a][1], k = idx[b][0], l = idx[b][1];
      cov(a, b) = (base(i, k) * base(j, l) + base(i, l) * base(j, k)) / m;
    }
  return grad.dot(cov * grad);
}

namespace {

EstimationReport estimate_core(const CovMat4& g, double m, const KnownInputs& known, double z,
                               double eta_hat) {
  EstimationReport r;
  r.m = m;
  const ImbalanceEstimate im = estimate_imbalance(g);
  r.theta_hat = im.theta_hat;
  r.phi_hat = im.phi_hat;
  r.delta_hat = im.theta_hat + im.phi_hat;
  r.crosscheck_delta = im.crosscheck_delta;
  r.eta_bs_hat = estimate_eta_bs(g);
  r.eta_hat = std::isnan(eta_hat) ? estimate_transmission(g, known.alpha, known.v_a, known.eta_d)
                                  : eta_hat;
  const AlphaEstimate a = estimate_alpha(g, r.eta_hat, known.v_a, known.eta_d);
  r.alpha_hat = a.alpha_hat;
  r.alpha_rel_diff = a.rel_diff;
  r.eps_hat = estimate_excess_noise(g, NoiseMode::Conditional, r.eta_hat, known.eta_d);
  try {
    r.eps_hat_crosscorr = estimate_excess_noise(g, NoiseMode::CrossCorr, r.eta_hat, known.eta_d);
  } catch (const DomainError&) {
    r.eps_hat_crosscorr = std::numeric_limits<double>::quiet_NaN();
  }

  // Model variances at the point estimates; the angle guard in
  // var_theta_hat applies.
  PhysicalParams p = params_from_report(r, known, 0.5);
  p.eta = std::min(1.0, std::max(r.eta_hat, 1e-6));
  p.eps = std::max(0.0, r.eps_hat);
  r.var_theta = var_theta_hat(p, m);
  r.var_phi = var_phi_hat(p, m);
  r.var_eta = var_transmission_hat(p, m, z);
  r.var_eps = var_eps_hat(p, m);
  r.var_crosscheck = delta_method_variance(
      g, m, [](const CovMat4& x) { return estimate_imbalance(x).crosscheck_delta; });
  r.var_delta_hat = delta_method_variance(g, m, [](const CovMat4& x) {
    const auto e = estimate_imbalance(x);
    return e.theta_hat + e.phi_hat;
  });
  return r;
}

}  // namespace

EstimationReport estimate_all(const CovMat4& g, double m, const KnownInputs& known, double z) {
  return estimate_core(g, m, known, z, std::numeric_limits<double>::quiet_NaN());
}

EstimationReport estimate_all(const QuadratureFrame& f, const KnownInputs& known, double z) {
  const double eta = estimate_transmission(f, known.alpha, known.v_a, known.eta_d);
  return estimate_core(empirical_covariance(f), static_cast<double>(f.m()), known, z, eta);
}

PhysicalParams params_from_report(const EstimationReport& r, const KnownInputs& known,
                                  double beta) {
  PhysicalParams p;
  p.eta = std::min(1.0, std::max(r.eta_hat, 1e-6));
  p.eps = std::max(0.0, r.eps_hat);
  p.theta = r.theta_hat;
  p.phi = r.phi_hat;
  p.eta_d = known.eta_d;
  p.eta_bs = r.eta_bs_hat;
  p.alpha = known.alpha;
  p.v_a = known.v_a;
  p.beta = beta;
  return p;
}

}  // namespace cvqkd
