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

#include "cvqkd/finite_size.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <utility>
#include <vector>

#include "cvqkd/errors.hpp"

namespace cvqkd {

void FiniteSizeConfig::validate() const {
  if (!(n_total >= 1)) throw DomainError("n_total must be >= 1");
  if (!(frac_key > 0 && frac_key < 1)) throw DomainError("frac_key must be in (0,1)");
  if (!(z > 0)) throw DomainError("z must be > 0");
  if (!(eps_smooth > 0 && eps_smooth < 1)) throw DomainError("eps_smooth must be in (0,1)");
  if (!(eps_pe > 0 && eps_pe < 1)) throw DomainError("eps_pe must be in (0,1)");
  if (!(delta_split >= 0 && delta_split <= 1)) throw DomainError("delta_split must be in [0,1]");
}

namespace {

constexpr double kMaxAngle = 80.0 * std::numbers::pi / 180.0;

void check_m(double m, double min) {
  if (!(m >= min)) throw DomainError("sample count too small for the variance formula");
}

// Symbol V_t of the variance formulas is the modulation variance v_a.
double var_angle(const PhysicalParams& p, double m, double tau, double ang) {
  check_m(m, 1000);
  if (std::abs(ang) > kMaxAngle) throw DomainError("imbalance above 80 degrees: variance diverges");
  const double vm = p.v_a, vt = p.v_a, a2 = p.alpha * p.alpha;
  const double et = p.eta * tau;
  const double s = std::sin(ang), c = std::cos(ang);
  return 4 * vm * (1 + et * p.eps + et * vm + et * a2 * vm * s * s) / (m * et * vt * vt * a2 * c * c);
}

double var_angle_first_order(const PhysicalParams& p, double m, double tau) {
  const double et = p.eta * tau, a2 = p.alpha * p.alpha;
  return (1 + et * (a2 * p.v_a + p.eps)) / (m * et * a2 * p.v_a);
}

// Nodes and weights on [-1, 1] by Golub-Welsch, cached per order.
const std::pair<std::vector<double>, std::vector<double>>& gauss_legendre(int n) {
  static std::mutex mu;
  static std::map<int, std::pair<std::vector<double>, std::vector<double>>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    const double b = k / std::sqrt(4.0 * k * k - 1);
    j(k - 1, k) = j(k, k - 1) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(j);
  std::vector<double> x(n), w(n);
  for (int i = 0; i < n; ++i) {
    x[i] = es.eigenvalues()(i);
    const double v = es.eigenvectors()(0, i);
    w[i] = 2 * v * v;
  }
  return cache.emplace(n, std::make_pair(std::move(x), std::move(w))).first->second;
}

// Var[1/K^2] with K = sqrt(tau_x)cos(theta) + sqrt(tau_p)cos(phi) under
// independent Gaussians truncated to the box.
double var_inv_k2(const PhysicalParams& p, double vth, double vph, AngleBounds tb, AngleBounds pb,
                  int n) {
  const double sx = std::sqrt(p.tau_x()), sp = std::sqrt(p.tau_p());
  auto f = [&](double t, double q) {
    const double k = sx * std::cos(t) + sp * std::cos(q);
    return 1 / (k * k);
  };
  const double f0 = f(p.theta, p.phi);
  const auto& gl = gauss_legendre(n);
  // A zero-variance axis collapses onto its mean.
  auto axis = [&](double var, AngleBounds b, double mean) {
    std::vector<std::pair<double, double>> pts;
    if (var <= 0 || b.hi <= b.lo) {
      pts.emplace_back(mean, 1.0);
      return pts;
    }
    const double c = 0.5 * (b.lo + b.hi), h = 0.5 * (b.hi - b.lo);
    for (int i = 0; i < n; ++i) {
      const double x = c + h * gl.first[i];
      const double d = x - mean;
      pts.emplace_back(x, gl.second[i] * h * std::exp(-d * d / (2 * var)));
    }
    return pts;
  };
  const auto ta = axis(vth, tb, p.theta);
  const auto pa = axis(vph, pb, p.phi);
  double z = 0, e1 = 0, e2 = 0;
  for (const auto& [t, wt] : ta)
    for (const auto& [q, wq] : pa) {
      const double w = wt * wq;
      const double d = f(t, q) - f0;
      z += w;
      e1 += w * d;
      e2 += w * d * d;
    }
  if (!(z > 0)) throw NumericError("empty quadrature weight");
  e1 /= z;
  e2 /= z;
  return std::max(0.0, e2 - e1 * e1);
}

}  // namespace

double var_theta_hat(const PhysicalParams& p, double m) {
  return var_angle(p, m, p.tau_x(), p.theta);
}

double var_phi_hat(const PhysicalParams& p, double m) { return var_angle(p, m, p.tau_p(), p.phi); }

double var_theta_first_order(const PhysicalParams& p, double m) {
  return var_angle_first_order(p, m, p.tau_x());
}

double var_phi_first_order(const PhysicalParams& p, double m) {
  return var_angle_first_order(p, m, p.tau_p());
}

double var_c_ab(const PhysicalParams& p, double m) {
  check_m(m, 1);
  const double vm = p.v_a, a2 = p.alpha * p.alpha;
  const double ex = p.eta * p.tau_x(), ep = p.eta * p.tau_p();
  const double ct = std::cos(p.theta), cp = std::cos(p.phi);
  const double x = vm * (ex * a2 * vm * ct * ct + ex * a2 * vm + 1 + ex * p.eps);
  const double q = vm * (ep * a2 * vm * cp * cp + ep * a2 * vm + 1 + ep * p.eps);
  return (x + q) / m;
}

double var_transmission_hat(const PhysicalParams& p, double m, AngleBounds tb, AngleBounds pb,
                            int nodes) {
  p.validate();
  check_m(m, 1000);
  if (nodes < 2) throw DomainError("need at least 2 quadrature nodes");
  const double k = std::sqrt(p.tau_x()) * std::cos(p.theta) + std::sqrt(p.tau_p()) * std::cos(p.phi);
  const double first = 4 * p.eta * var_c_ab(p, m) / (p.alpha * p.alpha * p.v_a * p.v_a * k * k);
  const double vth = var_theta_hat(p, m), vph = var_phi_hat(p, m);
  const double v1 = var_inv_k2(p, vth, vph, tb, pb, nodes);
  const double v2 = var_inv_k2(p, vth, vph, tb, pb, 2 * nodes);
  // Differences below the roundoff of f - f0 cannot be resolved.
  const double ulp = 64 * std::numeric_limits<double>::epsilon() / (k * k);
  const double floor = 2 * std::sqrt(std::abs(v2)) * ulp + ulp * ulp;
  if (std::abs(v1 - v2) > 1e-6 * std::abs(v2) + floor)
    throw NumericError("transmission variance quadrature did not converge");
  return first + p.eta * p.eta * std::pow(k, 4) * v1;
}

double var_transmission_hat(const PhysicalParams& p, double m, double z) {
  const double st = std::sqrt(var_theta_hat(p, m)), sp = std::sqrt(var_phi_hat(p, m));
  return var_transmission_hat(p, m, {p.theta - z * st, p.theta + z * st},
                              {p.phi - z * sp, p.phi + z * sp});
}

double var_noise_hat(double t_eps, double m) {
  check_m(m, 1);
  return 2 * (t_eps + 1) * (t_eps + 1) / m;
}

double var_eps_hat(const PhysicalParams& p, double m) {
  const double tx = p.eta * p.tau_x(), tp = p.eta * p.tau_p();
  return 0.25 * (var_noise_hat(tx * p.eps, m) / (tx * tx) + var_noise_hat(tp * p.eps, m) / (tp * tp));
}

EstimationReport model_report(const PhysicalParams& p, double m, double z) {
  p.validate();
  EstimationReport r;
  r.m = m;
  r.theta_hat = p.theta;
  r.phi_hat = p.phi;
  r.delta_hat = p.delta();
  r.crosscheck_delta = p.delta();
  r.eta_bs_hat = p.eta_bs;
  r.alpha_hat = p.alpha;
  r.eta_hat = p.eta;
  r.eps_hat = p.eps;
  r.eps_hat_crosscorr = p.eps;
  r.var_theta = var_theta_hat(p, m);
  r.var_phi = var_phi_hat(p, m);
  r.var_eta = var_transmission_hat(p, m, z);
  r.var_eps = var_eps_hat(p, m);
  return r;
}

WorstCaseParams worst_case(const EstimationReport& r, const FiniteSizeConfig& cfg) {
  if (r.var_theta < 0 || r.var_phi < 0 || r.var_eta < 0 || r.var_eps < 0)
    throw DomainError("negative variance in estimation report");
  WorstCaseParams w;
  w.eta_low = std::max(1e-6, r.eta_hat - cfg.z * std::sqrt(r.var_eta));
  w.eps_up = std::max(0.0, r.eps_hat + cfg.z * std::sqrt(r.var_eps));
  w.delta_up = std::abs(r.delta_hat) + cfg.z * std::sqrt(r.var_theta + r.var_phi);
  return w;
}

double delta_n(double n, const FiniteSizeConfig& cfg) {
  if (!(n > 0)) throw DomainError("delta_n needs n > 0");
  if (std::isinf(n)) return 0.0;
  return 7 * std::sqrt(std::log2(2 / cfg.eps_smooth) / n);
}

KeyRateReport finite_key_rate(const PhysicalParams& p, const EstimationReport& r,
                              const FiniteSizeConfig& cfg, FiniteScheme scheme) {
  cfg.validate();
  const WorstCaseParams w = worst_case(r, cfg);
  PhysicalParams q = p;
  q.eta = std::min(1.0, w.eta_low);
  q.eps = w.eps_up;
  q.theta = w.delta_up * cfg.delta_split;
  q.phi = w.delta_up * (1 - cfg.delta_split);
  const KeyRateVariant v = scheme == FiniteScheme::Kn
                               ? KeyRateVariant{MiMode::True, HolevoMode::True}
                               : KeyRateVariant{MiMode::Ignorant, HolevoMode::True};
  KeyRateReport out = asymptotic_key_rate(q, v, cfg.security);
  const double k_inf = q.beta * out.mi - out.chi;
  if (scheme == FiniteScheme::Kn) {
    const double n = cfg.frac_key * cfg.n_total;
    out.rate = std::max(0.0, cfg.frac_key * (std::max(0.0, k_inf) - delta_n(n, cfg)));
    out.frac_key = cfg.frac_key;
  } else {
    out.rate = std::max(0.0, std::max(0.0, k_inf) - delta_n(cfg.n_total, cfg));
    out.frac_key = 1.0;
  }
  return out;
}

KeyRateReport finite_key_rate_model(const PhysicalParams& p, const FiniteSizeConfig& cfg,
                                    FiniteScheme scheme) {
  cfg.validate();
  const double m = scheme == FiniteScheme::Kn ? (1 - cfg.frac_key) * cfg.n_total : cfg.n_total;
  return finite_key_rate(p, model_report(p, m, cfg.z), cfg, scheme);
}

FractionResult optimize_fraction(const PhysicalParams& p, const FiniteSizeConfig& cfg) {
  FractionResult best;
  best.frac_key = -1;
  for (int k = 1; k <= 19; ++k) {
    FiniteSizeConfig c = cfg;
    c.frac_key = k / 20.0;
    const KeyRateReport r = finite_key_rate_model(p, c, FiniteScheme::Kn);
    if (best.frac_key < 0 || r.rate >= best.report.rate) {
      best.frac_key = c.frac_key;
      best.report = r;
    }
  }
  return best;
}

}  // namespace cvqkd
