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

#include "cvqkd/security.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cvqkd/errors.hpp"
#include "cvqkd/info_metrics.hpp"
#include "cvqkd/parallel.hpp"

namespace cvqkd {

std::string KeyRateVariant::name() const {
  std::string s;
  s += mi == MiMode::True ? 'T' : 'I';
  s += holevo == HolevoMode::True ? 'T' : 'I';
  return s;
}

KeyRateVariant KeyRateVariant::parse(const std::string& name) {
  if (name.size() != 2 || (name[0] != 'T' && name[0] != 'I') || (name[1] != 'T' && name[1] != 'I'))
    throw ConfigError("unknown key-rate variant '" + name + "'");
  return {name[0] == 'T' ? MiMode::True : MiMode::Ignorant,
          name[1] == 'T' ? HolevoMode::True : HolevoMode::Symmetrized};
}

std::vector<KeyRateVariant> KeyRateVariant::all() {
  return {{MiMode::True, HolevoMode::True},
          {MiMode::Ignorant, HolevoMode::True},
          {MiMode::True, HolevoMode::Symmetrized},
          {MiMode::Ignorant, HolevoMode::Symmetrized}};
}

double holevo_from_gamma(const CovMat4& data, const ReceiverModel& rx, double alpha, double v_a) {
  if (!(rx.eta_bs > 0 && rx.eta_bs < 1)) throw DomainError("receiver eta_bs must be in (0,1)");
  const Eigen::MatrixXd e = eb_from_gamma(data, alpha, v_a).mat();

  // Data = L * mode + beamsplitter vacuum with covariance N. The mode is
  // written in (X, -P) so that the builder's sign of p_B is absorbed.
  const double b = rx.eta_bs, sb = std::sqrt(b), sbl = std::sqrt(1 - b);
  Eigen::Matrix2d l;
  l << sb * std::cos(rx.theta), -sb * std::sin(rx.theta), -sbl * std::sin(rx.phi),
      sbl * std::cos(rx.phi);
  const double c = std::sqrt(b * (1 - b)) * std::sin(rx.theta + rx.phi);
  Eigen::Matrix2d n;
  n << 1 - b, c, c, b;
  if (std::abs(l.determinant()) < 1e-12) throw NumericError("receiver map is singular");
  const Eigen::Matrix2d li = l.inverse();

  Eigen::MatrixXd mode = e;
  mode.bottomRightCorner(2, 2) = li * (e.bottomRightCorner(2, 2) - n) * li.transpose();
  mode.topRightCorner(2, 2) = e.topRightCorner(2, 2) * li.transpose();
  mode.bottomLeftCorner(2, 2) = mode.topRightCorner(2, 2).transpose();
  mode = (0.5 * (mode + mode.transpose())).eval();

  const double s_ab = von_neumann_entropy(SymMat(mode));
  const double s_a_given_b =
      von_neumann_entropy(schur_condition(SymMat(e), {2, 3}, zero_regularizer(2)));
  return s_ab - s_a_given_b;
}

namespace {

PhysicalParams effective(const PhysicalParams& p, const SecurityOptions& opt) {
  p.validate();
  PhysicalParams q = p;
  if (opt.balance_bs) q.eta_bs = 0.5;
  return q;
}

double chi_for(const CovMat4& g, const PhysicalParams& q, HolevoMode mode) {
  if (mode == HolevoMode::True)
    return holevo_from_gamma(g, {q.theta, q.phi, q.eta_bs}, q.alpha, q.v_a);
  return holevo_from_gamma(symmetrize(g), {0, 0, q.eta_bs}, q.alpha, q.v_a);
}

// Symmetrized data can describe no physical channel (decorrelation in one
// quadrature with no matching noise in the other). Parameter estimation
// would abort on such data, so the rate is zero and chi is reported as NaN.
template <class F>
void fill_chi(KeyRateReport& r, bool abort_allowed, F&& chi) {
  if (!abort_allowed) {
    r.chi = chi();
    return;
  }
  try {
    r.chi = chi();
  } catch (const NumericError&) {
    r.chi = std::numeric_limits<double>::quiet_NaN();
    r.physical = false;
  }
}

void finish(KeyRateReport& r, double beta) {
  r.rate = r.physical ? std::max(0.0, beta * r.mi - r.chi) : 0.0;
}

}  // namespace

double holevo_bound(const PhysicalParams& p, HolevoMode mode, const SecurityOptions& opt) {
  const PhysicalParams q = effective(p, opt);
  return chi_for(build_pm_covariance(q), q, mode);
}

KeyRateReport asymptotic_key_rate(const PhysicalParams& p, KeyRateVariant v,
                                  const SecurityOptions& opt) {
  const PhysicalParams q = effective(p, opt);
  const CovMat4 g = build_pm_covariance(q);
  KeyRateReport r;
  r.variant = v;
  r.mi = v.mi == MiMode::True ? true_mi(g) : ignorant_mi(g);
  fill_chi(r, v.holevo == HolevoMode::Symmetrized, [&] { return chi_for(g, q, v.holevo); });
  finish(r, q.beta);
  return r;
}

double raw_key_rate(const PhysicalParams& p, KeyRateVariant v, const SecurityOptions& opt) {
  const KeyRateReport r = asymptotic_key_rate(p, v, opt);
  if (!r.physical) return -std::numeric_limits<double>::infinity();
  return effective(p, opt).beta * r.mi - r.chi;
}

KeyRateReport key_rate_from_gamma(const CovMat4& raw, const ReceiverModel& rx, double alpha,
                                  double v_a, double beta, KeyRateVariant v,
                                  const TransformSpec* transform) {
  if (raw.symmetrized_after_transform())
    throw DomainError("symmetrization is not allowed after the transformation");
  if (raw.transformed())
    throw DomainError("key rate needs the untransformed covariance plus the transform spec");
  if (transform && (v.mi == MiMode::Ignorant || v.holevo == HolevoMode::Symmetrized))
    throw DomainError("symmetrization is not allowed after the transformation");
  KeyRateReport r;
  r.variant = v;
  if (v.mi == MiMode::True)
    r.mi = true_mi(transform ? apply_transform_gamma(raw, *transform) : raw);
  else
    r.mi = ignorant_mi(raw);
  // Measured data may be unphysical for either mode (e.g. a negative noise
  // estimate at small m); that aborts too.
  fill_chi(r, true, [&] {
    return v.holevo == HolevoMode::True
               ? holevo_from_gamma(raw, rx, alpha, v_a)
               : holevo_from_gamma(symmetrize(raw), {0, 0, rx.eta_bs}, alpha, v_a);
  });
  finish(r, beta);
  return r;
}

double max_tolerable_noise(PhysicalParams p, KeyRateVariant v, const SecurityOptions& opt) {
  p.eps = 0;
  if (raw_key_rate(p, v, opt) <= 0) return 0.0;
  double lo = 0, hi = 0.05;
  auto rate_at = [&](double e) {
    PhysicalParams q = p;
    q.eps = e;
    return raw_key_rate(q, v, opt);
  };
  while (rate_at(hi) > 0) {
    lo = hi;
    hi *= 2;
    if (hi > 1e3) throw NumericError("no noise bound found below 1e3 SNU");
  }
  for (int it = 0; it < 60 && hi - lo > 1e-7; ++it) {
    const double mid = 0.5 * (lo + hi);
    (rate_at(mid) > 0 ? lo : hi) = mid;
  }
  return lo;
}

double mean_cos_exact(double sigma2) { return std::exp(-sigma2 / 2); }
double mean_cos_printed(double sigma2) { return std::exp(-sigma2 * sigma2 / 4); }

namespace {

double damped_tt(const PhysicalParams& q, double ecos) {
  Eigen::Matrix4d m = build_pm_covariance(q).mat();
  m.topRightCorner<2, 2>() *= ecos;
  m.bottomLeftCorner<2, 2>() *= ecos;
  const CovMat4 g(m);
  const double mi = true_mi(g);
  const double chi = holevo_from_gamma(g, {q.theta, q.phi, q.eta_bs}, q.alpha, q.v_a);
  return std::max(0.0, q.beta * mi - chi);
}

}  // namespace

PhaseFluctuationSurface phase_fluctuation_penalty(double sigma2, const PhysicalParams& p,
                                                  const std::vector<double>& vm_grid) {
  if (!(sigma2 >= 0)) throw DomainError("phase variance must be >= 0");
  p.validate();
  PhaseFluctuationSurface s;
  s.ecos_exact = mean_cos_exact(sigma2);
  s.ecos_printed = mean_cos_printed(sigma2);
  s.rows.resize(vm_grid.size());
  parallel_for(vm_grid.size(), [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
      PhysicalParams q = p;
      q.v_a = vm_grid[i] / (p.alpha * p.alpha);
      auto& row = s.rows[i];
      row.v_m = vm_grid[i];
      row.rate_fixed = damped_tt(q, 1.0);
      row.rate_exact = damped_tt(q, s.ecos_exact);
      row.rate_printed = damped_tt(q, s.ecos_printed);
    }
  });
  auto argmax = [&](double PhaseFluctuationRow::*field) {
    double best = -1, at = 0;
    for (const auto& r : s.rows)
      if (r.*field > best) best = r.*field, at = r.v_m;
    return at;
  };
  s.vm_opt_fixed = argmax(&PhaseFluctuationRow::rate_fixed);
  s.vm_opt_exact = argmax(&PhaseFluctuationRow::rate_exact);
  s.vm_opt_printed = argmax(&PhaseFluctuationRow::rate_printed);
  return s;
}

}  // namespace cvqkd
