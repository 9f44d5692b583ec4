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

#include "cvqkd/info_metrics.hpp"

#include <cmath>

#include "cvqkd/compensation.hpp"
#include "cvqkd/errors.hpp"

namespace cvqkd {

namespace {

double det_checked(const Eigen::Matrix2d& m, const char* what) {
  const double d = m.determinant();
  if (!(d > 0)) throw NumericError(what, Eigen::MatrixXd(m));
  return d;
}

Eigen::Matrix2d cond_a_on_b(const CovMat4& g) {
  return schur_condition(g.sym(), {2, 3}, zero_regularizer(2)).mat();
}

Eigen::Matrix2d cond_b_on_a(const CovMat4& g) {
  return schur_condition(g.sym(), {0, 1}, zero_regularizer(2)).mat();
}

}  // namespace

double ignorant_mi(const CovMat4& gamma) {
  const CovMat4 s = symmetrize(gamma);
  double total = 0;
  const int pairs[2][2] = {{0, 2}, {1, 3}};
  for (const auto& pr : pairs) {
    const double va = s(pr[0], pr[0]), vb = s(pr[1], pr[1]), c = s(pr[0], pr[1]);
    if (!(vb > 0)) throw NumericError("zero Bob variance in ignorant MI");
    const double cond = va - c * c / vb;
    if (!(cond > 0) || !(va > 0)) throw NumericError("singular conditional variance");
    total += 0.5 * std::log2(va / cond);
  }
  return total;
}

double true_mi(const CovMat4& gamma) {
  const double da = det_checked(gamma.gamma_a(), "singular Alice block");
  const double dc = det_checked(cond_a_on_b(gamma), "singular conditional matrix");
  return 0.5 * std::log2(da / dc);
}

MiBreakdown mi_decomposition(const CovMat4& gamma) {
  MiBreakdown out;
  out.mi_true = true_mi(gamma);
  out.mi_ignorant = ignorant_mi(gamma);

  const Eigen::Matrix2d gb = gamma.gamma_b();
  const Eigen::Matrix2d gba = cond_b_on_a(gamma);
  const double db = det_checked(gb, "singular Bob block");
  const double dba = det_checked(gba, "singular conditional Bob block");
  out.i_bb = 0.5 * std::log2(gb(0, 0) * gb(1, 1) / db);
  out.i_bb_cond = 0.5 * std::log2(gba(0, 0) * gba(1, 1) / dba);
  // Joint SNR: product of per-quadrature variance ratios of Bob given Alice.
  out.snr_term = 0.5 * std::log2(gb(0, 0) * gb(1, 1) / (gba(0, 0) * gba(1, 1)));
  return out;
}

double lost_mi_approx(const PhysicalParams& p) {
  p.validate();
  const double t = p.eta * p.eta_d;
  const double s = t * (p.v_m() + p.eps);
  const double a = s + 2;
  const double b = s * std::sin(p.theta + p.phi);
  return std::log2(a) - 0.5 * std::log2(a * a - b * b);
}

double lost_mi_as_printed(const PhysicalParams& p) {
  p.validate();
  const double eta = p.eta, vm = p.v_m(), eps = p.eps;
  const double a = eta * (vm + eps + 2 / (eta * eta));
  const double b = eta * (eps + vm) * std::sin(p.phi + p.theta);
  return std::log2(a) - 0.5 * std::log2(a * a + b * b);
}

}  // namespace cvqkd
