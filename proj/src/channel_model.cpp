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

#include "cvqkd/channel_model.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "cvqkd/errors.hpp"

namespace cvqkd {

namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw DomainError(msg);
}

}  // namespace

void PhysicalParams::validate() const {
  const double half_pi = std::numbers::pi / 2;
  require(std::isfinite(eta) && eta > 0 && eta <= 1, "eta must be in (0,1]");
  require(std::isfinite(eps) && eps >= 0, "eps must be >= 0");
  require(std::isfinite(theta) && std::abs(theta) < half_pi, "|theta| must be < pi/2");
  require(std::isfinite(phi) && std::abs(phi) < half_pi, "|phi| must be < pi/2");
  require(std::isfinite(eta_d) && eta_d > 0 && eta_d <= 1, "eta_d must be in (0,1]");
  require(std::isfinite(eta_bs) && eta_bs > 0 && eta_bs < 1, "eta_bs must be in (0,1)");
  require(std::isfinite(alpha) && alpha > 0, "alpha must be > 0");
  require(std::isfinite(v_a) && v_a > 0, "v_a must be > 0");
  require(std::isfinite(beta) && beta > 0 && beta < 1, "beta must be in (0,1)");
  require(tau_x() > 0 && tau_x() < 1, "tau_x = eta_d*eta_bs must be in (0,1)");
  require(tau_p() > 0 && tau_p() < 1, "tau_p = eta_d*(1-eta_bs) must be in (0,1)");
}

CovMat4 build_pm_covariance(const PhysicalParams& p) {
  p.validate();
  const double tx = p.tau_x(), tp = p.tau_p();
  const double w = p.v_m() + p.eps;
  const double va = p.v_a, al = p.alpha;
  Eigen::Matrix4d g = Eigen::Matrix4d::Zero();
  g(0, 0) = g(1, 1) = va;
  g(0, 2) = std::sqrt(p.eta * tx) * std::cos(p.theta) * va * al;
  g(0, 3) = -std::sqrt(p.eta * tp) * std::sin(p.phi) * va * al;
  g(1, 2) = std::sqrt(p.eta * tx) * std::sin(p.theta) * va * al;
  g(1, 3) = -std::sqrt(p.eta * tp) * std::cos(p.phi) * va * al;
  g(2, 2) = 1 + p.eta * tx * w;
  g(3, 3) = 1 + p.eta * tp * w;
  g(2, 3) = -p.eta * std::sqrt(tx * tp) * w * std::sin(p.phi + p.theta);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < i; ++j) g(i, j) = g(j, i);
  return CovMat4(g);
}

SymMat eb_from_gamma(const CovMat4& gamma, double alpha, double v_a) {
  const double vmod = alpha * alpha * v_a;
  if (!(vmod > 0)) throw DomainError("no modulation, EB mapping singular");
  const double v = vmod + 1;
  const double r = alpha * std::sqrt((v + 1) / (v - 1));
  Eigen::MatrixXd e = gamma.mat();
  e(0, 0) = e(1, 1) = v;
  e(0, 1) = e(1, 0) = 0;
  e.topRightCorner(2, 2) *= r;
  e.bottomLeftCorner(2, 2) *= r;
  return SymMat(e);
}

SymMat build_eb_covariance(const PhysicalParams& p) {
  if (!(p.alpha * p.alpha * p.v_a > 0))
    throw DomainError("no modulation, EB mapping singular");
  return eb_from_gamma(build_pm_covariance(p), p.alpha, p.v_a);
}

}  // namespace cvqkd
