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

#include "cvqkd/compensation.hpp"

#include <cmath>
#include <numbers>

#include "cvqkd/errors.hpp"
#include "cvqkd/parallel.hpp"

namespace cvqkd {

namespace {

void check_spec(const TransformSpec& t) {
  const double half_pi = std::numbers::pi / 2;
  if (!(std::abs(t.theta_cap) < half_pi) || !(std::abs(t.phi_cap) < half_pi))
    throw DomainError("transform angles must satisfy |angle| < pi/2");
  if (std::abs(t.matrix().determinant()) < 1e-9) throw NumericError("degenerate transform");
}

void check_sigmas(const CovMat4& g) {
  if (g.sigma_x() == 0 || g.sigma_p() == 0) throw DomainError("no correlation to align");
}

int sign(double v) { return (v > 0) - (v < 0); }

}  // namespace

Eigen::Matrix2d TransformSpec::matrix() const {
  Eigen::Matrix2d m;
  m << std::cos(theta_cap), std::sin(theta_cap), std::sin(phi_cap), std::cos(phi_cap);
  return m;
}

TransformSpec alice_transform_angles(const CovMat4& g) {
  check_sigmas(g);
  if (g.sigma_x() < 0) throw DomainError("negative sigma_x is not supported");
  TransformSpec t;
  t.side = Side::Alice;
  t.theta_cap = std::atan(g.s_apbx() / g.sigma_x());
  t.phi_cap = std::atan(g.s_axbp() / g.sigma_p());
  return t;
}

TransformSpec bob_transform_angles(const CovMat4& g) {
  check_sigmas(g);
  if (g.sigma_x() < 0) throw DomainError("negative sigma_x is not supported");
  TransformSpec t;
  t.side = Side::Bob;
  t.theta_cap = std::atan(g.s_axbp() / g.sigma_x());
  t.phi_cap = std::atan(g.s_apbx() / g.sigma_p());
  // Feasible when neither angle shares the sign of the Bob-Bob correlation.
  const int s = sign(g.s_bxbp());
  t.feasible = sign(t.theta_cap) * s <= 0 && sign(t.phi_cap) * s <= 0;
  return t;
}

CovMat4 apply_transform_gamma(const CovMat4& gamma, const TransformSpec& t) {
  check_spec(t);
  Eigen::Matrix4d f = Eigen::Matrix4d::Identity();
  if (t.side == Side::Alice)
    f.topLeftCorner<2, 2>() = t.matrix();
  else
    f.bottomRightCorner<2, 2>() = t.matrix();
  CovMat4 out(Eigen::Matrix4d(f * gamma.mat() * f.transpose()));
  if (gamma.transformed()) out.mark_transformed();
  out.mark_transformed();
  return out;
}

QuadratureFrame apply_transform_frame(const QuadratureFrame& frame, const TransformSpec& t) {
  check_spec(t);
  QuadratureFrame out = frame;
  const Eigen::Matrix2d m = t.matrix();
  const bool alice = t.side == Side::Alice;
  const std::vector<double>& xs = alice ? frame.x_a : frame.x_b;
  const std::vector<double>& ps = alice ? frame.p_a : frame.p_b;
  std::vector<double>& xo = alice ? out.x_a : out.x_b;
  std::vector<double>& po = alice ? out.p_a : out.p_b;
  parallel_for(frame.m(), [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
      xo[i] = m(0, 0) * xs[i] + m(0, 1) * ps[i];
      po[i] = m(1, 0) * xs[i] + m(1, 1) * ps[i];
    }
  });
  out.transformed = true;
  return out;
}

CovMat4 symmetrize(const CovMat4& gamma) {
  Eigen::Matrix4d m = gamma.mat();
  const int pairs[4][2] = {{0, 1}, {0, 3}, {1, 2}, {2, 3}};
  for (const auto& pr : pairs) m(pr[0], pr[1]) = m(pr[1], pr[0]) = 0;
  CovMat4 out(m);
  if (gamma.transformed()) {
    out.mark_transformed();
    out.mark_symmetrized();
  }
  if (gamma.symmetrized_after_transform()) out.mark_symmetrized();
  return out;
}

}  // namespace cvqkd
