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

#pragma once

#include "cvqkd/gaussian_core.hpp"

namespace cvqkd {

// Ground-truth link and receiver parameters. Angles in radians.
struct PhysicalParams {
  double eta = 1.0;     // channel transmittance
  double eps = 0.0;     // excess noise, SNU
  double theta = 0.0;   // x-quadrature phase imbalance
  double phi = 0.0;     // p-quadrature phase imbalance
  double eta_d = 1.0;   // detector efficiency
  double eta_bs = 0.5;  // heterodyne beamsplitter transmission
  double alpha = 1.0;   // modulation rescaling
  double v_a = 2.0;     // modulation variance per quadrature, SNU
  double beta = 0.95;   // reconciliation efficiency

  double tau_x() const { return eta_d * eta_bs; }
  double tau_p() const { return eta_d * (1.0 - eta_bs); }
  double v_m() const { return alpha * alpha * v_a; }
  double delta() const { return theta + phi; }

  // Throws DomainError with a description of the first violated invariant.
  void validate() const;
};

CovMat4 build_pm_covariance(const PhysicalParams& p);

// Data-level entanglement-based matrix: Alice's diagonal becomes
// V = alpha^2 v_a + 1 and her correlations with Bob are rescaled so that the
// cross terms take the two-mode squeezed vacuum form sqrt(eta tau)sqrt(V^2-1).
SymMat build_eb_covariance(const PhysicalParams& p);
SymMat eb_from_gamma(const CovMat4& gamma, double alpha, double v_a);

}  // namespace cvqkd
