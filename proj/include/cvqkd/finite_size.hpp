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

#include "cvqkd/channel_model.hpp"
#include "cvqkd/report.hpp"
#include "cvqkd/security.hpp"

namespace cvqkd {

struct FiniteSizeConfig {
  double n_total = 1e8;
  double frac_key = 0.5;
  double eps_pe = 1e-10;
  double z = 6.5;
  double eps_smooth = 1e-10;
  // Share of the worst-case imbalance assigned to theta; the rest goes to phi.
  double delta_split = 1.0;
  SecurityOptions security;

  void validate() const;
};

enum class FiniteScheme { Kn, KN };

struct WorstCaseParams {
  double eta_low = 1;
  double eps_up = 0;
  double delta_up = 0;
};

struct AngleBounds {
  double lo = 0;
  double hi = 0;
};

// Conservative large-m variance of the imbalance estimators. It bounds the
// first-order value from above.
double var_theta_hat(const PhysicalParams& p, double m);
double var_phi_hat(const PhysicalParams& p, double m);

// First-order delta-method variance of atan(s/sigma) for comparison.
double var_theta_first_order(const PhysicalParams& p, double m);
double var_phi_first_order(const PhysicalParams& p, double m);

double var_c_ab(const PhysicalParams& p, double m);

// Transmission-estimator variance. The angle term integrates a Gaussian of
// the conservative angle variances over the given box by Gauss-Legendre
// quadrature and checks convergence against twice the nodes.
double var_transmission_hat(const PhysicalParams& p, double m, AngleBounds theta_bounds,
                            AngleBounds phi_bounds, int nodes = 64);
// Same with the box at +-z standard deviations around the true angles.
double var_transmission_hat(const PhysicalParams& p, double m, double z);

// Variance of a single-quadrature conditional noise estimate with
// Bob-referred noise t_eps.
double var_noise_hat(double t_eps, double m);

// Variance of the channel-referred eps estimate averaged over quadratures.
double var_eps_hat(const PhysicalParams& p, double m);

// Report whose point estimates equal p and whose variances are the model
// values at m samples.
EstimationReport model_report(const PhysicalParams& p, double m, double z = 6.5);

WorstCaseParams worst_case(const EstimationReport& r, const FiniteSizeConfig& cfg);

double delta_n(double n, const FiniteSizeConfig& cfg);

// `r` must carry variances at the scheme's estimation size: (1-f)N for K_n,
// N for K_N. p supplies the known quantities (beta, v_a, alpha, eta_d, eta_bs).
KeyRateReport finite_key_rate(const PhysicalParams& p, const EstimationReport& r,
                              const FiniteSizeConfig& cfg, FiniteScheme scheme);

// Same, with the report built by model_report at the scheme's size.
KeyRateReport finite_key_rate_model(const PhysicalParams& p, const FiniteSizeConfig& cfg,
                                    FiniteScheme scheme);

struct FractionResult {
  double frac_key = 0;
  KeyRateReport report;
};

// Grid search over 0.05, 0.10, ..., 0.95; ties go to the larger fraction.
FractionResult optimize_fraction(const PhysicalParams& p, const FiniteSizeConfig& cfg);

}  // namespace cvqkd
