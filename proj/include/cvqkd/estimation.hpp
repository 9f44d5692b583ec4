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

#include <functional>

#include "cvqkd/finite_size.hpp"
#include "cvqkd/gaussian_core.hpp"
#include "cvqkd/report.hpp"
#include "cvqkd/simulator.hpp"

namespace cvqkd {

// Quantities the estimators take as calibrated inputs rather than estimate.
struct KnownInputs {
  double alpha = 1;
  double v_a = 2;
  double eta_d = 1;
};

struct ImbalanceEstimate {
  double theta_hat = 0;
  double phi_hat = 0;
  double crosscheck_delta = 0;
};

struct AlphaEstimate {
  double alpha_hat = 0;
  double alpha_x = 0;
  double alpha_p = 0;
  double rel_diff = 0;
};

enum class NoiseMode { Conditional, CrossCorr };

ImbalanceEstimate estimate_imbalance(const CovMat4& g);
double estimate_eta_bs(const CovMat4& g);
AlphaEstimate estimate_alpha(const CovMat4& g, double eta, double v_a, double eta_d);

double estimate_transmission(const CovMat4& g, double alpha, double v_a, double eta_d);
// Uses the raw correlator (1/m) sum(x_a x_b - p_a p_b) and angles from the
// frame's empirical covariance.
double estimate_transmission(const QuadratureFrame& f, double alpha, double v_a, double eta_d);

double estimate_excess_noise(const CovMat4& g, NoiseMode mode, double eta, double eta_d);

struct NormalizationResult {
  QuadratureFrame frame;
  double vn_x = 1;
  double vn_p = 1;
};

NormalizationResult shot_noise_normalize(const QuadratureFrame& raw, double v_elec, double theta,
                                         double phi, double eta_bs);

// Variance of f(Gamma_hat) for a Gaussian sample covariance of m samples,
// by finite-difference gradients over the ten distinct entries.
double delta_method_variance(const CovMat4& g, double m,
                             const std::function<double(const CovMat4&)>& f);

// Full report from a covariance of m samples. Variances are the model
// formulas evaluated at the point estimates.
EstimationReport estimate_all(const CovMat4& g, double m, const KnownInputs& known,
                              double z = 6.5);
EstimationReport estimate_all(const QuadratureFrame& f, const KnownInputs& known, double z = 6.5);

// PhysicalParams assembled from a report and the known inputs.
PhysicalParams params_from_report(const EstimationReport& r, const KnownInputs& known,
                                  double beta);

}  // namespace cvqkd
