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

#include <string>
#include <vector>

#include "cvqkd/channel_model.hpp"
#include "cvqkd/compensation.hpp"
#include "cvqkd/gaussian_core.hpp"

namespace cvqkd {

enum class MiMode { True, Ignorant };
enum class HolevoMode { True, Symmetrized };

struct KeyRateVariant {
  MiMode mi = MiMode::True;
  HolevoMode holevo = HolevoMode::True;

  std::string name() const;  // "TT", "IT", "TI", "II"
  static KeyRateVariant parse(const std::string& name);
  static std::vector<KeyRateVariant> all();
};

struct KeyRateReport {
  KeyRateVariant variant;
  double mi = 0;
  double chi = 0;
  double rate = 0;  // max(0, beta*mi - chi)
  // False when the analysed covariance fits no physical state (parameter
  // estimation aborts); then chi is NaN and rate is 0.
  bool physical = true;
  double frac_key = 1;
};

struct SecurityOptions {
  // Force eta_bs = 0.5 for the whole analysis.
  bool balance_bs = false;
};

// Trusted description of Bob's receiver used to undo it before computing
// Eve's information.
struct ReceiverModel {
  double theta = 0;
  double phi = 0;
  double eta_bs = 0.5;
};

// Holevo information of Eve for reverse reconciliation, from a measured-data
// covariance. The receiver map is inverted to obtain Bob's input mode; Eve
// purifies Alice and that mode.
double holevo_from_gamma(const CovMat4& data, const ReceiverModel& rx, double alpha, double v_a);

double holevo_bound(const PhysicalParams& p, HolevoMode mode, const SecurityOptions& opt = {});

KeyRateReport asymptotic_key_rate(const PhysicalParams& p, KeyRateVariant v,
                                  const SecurityOptions& opt = {});

// Unfloored beta*mi - chi, used by bisection and finite-size code.
double raw_key_rate(const PhysicalParams& p, KeyRateVariant v, const SecurityOptions& opt = {});

// Rate from a measured covariance. `raw` must be untransformed. When
// `transform` is given the MI is taken on the transformed matrix; only the
// TT variant is allowed on that path, because symmetrizing after a
// transformation overestimates the key.
KeyRateReport key_rate_from_gamma(const CovMat4& raw, const ReceiverModel& rx, double alpha,
                                  double v_a, double beta, KeyRateVariant v,
                                  const TransformSpec* transform = nullptr);

double max_tolerable_noise(PhysicalParams p, KeyRateVariant v, const SecurityOptions& opt = {});

struct PhaseFluctuationRow {
  double v_m = 0;
  double rate_fixed = 0;    // sigma2 = 0
  double rate_exact = 0;    // E[cos] = exp(-sigma2/2)
  double rate_printed = 0;  // E[cos] = exp(-sigma2^2/4)
};

struct PhaseFluctuationSurface {
  double ecos_exact = 1;
  double ecos_printed = 1;
  std::vector<PhaseFluctuationRow> rows;
  double vm_opt_fixed = 0;
  double vm_opt_exact = 0;
  double vm_opt_printed = 0;
};

// K_TT over a modulation-variance grid with Alice-Bob correlations damped by
// the mean cosine of a Gaussian phase jitter of variance sigma2.
PhaseFluctuationSurface phase_fluctuation_penalty(double sigma2, const PhysicalParams& p,
                                                  const std::vector<double>& vm_grid);

double mean_cos_exact(double sigma2);
double mean_cos_printed(double sigma2);

}  // namespace cvqkd
