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
#include "cvqkd/gaussian_core.hpp"

namespace cvqkd {

struct MiBreakdown {
  double mi_true = 0;
  double mi_ignorant = 0;
  double snr_term = 0;   // log2(1+SNR), both quadratures jointly
  double i_bb = 0;       // I(B^x:B^p)
  double i_bb_cond = 0;  // I(B^x|A : B^p|A)
};

// Per-quadrature SNR formula on the symmetrized matrix.
double ignorant_mi(const CovMat4& gamma);

// 1/2 log2(|gamma_A| / |gamma_A|B|) with classical conditioning.
double true_mi(const CovMat4& gamma);

MiBreakdown mi_decomposition(const CovMat4& gamma);

// Closed-form I(B^x:B^p) for a balanced receiver with T = eta*eta_d.
// Exact when eta_bs = 0.5; see README.
double lost_mi_approx(const PhysicalParams& p);

// Literal form with A = eta(V_m + eps + 2/eta^2). Kept for comparison; it
// is non-positive for every input.
double lost_mi_as_printed(const PhysicalParams& p);

}  // namespace cvqkd
