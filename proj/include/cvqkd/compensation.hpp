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
#include "cvqkd/simulator.hpp"

namespace cvqkd {

enum class Side { Alice, Bob };

// Local linear map on one side: x' = cos(T) x + sin(T) p,
// p' = sin(F) x + cos(F) p. T = F = 0 is the identity.
struct TransformSpec {
  Side side = Side::Alice;
  double theta_cap = 0;
  double phi_cap = 0;
  bool feasible = true;  // Bob side only: sign rule against s_bxbp

  Eigen::Matrix2d matrix() const;
};

TransformSpec alice_transform_angles(const CovMat4& gamma);
TransformSpec bob_transform_angles(const CovMat4& gamma);

CovMat4 apply_transform_gamma(const CovMat4& gamma, const TransformSpec& t);
QuadratureFrame apply_transform_frame(const QuadratureFrame& frame, const TransformSpec& t);

// Zero all cross-quadrature entries. Marks provenance when the input was
// already transformed.
CovMat4 symmetrize(const CovMat4& gamma);

}  // namespace cvqkd
