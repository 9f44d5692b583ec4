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

#include <cstddef>
#include <cstdint>
#include <vector>

#include "cvqkd/channel_model.hpp"
#include "cvqkd/gaussian_core.hpp"

namespace cvqkd {

// m samples of (x_a, p_a, x_b, p_b) plus the metadata that produced them.
struct QuadratureFrame {
  std::vector<double> x_a, p_a, x_b, p_b;
  std::uint64_t seed = 0;
  std::uint64_t frame_idx = 0;
  PhysicalParams params;
  bool snu = true;          // Bob columns are in shot-noise units
  bool transformed = false;

  std::size_t m() const { return x_a.size(); }
  void resize(std::size_t m);
  // Throws DomainError on ragged columns or non-finite values.
  void validate() const;
};

struct SimConfig {
  PhysicalParams params;
  std::size_t m = 1000;
  std::size_t frames = 1;
  std::uint64_t seed = 0;
};

// Frame content depends only on (seed, frame_idx, sample index), never on
// the thread count.
QuadratureFrame generate_frame(const SimConfig& cfg, std::uint64_t frame_idx,
                               unsigned threads = 0);

// Mean-subtracted sample covariance with divisor m-1.
CovMat4 empirical_covariance(const QuadratureFrame& frame);

// Standard error of every sample covariance entry under Gaussianity:
// sqrt((G_ii G_jj + G_ij^2) / m).
Eigen::Matrix4d covariance_standard_errors(const CovMat4& gamma, double m);

}  // namespace cvqkd
