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

#include "cvqkd/simulator.hpp"

#include <cmath>

#include "cvqkd/errors.hpp"
#include "cvqkd/parallel.hpp"
#include "cvqkd/philox.hpp"

namespace cvqkd {

void QuadratureFrame::resize(std::size_t m) {
  x_a.assign(m, 0.0);
  p_a.assign(m, 0.0);
  x_b.assign(m, 0.0);
  p_b.assign(m, 0.0);
}

void QuadratureFrame::validate() const {
  const std::size_t n = x_a.size();
  if (p_a.size() != n || x_b.size() != n || p_b.size() != n)
    throw DomainError("frame columns have different lengths");
  for (const auto* col : {&x_a, &p_a, &x_b, &p_b})
    for (double v : *col)
      if (!std::isfinite(v)) throw DomainError("frame contains non-finite values");
}

namespace {

// Six Philox blocks per sample give the twelve normals below.
constexpr std::uint32_t kBlocks = 6;

void fill_normals(std::uint64_t seed, std::uint64_t frame, std::uint64_t sample,
                  double out[12]) {
  const Philox4x32::Key key = {static_cast<std::uint32_t>(seed),
                               static_cast<std::uint32_t>(seed >> 32)};
  for (std::uint32_t b = 0; b < kBlocks; ++b) {
    const Philox4x32::Counter ctr = {
        static_cast<std::uint32_t>(sample),
        static_cast<std::uint32_t>(sample >> 32) | (b << 24),
        static_cast<std::uint32_t>(frame), static_cast<std::uint32_t>(frame >> 32)};
    const auto z = philox_normal_pair(Philox4x32::generate(ctr, key));
    out[2 * b] = z[0];
    out[2 * b + 1] = z[1];
  }
}

}  // namespace

QuadratureFrame generate_frame(const SimConfig& cfg, std::uint64_t frame_idx, unsigned threads) {
  const PhysicalParams& p = cfg.params;
  p.validate();
  if (cfg.m < 1) throw DomainError("m must be >= 1");
  if (cfg.m >= (std::size_t{1} << 56)) throw DomainError("m too large for the counter layout");

  QuadratureFrame f;
  f.resize(cfg.m);
  f.seed = cfg.seed;
  f.frame_idx = frame_idx;
  f.params = p;

  const double sva = std::sqrt(p.v_a), se = std::sqrt(p.eps);
  const double se_ = std::sqrt(p.eta), sl = std::sqrt(1 - p.eta);
  const double sd = std::sqrt(p.eta_d), sdl = std::sqrt(1 - p.eta_d);
  const double sb = std::sqrt(p.eta_bs), sbl = std::sqrt(1 - p.eta_bs);
  const double ct = std::cos(p.theta), st = std::sin(p.theta);
  const double cf = std::cos(p.phi), sf = std::sin(p.phi);

  parallel_for(
      cfg.m,
      [&](std::size_t lo, std::size_t hi) {
        double z[12];
        for (std::size_t i = lo; i < hi; ++i) {
          fill_normals(cfg.seed, frame_idx, i, z);
          const double xa = sva * z[0], pa = sva * z[1];
          const double xs = z[2], ps = z[3];          // signal vacuum
          const double xn = se * z[4], pn = se * z[5];  // channel noise
          const double xc = z[6], pc = z[7];          // loss vacuum
          const double xv = z[8], pv = z[9];          // beamsplitter vacuum
          const double xd = z[10], pd = z[11];        // detector vacua
          const double xin = se_ * (xs + p.alpha * xa + xn) + sl * xc;
          const double pin = se_ * (ps + p.alpha * pa + pn) + sl * pc;
          f.x_a[i] = xa;
          f.p_a[i] = pa;
          f.x_b[i] = sd * (sb * (ct * xin + st * pin) + sbl * (ct * xv + st * pv)) + sdl * xd;
          f.p_b[i] = -sd * (sbl * (cf * pin + sf * xin) - sb * (cf * pv + sf * xv)) + sdl * pd;
        }
      },
      threads);
  return f;
}

CovMat4 empirical_covariance(const QuadratureFrame& frame) {
  const std::size_t m = frame.m();
  if (m < 2) throw DomainError("empirical covariance needs m >= 2");
  const std::vector<double>* cols[4] = {&frame.x_a, &frame.p_a, &frame.x_b, &frame.p_b};
  double mean[4];
  for (int c = 0; c < 4; ++c) {
    long double s = 0;
    for (double v : *cols[c]) s += v;
    mean[c] = static_cast<double>(s / m);
  }
  Eigen::Matrix4d g;
  for (int a = 0; a < 4; ++a)
    for (int b = a; b < 4; ++b) {
      long double s = 0;
      const auto& u = *cols[a];
      const auto& v = *cols[b];
      for (std::size_t i = 0; i < m; ++i) s += (u[i] - mean[a]) * (v[i] - mean[b]);
      g(a, b) = g(b, a) = static_cast<double>(s / (m - 1));
    }
  for (int c = 0; c < 4; ++c)
    if (g(c, c) < 1e-12) throw NumericError("degenerate frame");
  return CovMat4(g);
}

Eigen::Matrix4d covariance_standard_errors(const CovMat4& gamma, double m) {
  Eigen::Matrix4d se;
  const auto& g = gamma.mat();
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) se(i, j) = std::sqrt((g(i, i) * g(j, j) + g(i, j) * g(i, j)) / m);
  return se;
}

}  // namespace cvqkd
