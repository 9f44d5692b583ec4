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

#include <Eigen/Dense>
#include <vector>

namespace cvqkd {

// Physicality tolerance shared by every check in this module.
inline constexpr double kPhysTol = 1e-9;

// Real symmetric matrix of even dimension.
class SymMat {
 public:
  SymMat() = default;
  explicit SymMat(Eigen::MatrixXd m);
  static SymMat identity(int dim);

  int dim() const { return static_cast<int>(m_.rows()); }
  double operator()(int i, int j) const { return m_(i, j); }
  const Eigen::MatrixXd& mat() const { return m_; }

 private:
  Eigen::MatrixXd m_;
};

// Covariance of (x_a, p_a, x_B, p_B). Index constants below name the slots.
class CovMat4 {
 public:
  enum Index { XA = 0, PA = 1, XB = 2, PB = 3 };

  CovMat4();
  explicit CovMat4(const Eigen::Matrix4d& m);
  explicit CovMat4(const SymMat& s);

  const Eigen::Matrix4d& mat() const { return m_; }
  double operator()(int i, int j) const { return m_(i, j); }
  SymMat sym() const { return SymMat(Eigen::MatrixXd(m_)); }

  Eigen::Matrix2d gamma_a() const { return m_.topLeftCorner<2, 2>(); }
  Eigen::Matrix2d gamma_b() const { return m_.bottomRightCorner<2, 2>(); }
  Eigen::Matrix2d gamma_c() const { return m_.topRightCorner<2, 2>(); }

  double va_x() const { return m_(XA, XA); }
  double va_p() const { return m_(PA, PA); }
  double vb_x() const { return m_(XB, XB); }
  double vb_p() const { return m_(PB, PB); }
  double sigma_x() const { return m_(XA, XB); }
  double sigma_p() const { return m_(PA, PB); }
  double s_axbp() const { return m_(XA, PB); }
  double s_apbx() const { return m_(PA, XB); }
  double s_bxbp() const { return m_(XB, PB); }
  double s_axap() const { return m_(XA, PA); }

  // Provenance used by the security module to refuse symmetrizing
  // already-transformed data.
  bool transformed() const { return transformed_; }
  bool symmetrized_after_transform() const { return sym_after_transform_; }
  void mark_transformed() { transformed_ = true; }
  void mark_symmetrized() {
    if (transformed_) sym_after_transform_ = true;
  }

 private:
  Eigen::Matrix4d m_;
  bool transformed_ = false;
  bool sym_after_transform_ = false;
};

// Standard symplectic form with blocks [[0,1],[-1,0]].
Eigen::MatrixXd symplectic_form(int modes);

std::vector<double> symplectic_eigenvalues(const SymMat& cov);
double g_entropy(double x);
double von_neumann_entropy(const SymMat& cov);

// gamma_kept - C (gamma_meas + reg)^-1 C^T. Indices are zero-based.
SymMat schur_condition(const SymMat& cov, const std::vector<int>& measured,
                       const SymMat& regularizer);

// Zero regularizer of the given dimension.
SymMat zero_regularizer(int dim);

}  // namespace cvqkd
