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

#include "cvqkd/gaussian_core.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "cvqkd/errors.hpp"

namespace cvqkd {

namespace {

void check_symmetric(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) throw DomainError("matrix is not square");
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = i + 1; j < m.cols(); ++j)
      if (std::abs(m(i, j) - m(j, i)) > 1e-12 * scale)
        throw DomainError("matrix is not symmetric");
  if (!m.allFinite()) throw DomainError("matrix has non-finite entries");
}

}  // namespace

SymMat::SymMat(Eigen::MatrixXd m) : m_(std::move(m)) {
  check_symmetric(m_);
  if (m_.rows() == 0 || m_.rows() % 2 != 0)
    throw DomainError("dimension must be even and positive");
  m_ = 0.5 * (m_ + m_.transpose()).eval();
}

SymMat SymMat::identity(int dim) {
  return SymMat(Eigen::MatrixXd::Identity(dim, dim));
}

CovMat4::CovMat4() : m_(Eigen::Matrix4d::Identity()) {}

CovMat4::CovMat4(const Eigen::Matrix4d& m) : m_(m) {
  check_symmetric(m_);
  m_ = 0.5 * (m_ + m_.transpose()).eval();
  for (int i = 0; i < 4; ++i)
    if (m_(i, i) < 0) throw DomainError("negative variance on the diagonal");
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(m_, Eigen::EigenvaluesOnly);
  const double scale = std::max(1.0, m_.diagonal().maxCoeff());
  if (es.eigenvalues().minCoeff() < -kPhysTol * scale)
    throw DomainError("covariance is not positive semidefinite");
}

CovMat4::CovMat4(const SymMat& s) {
  if (s.dim() != 4) throw DomainError("CovMat4 needs a 4x4 matrix");
  *this = CovMat4(Eigen::Matrix4d(s.mat()));
}

Eigen::MatrixXd symplectic_form(int modes) {
  Eigen::MatrixXd om = Eigen::MatrixXd::Zero(2 * modes, 2 * modes);
  for (int k = 0; k < modes; ++k) {
    om(2 * k, 2 * k + 1) = 1.0;
    om(2 * k + 1, 2 * k) = -1.0;
  }
  return om;
}

std::vector<double> symplectic_eigenvalues(const SymMat& cov) {
  const int n = cov.dim() / 2;
  Eigen::LLT<Eigen::MatrixXd> llt(cov.mat());
  if (llt.info() != Eigen::Success)
    throw NumericError("not a valid quantum covariance", cov.mat());

  // Eigenvalues of Omega*cov come in +-i*nu pairs.
  Eigen::EigenSolver<Eigen::MatrixXd> es(symplectic_form(n) * cov.mat(), false);
  std::vector<double> mods;
  mods.reserve(2 * n);
  for (int i = 0; i < 2 * n; ++i) mods.push_back(std::abs(es.eigenvalues()(i).imag()));
  std::sort(mods.begin(), mods.end());

  std::vector<double> nu;
  nu.reserve(n);
  for (int k = 0; k < n; ++k) {
    double v = 0.5 * (mods[2 * k] + mods[2 * k + 1]);
    if (v < 1.0 - kPhysTol) {
      std::ostringstream os;
      os << "unphysical state (nu = " << v << ")";
      throw NumericError(os.str(), cov.mat());
    }
    nu.push_back(std::max(v, 1.0));
  }
  return nu;
}

double g_entropy(double x) {
  if (x < 0 || std::isnan(x)) throw DomainError("g_entropy needs x >= 0");
  if (x == 0) return 0.0;
  return (x + 1) * std::log2(x + 1) - x * std::log2(x);
}

double von_neumann_entropy(const SymMat& cov) {
  double s = 0;
  for (double nu : symplectic_eigenvalues(cov)) s += g_entropy((nu - 1) / 2);
  return s;
}

SymMat zero_regularizer(int dim) {
  return SymMat(Eigen::MatrixXd::Zero(dim, dim));
}

SymMat schur_condition(const SymMat& cov, const std::vector<int>& measured,
                       const SymMat& regularizer) {
  const int d = cov.dim();
  std::vector<int> kept;
  for (int i = 0; i < d; ++i)
    if (std::find(measured.begin(), measured.end(), i) == measured.end())
      kept.push_back(i);
  const int nm = static_cast<int>(measured.size());
  const int nk = static_cast<int>(kept.size());
  if (nm == 0 || nk == 0 || nm + nk != d)
    throw DomainError("measured block must be a proper subset of indices");
  if (regularizer.dim() != nm)
    throw DomainError("regularizer does not match the measured block");

  Eigen::MatrixXd a(nk, nk), b(nm, nm), c(nk, nm);
  for (int i = 0; i < nk; ++i)
    for (int j = 0; j < nk; ++j) a(i, j) = cov(kept[i], kept[j]);
  for (int i = 0; i < nm; ++i)
    for (int j = 0; j < nm; ++j) b(i, j) = cov(measured[i], measured[j]);
  for (int i = 0; i < nk; ++i)
    for (int j = 0; j < nm; ++j) c(i, j) = cov(kept[i], measured[j]);
  b += regularizer.mat();

  Eigen::FullPivLU<Eigen::MatrixXd> lu(b);
  const double scale = std::max(1.0, b.cwiseAbs().maxCoeff());
  if (!lu.isInvertible() || std::abs(lu.determinant()) < 1e-14 * std::pow(scale, nm))
    throw NumericError("singular conditioned block", b);
  Eigen::MatrixXd out = a - c * lu.solve(c.transpose());
  return SymMat(0.5 * (out + out.transpose()));
}

}  // namespace cvqkd
