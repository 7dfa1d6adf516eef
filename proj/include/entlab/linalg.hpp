// Copyright 2026 The entlab Authors
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

// Dense complex linear algebra shared by every other module.

#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <limits>
#include <sstream>
#include <vector>

#include "entlab/errors.hpp"

namespace entlab {

using cplx = std::complex<double>;
using DenseOperator = Eigen::MatrixXcd;
using StateVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;

inline constexpr double kHermitianTol = 1e-10;

/// Pauli matrices and the 2x2 ladder operators in the sigma_z basis
/// (index 0 = spin up).
namespace pauli {
inline DenseOperator id() { return DenseOperator::Identity(2, 2); }
inline DenseOperator x() {
  DenseOperator m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}
inline DenseOperator y() {
  DenseOperator m(2, 2);
  m << 0, cplx(0, -1), cplx(0, 1), 0;
  return m;
}
inline DenseOperator z() {
  DenseOperator m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}
/// sigma^+ = |0><1|
inline DenseOperator plus() {
  DenseOperator m = DenseOperator::Zero(2, 2);
  m(0, 1) = 1;
  return m;
}
/// sigma^- = |1><0|
inline DenseOperator minus() {
  DenseOperator m = DenseOperator::Zero(2, 2);
  m(1, 0) = 1;
  return m;
}
}  // namespace pauli

inline bool all_finite(const DenseOperator& a) {
  return a.allFinite();
}

/// Kronecker product; result[(i,mu),(j,nu)] = a[i,j] * b[mu,nu].
inline DenseOperator kron(const DenseOperator& a, const DenseOperator& b) {
  const auto limit = static_cast<std::uint64_t>(std::numeric_limits<Eigen::Index>::max());
  const auto rows = static_cast<std::uint64_t>(a.rows()) * static_cast<std::uint64_t>(b.rows());
  const auto cols = static_cast<std::uint64_t>(a.cols()) * static_cast<std::uint64_t>(b.cols());
  if (rows > (1ull << 31) || cols > (1ull << 31) || rows * cols > limit / 16) {
    throw DimensionError("kron: result dimension overflow");
  }
  DenseOperator out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

/// Kronecker product of a list, left to right.
inline DenseOperator kron_all(const std::vector<DenseOperator>& factors) {
  DenseOperator out = DenseOperator::Identity(1, 1);
  for (const auto& f : factors) out = kron(out, f);
  return out;
}

/// Thin singular value decomposition a = U diag(s) Vdag, s descending.
struct Svd {
  DenseOperator u;
  RealVector s;
  DenseOperator vdag;
};

inline Svd svd(const DenseOperator& a) {
  if (!a.allFinite()) throw DomainError("svd: non-finite entries");
  Eigen::BDCSVD<DenseOperator> solver(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (solver.info() != Eigen::Success) {
    throw ConvergenceError("svd: decomposition did not converge", static_cast<int>(a.rows() + a.cols()));
  }
  return {solver.matrixU(), solver.singularValues(), solver.matrixV().adjoint()};
}

/// Largest |a - a^dagger| entry.
inline double hermitian_asymmetry(const DenseOperator& a) {
  if (a.rows() != a.cols()) return std::numeric_limits<double>::infinity();
  if (a.size() == 0) return 0.0;
  return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

/// Throws HermiticityError unless a is Hermitian within tol relative to its norm;
/// returns (a + a^dagger)/2.
inline DenseOperator checked_hermitian(const DenseOperator& a, double tol = kHermitianTol) {
  if (a.rows() != a.cols()) throw DimensionError("expected a square matrix");
  const double asym = hermitian_asymmetry(a);
  const double scale = std::max(1.0, a.norm());
  if (!(asym <= tol * scale)) {
    std::ostringstream msg;
    msg << "matrix is not Hermitian: max asymmetry " << asym;
    throw HermiticityError(msg.str(), asym);
  }
  return (a + a.adjoint()) * 0.5;
}

/// Eigenvalues ascending with orthonormal eigenvectors in the columns.
struct HermitianEig {
  RealVector values;
  DenseOperator vectors;
};

inline HermitianEig hermitian_eig(const DenseOperator& a, double tol = kHermitianTol) {
  const DenseOperator h = checked_hermitian(a, tol);
  Eigen::SelfAdjointEigenSolver<DenseOperator> solver(h);
  if (solver.info() != Eigen::Success) {
    throw ConvergenceError("hermitian_eig: solver failed", static_cast<int>(a.rows()));
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

/// Eigenvalues only (ascending).
inline RealVector hermitian_eigenvalues(const DenseOperator& a, double tol = kHermitianTol) {
  const DenseOperator h = checked_hermitian(a, tol);
  Eigen::SelfAdjointEigenSolver<DenseOperator> solver(h, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw ConvergenceError("hermitian_eigenvalues: solver failed", static_cast<int>(a.rows()));
  }
  return solver.eigenvalues();
}

/// Sum of singular values.
inline double trace_norm(const DenseOperator& a) {
  if (a.rows() != a.cols()) throw DimensionError("trace_norm: square matrix required");
  return svd(a).s.sum();
}

/// f applied to the spectrum of a Hermitian matrix: V f(diag) V^dagger.
inline DenseOperator matrix_function(const DenseOperator& a, const std::function<double(double)>& f) {
  const HermitianEig eig = hermitian_eig(a);
  RealVector fv(eig.values.size());
  for (Eigen::Index i = 0; i < fv.size(); ++i) fv(i) = f(eig.values(i));
  return eig.vectors * fv.cast<cplx>().asDiagonal() * eig.vectors.adjoint();
}

/// Principal square root of a PSD matrix; eigenvalues above -clamp are clipped at zero.
inline DenseOperator psd_sqrt(const DenseOperator& a, double clamp = 1e-12) {
  const HermitianEig eig = hermitian_eig(a);
  if (eig.values.size() > 0 && eig.values(0) < -clamp * std::max(1.0, std::abs(eig.values(eig.values.size() - 1)))) {
    std::ostringstream msg;
    msg << "psd_sqrt: negative eigenvalue " << eig.values(0);
    throw DomainError(msg.str());
  }
  RealVector fv = eig.values.cwiseMax(0.0).cwiseSqrt();
  return eig.vectors * fv.cast<cplx>().asDiagonal() * eig.vectors.adjoint();
}

/// x log x with the 0 log 0 = 0 convention.
inline double xlogx(double x, double log_base_e) {
  return x > 0.0 ? x * std::log(x) / log_base_e : 0.0;
}

/// Frobenius distance normalised by the first argument.
inline double relative_frobenius(const DenseOperator& a, const DenseOperator& b) {
  return (a - b).norm() / std::max(1e-300, a.norm());
}

}  // namespace entlab
