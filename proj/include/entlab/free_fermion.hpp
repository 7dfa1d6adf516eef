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

// XY chain ground states through the Jordan-Wigner map to Majorana fermions.
//
// Majoranas m_{2j} = (prod_{k<j} Z_k) X_j and m_{2j+1} = (prod_{k<j} Z_k) Y_j give
//   Z_j = -i m_{2j} m_{2j+1},  X_j X_{j+1} = -i m_{2j+1} m_{2j+2},
//   Y_j Y_{j+1} = i m_{2j} m_{2j+3}.
// A quadratic Hamiltonian is stored as H = (i/4) sum_ab A_ab m_a m_b with A
// real antisymmetric, and a Gaussian state by G with <m_a m_b> = delta_ab + i G_ab.
// On a ring the bond (N-1, 0) maps to the same form with an extra factor -P,
// P = prod_j Z_j, so each parity sector is solved separately.

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "entlab/errors.hpp"
#include "entlab/linalg.hpp"
#include "entlab/mps.hpp"

namespace entlab {

/// Pfaffian of a real antisymmetric matrix (Parlett-Reid elimination with pivoting).
inline double pfaffian(RealMatrix a) {
  const Eigen::Index n = a.rows();
  if (a.cols() != n) throw DimensionError("pfaffian: matrix must be square");
  if (n % 2) return 0.0;
  double pf = 1.0;
  for (Eigen::Index k = 0; k + 1 < n; k += 2) {
    Eigen::Index p;
    a.col(k).tail(n - k - 1).cwiseAbs().maxCoeff(&p);
    p += k + 1;
    if (p != k + 1) {
      a.row(k + 1).swap(a.row(p));
      a.col(k + 1).swap(a.col(p));
      pf = -pf;
    }
    const double piv = a(k + 1, k);
    if (piv == 0.0) return 0.0;
    pf *= a(k, k + 1);
    if (k + 2 < n) {
      const RealVector tau = a.col(k).tail(n - k - 2) / piv;
      const RealVector colk1 = a.col(k + 1).tail(n - k - 2);
      a.bottomRightCorner(n - k - 2, n - k - 2) += tau * colk1.transpose() - colk1 * tau.transpose();
    }
  }
  return pf;
}

struct GaussianGround {
  RealMatrix g;          // Majorana correlation matrix
  double energy = 0.0;   // ground energy
  double gap = 0.0;      // distance to the next level with the same boundary data
  int parity = 1;        // eigenvalue of prod_j Z_j
  bool degenerate = false;
};

namespace detail {

inline void add_bilinear(RealMatrix& a, Eigen::Index p, Eigen::Index q, double c, bool minus_i) {
  // c * (-i m_p m_q) if minus_i, else c * (i m_p m_q).
  const double s = minus_i ? -2.0 * c : 2.0 * c;
  a(p, q) += s;
  a(q, p) -= s;
}

struct SectorGround {
  RealMatrix g;
  double energy;
  double min_mode;
  double second_mode;
  int parity;
};

// Ground state of H = (i/4) m^T A m restricted to Gaussian states of either
// parity: the filled sea and, when its parity is wrong, the sea with the
// softest mode flipped.
inline SectorGround gaussian_sector(const RealMatrix& a, int want_parity) {
  const Eigen::Index n = a.rows();
  const DenseOperator ia = cplx(0.0, 1.0) * a.cast<cplx>();
  Eigen::SelfAdjointEigenSolver<DenseOperator> es(ia);
  const RealVector& ev = es.eigenvalues();
  constexpr double kZero = 1e-12;
  RealMatrix g = RealMatrix::Zero(n, n);
  double e = 0.0;
  std::vector<Eigen::Index> positive;
  for (Eigen::Index k = 0; k < n; ++k) {
    if (ev(k) > kZero) {
      const StateVector u = es.eigenvectors().col(k);
      g += 2.0 * (u * u.adjoint()).imag();
      e -= 0.5 * ev(k);
      positive.push_back(k);
    }
  }
  // Pair up exact zero modes with a real orthonormal kernel basis.
  const Eigen::Index zeros = n - 2 * static_cast<Eigen::Index>(positive.size());
  if (zeros > 0) {
    Eigen::JacobiSVD<RealMatrix> svd(a, Eigen::ComputeFullV);
    const RealMatrix kernel = svd.matrixV().rightCols(zeros);
    for (Eigen::Index m = 0; m + 1 < zeros; m += 2) {
      const RealVector r1 = kernel.col(m), r2 = kernel.col(m + 1);
      g += r2 * r1.transpose() - r1 * r2.transpose();
    }
  }
  SectorGround out{g, e, 0.0, 0.0, 1};
  std::vector<double> modes;
  for (Eigen::Index k : positive) modes.push_back(ev(k));
  for (Eigen::Index z = 0; z < zeros / 2; ++z) modes.push_back(0.0);
  std::sort(modes.begin(), modes.end());
  out.min_mode = modes.empty() ? 0.0 : modes[0];
  out.second_mode = modes.size() > 1 ? modes[1] : std::numeric_limits<double>::infinity();
  out.parity = pfaffian(g) > 0 ? 1 : -1;
  if (want_parity != 0 && out.parity != want_parity) {
    // Flip the softest mode.
    if (zeros > 0) {
      Eigen::JacobiSVD<RealMatrix> svd(a, Eigen::ComputeFullV);
      const RealMatrix kernel = svd.matrixV().rightCols(zeros);
      const RealVector r1 = kernel.col(0), r2 = kernel.col(1);
      out.g -= 2.0 * (r2 * r1.transpose() - r1 * r2.transpose());
    } else {
      const StateVector u = es.eigenvectors().col(positive.front());
      out.g -= 4.0 * (u * u.adjoint()).imag();
      out.energy += ev(positive.front());
    }
    out.parity = want_parity;
  }
  return out;
}

}  // namespace detail

/// Majorana coefficient matrix of the XY chain
///   H = -1/2 sum [((1+g)/2) X X + ((1-g)/2) Y Y] - (h/2) sum Z.
/// For a ring, boundary_sign multiplies the (N-1, 0) bond (use -P for parity P).
inline RealMatrix xy_majorana_matrix(double gamma, double h, int n, Boundary bc, double boundary_sign = 1.0) {
  if (n < 2) throw DomainError("xy_majorana_matrix: N must be >= 2");
  const Eigen::Index m = 2 * static_cast<Eigen::Index>(n);
  RealMatrix a = RealMatrix::Zero(m, m);
  const double cx = -0.25 * (1.0 + gamma);
  const double cy = -0.25 * (1.0 - gamma);
  for (int j = 0; j < n; ++j) detail::add_bilinear(a, 2 * j, 2 * j + 1, -0.5 * h, true);
  const int bonds = bc == Boundary::periodic ? n : n - 1;
  for (int j = 0; j < bonds; ++j) {
    const bool wrap = j == n - 1;
    const double s = wrap ? boundary_sign : 1.0;
    const Eigen::Index next_x = wrap ? 0 : 2 * (j + 1);
    const Eigen::Index next_y = wrap ? 1 : 2 * (j + 1) + 1;
    detail::add_bilinear(a, 2 * j + 1, next_x, s * cx, true);
    detail::add_bilinear(a, 2 * j, next_y, s * cy, false);
  }
  return a;
}

/// Ground state of the XY chain as a Gaussian state. On a ring both parity
/// sectors are solved and the lower one is kept; `degenerate` is set when the
/// two lowest levels agree within 1e-9.
inline GaussianGround xy_ground_state(double gamma, double h, int n, Boundary bc) {
  if (gamma < 0.0 || gamma > 1.0) throw DomainError("xy_ground_state: gamma must lie in [0, 1]");
  GaussianGround out;
  if (bc == Boundary::open) {
    const auto s = detail::gaussian_sector(xy_majorana_matrix(gamma, h, n, bc), 0);
    out.g = s.g;
    out.energy = s.energy;
    out.parity = s.parity;
    out.gap = s.min_mode;
    out.degenerate = s.min_mode < 1e-9;
    return out;
  }
  const auto even = detail::gaussian_sector(xy_majorana_matrix(gamma, h, n, bc, -1.0), 1);
  const auto odd = detail::gaussian_sector(xy_majorana_matrix(gamma, h, n, bc, 1.0), -1);
  const auto& best = even.energy <= odd.energy ? even : odd;
  const auto& other = even.energy <= odd.energy ? odd : even;
  out.g = best.g;
  out.energy = best.energy;
  out.parity = best.parity;
  out.gap = other.energy - best.energy;
  out.degenerate = out.gap < 1e-9;
  return out;
}

/// Entropy (bits) of the first `block` sites from the Majorana correlation matrix.
inline double gaussian_block_entropy(const RealMatrix& g, int block) {
  if (block < 0 || 2 * block > g.rows()) throw DimensionError("gaussian_block_entropy: block out of range");
  if (block == 0) return 0.0;
  const RealMatrix sub = g.topLeftCorner(2 * block, 2 * block);
  const DenseOperator isub = cplx(0.0, 1.0) * sub.cast<cplx>();
  const RealVector nu = Eigen::SelfAdjointEigenSolver<DenseOperator>(isub, Eigen::EigenvaluesOnly).eigenvalues();
  double s = 0.0;
  // Eigenvalues come in +-nu pairs; use the nonnegative half.
  for (Eigen::Index k = block; k < 2 * block; ++k) {
    const double p = std::clamp(0.5 * (1.0 + nu(k)), 0.0, 1.0);
    s -= xlogx(p, std::numbers::ln2) + xlogx(1.0 - p, std::numbers::ln2);
  }
  return std::max(0.0, s);
}

/// Block entropy S(n) in bits of the XY ground state.
inline double xy_entropy_free_fermion(double gamma, double h, int n_sites, int block, Boundary bc = Boundary::periodic) {
  if (block < 0 || block > n_sites) throw DimensionError("xy_entropy_free_fermion: block out of range");
  return gaussian_block_entropy(xy_ground_state(gamma, h, n_sites, bc).g, block);
}

/// S(n) for several block sizes from one ground-state solve.
inline std::vector<double> xy_entropy_profile(double gamma, double h, int n_sites, const std::vector<int>& blocks,
                                              Boundary bc = Boundary::periodic) {
  const GaussianGround gs = xy_ground_state(gamma, h, n_sites, bc);
  std::vector<double> out;
  for (int b : blocks) out.push_back(gaussian_block_entropy(gs.g, b));
  return out;
}

}  // namespace entlab
