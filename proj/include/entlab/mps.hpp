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

// Matrix product states.
//
// Site tensors are stored as A[k][i], a D_k x D_{k+1} matrix for physical
// index i. Amplitudes are c = tr(A[0][i_0] ... A[N-1][i_{N-1}]); for open
// chains D_0 = D_N = 1 and the trace is the single entry.
//
// Canonical form (open chains only) is right-normalized:
//   sum_i A_i A_i^dagger = 1,   Lambda[k+1] = sum_i A_i^dagger Lambda[k] A_i,
//   Lambda[0] = Lambda[N] = 1,
// with every bond in the Schmidt basis, so Lambda[k] is diagonal and holds the
// squared Schmidt coefficients of the cut after k sites.
//
// The tensors describe an unnormalized state; norm() is its 2-norm and every
// observable below refers to the normalized state.

#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "entlab/states.hpp"

namespace entlab {

enum class Boundary { open, periodic };

inline const char* boundary_name(Boundary b) { return b == Boundary::open ? "open" : "periodic"; }

using SiteTensor = std::vector<DenseOperator>;  // one D_k x D_{k+1} matrix per physical index

struct TruncationReport {
  std::vector<double> discarded;  // epsilon_alpha(D) per cut, alpha = 1..N-1
  double bound = 0.0;             // 2 * sum epsilon_alpha
  double kept_norm = 1.0;         // norm of the projected (unnormalized) state
};

inline constexpr int kDenseSiteLimit = 16;

class MatrixProductState {
 public:
  MatrixProductState() = default;

  /// Validates shapes; norm is computed by contraction.
  MatrixProductState(std::vector<SiteTensor> tensors, Boundary bc) : tensors_(std::move(tensors)), bc_(bc) {
    if (tensors_.empty()) throw DimensionError("MPS: no sites");
    d_ = static_cast<int>(tensors_[0].size());
    if (d_ < 1) throw DimensionError("MPS: physical dimension must be positive");
    const int n = sites();
    for (int k = 0; k < n; ++k) {
      const SiteTensor& a = tensors_[static_cast<std::size_t>(k)];
      if (static_cast<int>(a.size()) != d_) throw DimensionError("MPS: physical dimension differs between sites");
      const SiteTensor& next = tensors_[static_cast<std::size_t>((k + 1) % n)];
      for (const auto& m : a) {
        if (m.rows() != a[0].rows() || m.cols() != a[0].cols()) throw DimensionError("MPS: ragged site tensor");
        if (!m.allFinite()) throw DomainError("MPS: non-finite tensor entry");
      }
      if ((k + 1 < n || bc_ == Boundary::periodic) && a[0].cols() != next[0].rows())
        throw DimensionError("MPS: bond dimensions do not chain");
    }
    if (bc_ == Boundary::open && (tensors_.front()[0].rows() != 1 || tensors_.back()[0].cols() != 1))
      throw DimensionError("MPS: open boundary requires D_1 = D_{N+1} = 1");
    norm_ = std::sqrt(std::max(0.0, raw_overlap(*this, *this).real()));
  }

  int sites() const { return static_cast<int>(tensors_.size()); }
  int phys_dim() const { return d_; }
  Boundary boundary() const { return bc_; }
  double norm() const { return norm_; }
  const std::vector<SiteTensor>& tensors() const { return tensors_; }
  const SiteTensor& tensor(int k) const { return tensors_.at(static_cast<std::size_t>(k)); }
  bool canonical() const { return lambdas_.has_value(); }
  /// Diagonal of Lambda[k], k = 0..N (entries of Lambda[0], Lambda[N] are 1).
  const std::vector<RealVector>& lambdas() const { return lambdas_.value(); }

  /// Bond dimensions D_1 .. D_{N+1} (D_k = rows of site k, last = cols of last site).
  std::vector<int> bonds() const {
    std::vector<int> b;
    for (const auto& a : tensors_) b.push_back(static_cast<int>(a[0].rows()));
    b.push_back(static_cast<int>(tensors_.back()[0].cols()));
    return b;
  }
  int max_bond() const {
    int m = 0;
    for (int b : bonds()) m = std::max(m, b);
    return m;
  }

  /// Entanglement entropy of the first k sites from Lambda[k] (canonical only).
  double block_entropy(int k, LogBase base = LogBase::bits) const {
    if (!canonical()) throw DomainError("block_entropy: MPS is not canonical");
    if (k < 0 || k > sites()) throw DimensionError("block_entropy: cut out of range");
    return spectrum_entropy(lambdas()[static_cast<std::size_t>(k)], base);
  }

  /// <a|b> of the unnormalized states.
  static cplx raw_overlap(const MatrixProductState& a, const MatrixProductState& b) {
    return contract(a, b, {});
  }

  /// sum_{sigma', sigma} conj(a_{sigma'}) [prod_k O_k]_{sigma' sigma} b_sigma with
  /// O_k = identity for sites not listed.
  static cplx contract(const MatrixProductState& a, const MatrixProductState& b,
                       const std::vector<std::pair<int, DenseOperator>>& ops) {
    if (a.sites() != b.sites() || a.d_ != b.d_ || a.bc_ != b.bc_) throw DimensionError("MPS contraction: shape mismatch");
    const int n = a.sites();
    const int d = a.d_;
    std::vector<const DenseOperator*> site_op(static_cast<std::size_t>(n), nullptr);
    for (const auto& [k, o] : ops) {
      if (k < 0 || k >= n) throw DimensionError("MPS contraction: operator site out of range");
      if (o.rows() != d || o.cols() != d) throw DimensionError("MPS contraction: operator has wrong dimension");
      if (site_op[static_cast<std::size_t>(k)]) throw DomainError("MPS contraction: two operators on one site");
      site_op[static_cast<std::size_t>(k)] = &o;
    }
    if (a.bc_ == Boundary::open) {
      DenseOperator env = DenseOperator::Ones(1, 1);
      for (int k = 0; k < n; ++k) {
        const SiteTensor& ta = a.tensor(k);
        const SiteTensor& tb = b.tensor(k);
        DenseOperator next = DenseOperator::Zero(ta[0].cols(), tb[0].cols());
        const DenseOperator* o = site_op[static_cast<std::size_t>(k)];
        for (int j = 0; j < d; ++j) {
          const DenseOperator envb = env * tb[static_cast<std::size_t>(j)];
          for (int i = 0; i < d; ++i) {
            const cplx w = o ? (*o)(i, j) : (i == j ? cplx(1.0) : cplx(0.0));
            if (w == cplx(0.0)) continue;
            next.noalias() += w * ta[static_cast<std::size_t>(i)].adjoint() * envb;
          }
        }
        env = std::move(next);
      }
      return env(0, 0);
    }
    // Periodic: transfer matrices on the doubled bond space, index (alpha_a, alpha_b).
    const Eigen::Index da0 = a.tensor(0)[0].rows(), db0 = b.tensor(0)[0].rows();
    DenseOperator t = DenseOperator::Identity(da0 * db0, da0 * db0);
    for (int k = 0; k < n; ++k) {
      const SiteTensor& ta = a.tensor(k);
      const SiteTensor& tb = b.tensor(k);
      DenseOperator e = DenseOperator::Zero(ta[0].rows() * tb[0].rows(), ta[0].cols() * tb[0].cols());
      const DenseOperator* o = site_op[static_cast<std::size_t>(k)];
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
          const cplx w = o ? (*o)(i, j) : (i == j ? cplx(1.0) : cplx(0.0));
          if (w == cplx(0.0)) continue;
          e += w * kron(ta[static_cast<std::size_t>(i)].conjugate(), tb[static_cast<std::size_t>(j)]);
        }
      t = t * e;
    }
    return t.trace();
  }

  void set_canonical_data(std::vector<RealVector> lambdas) { lambdas_ = std::move(lambdas); }

 private:
  std::vector<SiteTensor> tensors_;
  Boundary bc_ = Boundary::open;
  int d_ = 0;
  double norm_ = 0.0;
  std::optional<std::vector<RealVector>> lambdas_;
};

namespace detail {

// Reshape A[k] (d matrices D_l x D_r) to D_l x (d * D_r), column index i * D_r + beta.
inline DenseOperator merge_right(const SiteTensor& a) {
  const Eigen::Index dl = a[0].rows(), dr = a[0].cols();
  DenseOperator m(dl, static_cast<Eigen::Index>(a.size()) * dr);
  for (std::size_t i = 0; i < a.size(); ++i) m.middleCols(static_cast<Eigen::Index>(i) * dr, dr) = a[i];
  return m;
}

inline SiteTensor split_right(const DenseOperator& m, int d) {
  const Eigen::Index dr = m.cols() / d;
  SiteTensor a(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) a[static_cast<std::size_t>(i)] = m.middleCols(static_cast<Eigen::Index>(i) * dr, dr);
  return a;
}

// Reshape A[k] to (d * D_l) x D_r, row index i * D_l + alpha.
inline DenseOperator merge_left(const SiteTensor& a) {
  const Eigen::Index dl = a[0].rows(), dr = a[0].cols();
  DenseOperator m(static_cast<Eigen::Index>(a.size()) * dl, dr);
  for (std::size_t i = 0; i < a.size(); ++i) m.middleRows(static_cast<Eigen::Index>(i) * dl, dl) = a[i];
  return m;
}

inline SiteTensor split_left(const DenseOperator& m, int d) {
  const Eigen::Index dl = m.rows() / d;
  SiteTensor a(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) a[static_cast<std::size_t>(i)] = m.middleRows(static_cast<Eigen::Index>(i) * dl, dl);
  return a;
}

inline void check_open(const MatrixProductState& m, const char* who) {
  if (m.boundary() != Boundary::open)
    throw DomainError(std::string(who) + ": canonical form is defined for open chains only");
}

// Right-normalizing SVD sweep over tensors whose left part is already
// left-orthonormal. Returns the canonical MPS scaled to unit norm, and writes
// the original norm to *norm_out.
inline MatrixProductState right_sweep(std::vector<SiteTensor> t, int d, double* norm_out) {
  const int n = static_cast<int>(t.size());
  std::vector<RealVector> lambdas(static_cast<std::size_t>(n + 1));
  lambdas[0] = RealVector::Ones(1);
  lambdas[static_cast<std::size_t>(n)] = RealVector::Ones(1);
  double norm = 1.0;
  for (int k = n - 1; k >= 0; --k) {
    const Svd s = svd(merge_right(t[static_cast<std::size_t>(k)]));
    Eigen::Index r = 0;
    while (r < s.s.size() && s.s(r) > 1e-14 * std::max(1e-300, s.s(0))) ++r;
    r = std::max<Eigen::Index>(r, 1);
    t[static_cast<std::size_t>(k)] = split_right(s.vdag.topRows(r), d);
    const DenseOperator us = s.u.leftCols(r) * s.s.head(r).cast<cplx>().asDiagonal();
    if (k > 0) {
      for (auto& m : t[static_cast<std::size_t>(k - 1)]) m = m * us;
      lambdas[static_cast<std::size_t>(k)] = s.s.head(r).array().square();
    } else {
      // 1 x 1 remainder: the norm and a global phase.
      norm = std::abs(us(0, 0));
      const cplx phase = norm > 0 ? us(0, 0) / norm : cplx(1.0);
      for (auto& m : t[0]) m *= phase;
    }
  }
  for (int k = 1; k < n; ++k) {
    const double total = lambdas[static_cast<std::size_t>(k)].sum();
    if (total > 0) lambdas[static_cast<std::size_t>(k)] /= total;
  }
  if (norm_out) *norm_out = norm;
  MatrixProductState out(std::move(t), Boundary::open);
  out.set_canonical_data(std::move(lambdas));
  return out;
}

}  // namespace detail

/// Canonical form of an open MPS (left QR sweep, then right SVD sweep). The
/// result describes the same physical state scaled to unit norm.
inline MatrixProductState canonicalize(const MatrixProductState& mps) {
  detail::check_open(mps, "canonicalize");
  const int d = mps.phys_dim();
  std::vector<SiteTensor> t = mps.tensors();
  const int n = mps.sites();
  for (int k = 0; k + 1 < n; ++k) {
    const DenseOperator m = detail::merge_left(t[static_cast<std::size_t>(k)]);
    Eigen::HouseholderQR<DenseOperator> qr(m);
    const Eigen::Index r = std::min(m.rows(), m.cols());
    const DenseOperator q = qr.householderQ() * DenseOperator::Identity(m.rows(), r);
    const DenseOperator rr = qr.matrixQR().topRows(r).triangularView<Eigen::Upper>();
    t[static_cast<std::size_t>(k)] = detail::split_left(q, d);
    for (auto& a : t[static_cast<std::size_t>(k + 1)]) a = rr * a;
  }
  if (mps.norm() == 0.0) throw DomainError("canonicalize: zero state");
  return detail::right_sweep(std::move(t), d, nullptr);
}

struct CanonicalCheck {
  double right_normalization = 0.0;  // max_k || sum_i A A^dagger - 1 ||
  double lambda_recursion = 0.0;     // max_k || sum_i A^dagger Lambda[k] A - Lambda[k+1] ||
  double boundary = 0.0;             // |Lambda[0] - 1| + |Lambda[N] - 1|
  double worst() const { return std::max({right_normalization, lambda_recursion, boundary}); }
};

/// Residuals of the three canonical conditions.
inline CanonicalCheck check_canonical(const MatrixProductState& mps) {
  if (!mps.canonical()) throw DomainError("check_canonical: no canonical data");
  CanonicalCheck c;
  const auto& lam = mps.lambdas();
  const int n = mps.sites();
  for (int k = 0; k < n; ++k) {
    const SiteTensor& a = mps.tensor(k);
    const Eigen::Index dl = a[0].rows();
    DenseOperator rn = -DenseOperator::Identity(dl, dl);
    DenseOperator rec = -DenseOperator(lam[static_cast<std::size_t>(k + 1)].cast<cplx>().asDiagonal());
    const DenseOperator lk = lam[static_cast<std::size_t>(k)].cast<cplx>().asDiagonal();
    for (const auto& m : a) {
      rn += m * m.adjoint();
      rec += m.adjoint() * lk * m;
    }
    c.right_normalization = std::max(c.right_normalization, rn.norm());
    c.lambda_recursion = std::max(c.lambda_recursion, rec.norm());
  }
  c.boundary = std::abs(lam.front()(0) - 1.0) + std::abs(lam.back()(0) - 1.0);
  return c;
}

/// Projects every bond of a canonical MPS onto its D largest Schmidt vectors
/// and re-canonicalizes. The report carries the discarded Lambda weight per
/// cut, the bound 2 * sum of them, and the norm of the projected state.
inline std::pair<MatrixProductState, TruncationReport> truncate(const MatrixProductState& mps, int dmax) {
  if (dmax < 1) throw DomainError("truncate: D must be >= 1");
  if (!mps.canonical()) throw DomainError("truncate: input must be canonical");
  const int n = mps.sites();
  const auto& lam = mps.lambdas();
  TruncationReport rep;
  std::vector<SiteTensor> t = mps.tensors();
  std::vector<int> keep(static_cast<std::size_t>(n + 1), 1);
  for (int k = 1; k < n; ++k) {
    const RealVector& l = lam[static_cast<std::size_t>(k)];
    const int kk = static_cast<int>(std::min<Eigen::Index>(dmax, l.size()));
    keep[static_cast<std::size_t>(k)] = kk;
    rep.discarded.push_back(l.tail(l.size() - kk).sum());
  }
  double eps = 0.0;
  for (double e : rep.discarded) eps += e;
  rep.bound = 2.0 * eps;
  for (int k = 0; k < n; ++k)
    for (auto& m : t[static_cast<std::size_t>(k)])
      m = DenseOperator(m.topLeftCorner(keep[static_cast<std::size_t>(k)], keep[static_cast<std::size_t>(k + 1)]));
  const MatrixProductState projected(std::move(t), Boundary::open);
  rep.kept_norm = projected.norm() / std::max(1e-300, mps.norm());
  if (projected.norm() == 0.0) throw DomainError("truncate: projected state vanishes");
  return {canonicalize(projected), rep};
}

/// Exact canonical MPS of a dense state (open chain), then truncated to Dmax.
inline std::pair<MatrixProductState, TruncationReport> from_dense(const PureState& psi, int dmax) {
  const int n = psi.sites();
  const int d = psi.dims()[0];
  for (int x : psi.dims())
    if (x != d) throw DimensionError("from_dense: local dimensions must be uniform");
  // Start from a single tensor per site via left-to-right reshapes of the
  // amplitude vector; left factors are isometries so the right sweep yields
  // Schmidt bases.
  std::vector<SiteTensor> t(static_cast<std::size_t>(n));
  DenseOperator rest = DenseOperator(psi.amplitudes().transpose());  // 1 x d^N
  Eigen::Index dl = 1;
  for (int k = 0; k + 1 < n; ++k) {
    const Eigen::Index cols = rest.cols() / d;
    // Rows (i, alpha) -> i * dl + alpha, columns are the remaining sites.
    DenseOperator m(static_cast<Eigen::Index>(d) * dl, cols);
    for (Eigen::Index a = 0; a < dl; ++a)
      for (int i = 0; i < d; ++i) m.row(static_cast<Eigen::Index>(i) * dl + a) = rest.row(a).segment(static_cast<Eigen::Index>(i) * cols, cols);
    Eigen::HouseholderQR<DenseOperator> qr(m);
    const Eigen::Index r = std::min(m.rows(), m.cols());
    const DenseOperator q = qr.householderQ() * DenseOperator::Identity(m.rows(), r);
    t[static_cast<std::size_t>(k)] = detail::split_left(q, d);
    rest = qr.matrixQR().topRows(r).triangularView<Eigen::Upper>();
    dl = r;
  }
  SiteTensor last(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) last[static_cast<std::size_t>(i)] = rest.col(i);
  t[static_cast<std::size_t>(n - 1)] = last;
  const MatrixProductState exact = detail::right_sweep(std::move(t), d, nullptr);
  if (dmax >= exact.max_bond()) {
    TruncationReport rep;
    rep.discarded.assign(static_cast<std::size_t>(n - 1), 0.0);
    return {exact, rep};
  }
  return truncate(exact, dmax);
}

/// Dense normalized amplitudes; the MPS norm is available from mps.norm().
inline PureState to_dense(const MatrixProductState& mps, int site_limit = kDenseSiteLimit) {
  const int n = mps.sites();
  const int d = mps.phys_dim();
  if (n > site_limit) throw ResourceLimitError("to_dense: chain longer than the dense limit");
  const Eigen::Index dim = dims_product(Dims(static_cast<std::size_t>(n), d));
  if (mps.norm() == 0.0) throw DomainError("to_dense: zero state");
  // Left-to-right accumulation: rows index the configuration prefix.
  std::vector<DenseOperator> partial;  // partial[prefix] = product of matrices
  const Eigen::Index d0 = mps.tensor(0)[0].rows();
  partial.push_back(DenseOperator::Identity(d0, d0));
  for (int k = 0; k < n; ++k) {
    std::vector<DenseOperator> next;
    next.reserve(partial.size() * static_cast<std::size_t>(d));
    for (const auto& p : partial)
      for (int i = 0; i < d; ++i) next.push_back(p * mps.tensor(k)[static_cast<std::size_t>(i)]);
    partial = std::move(next);
  }
  StateVector v(dim);
  for (Eigen::Index s = 0; s < dim; ++s) v(s) = partial[static_cast<std::size_t>(s)].trace();
  return PureState(Dims(static_cast<std::size_t>(n), d), v / mps.norm(), true);
}

/// <psi| prod_k O_k |psi> / <psi|psi>.
inline cplx expectation(const MatrixProductState& mps, const std::vector<std::pair<int, DenseOperator>>& ops) {
  const double nn = mps.norm() * mps.norm();
  if (nn == 0.0) throw DomainError("expectation: zero state");
  return MatrixProductState::contract(mps, mps, ops) / nn;
}

/// <a|b> of the normalized states.
inline cplx overlap(const MatrixProductState& a, const MatrixProductState& b) {
  return MatrixProductState::raw_overlap(a, b) / (a.norm() * b.norm());
}

/// log eps(D) <= (1 - alpha)/alpha * (S_alpha - log(D / (1 - alpha))), 0 < alpha < 1.
/// S_alpha and the result use the same logarithm base (the inequality is
/// base-independent).
inline double renyi_truncation_bound(double s_alpha, double alpha, int dbond, LogBase base = LogBase::bits) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("renyi_truncation_bound: alpha must lie in (0, 1)");
  if (dbond < 1) throw DomainError("renyi_truncation_bound: D must be >= 1");
  return (1.0 - alpha) / alpha * (s_alpha - log_in(static_cast<double>(dbond) / (1.0 - alpha), base));
}

// Example states (periodic, tensors verbatim).

namespace detail {

inline MatrixProductState uniform_ring(int n, const SiteTensor& a) {
  return MatrixProductState(std::vector<SiteTensor>(static_cast<std::size_t>(n), a), Boundary::periodic);
}

inline DenseOperator mat2(cplx a, cplx b, cplx c, cplx d) {
  DenseOperator m(2, 2);
  m << a, b, c, d;
  return m;
}

}  // namespace detail

/// A_{0,1} = 1 +- sigma_z.
inline MatrixProductState ghz_mps(int n) {
  if (n < 2) throw DomainError("ghz_mps: N must be >= 2");
  return detail::uniform_ring(n, {pauli::id() + pauli::z(), pauli::id() - pauli::z()});
}

/// A_0 = sigma^+, A_1 = sigma^-: (|0101...> + |1010...>) up to normalization.
inline MatrixProductState afm_ghz_mps(int n) {
  if (n < 2 || n % 2) throw DomainError("afm_ghz_mps: N must be even and >= 2");
  return detail::uniform_ring(n, {pauli::plus(), pauli::minus()});
}

/// AKLT ground state, physical basis m = +1, 0, -1:
/// A_{+1} = -sqrt2 sigma^-, A_0 = sigma_z, A_{-1} = sqrt2 sigma^+.
inline MatrixProductState aklt_mps(int n) {
  if (n < 3) throw DomainError("aklt_mps: N must be >= 3");
  const double r2 = std::sqrt(2.0);
  return detail::uniform_ring(n, {-r2 * pauli::minus(), pauli::z(), r2 * pauli::plus()});
}

/// Majumdar-Ghosh dimer state, D = 3.
inline MatrixProductState majumdar_ghosh_mps(int n) {
  if (n < 4 || n % 2) throw DomainError("majumdar_ghosh_mps: N must be even and >= 4");
  DenseOperator a0 = DenseOperator::Zero(3, 3), a1 = DenseOperator::Zero(3, 3);
  a0(0, 1) = 1.0;
  a0(1, 2) = -1.0;
  a1(1, 0) = 1.0;
  a1(2, 1) = 1.0;
  return detail::uniform_ring(n, {a0, a1});
}

/// Cluster state, A_0 = [[0,0],[1,1]], A_1 = [[1,-1],[0,0]].
inline MatrixProductState cluster_mps(int n) {
  if (n < 3) throw DomainError("cluster_mps: N must be >= 3");
  return detail::uniform_ring(n, {detail::mat2(0, 0, 1, 1), detail::mat2(1, -1, 0, 0)});
}

/// Ring MPS with amplitudes proportional to exp(-beta/2 sum_k h(s_k, s_{k+1})).
/// M[s, t] = exp(-beta/2 h(s, t)) must be PSD; A^(s)_{ab} = R[s,a] R[s,b] with
/// R the principal square root of M.
inline MatrixProductState classical_superposition_mps(const RealMatrix& h, double beta, int n) {
  const Eigen::Index d = h.rows();
  if (h.cols() != d || d < 1) throw DimensionError("classical_superposition_mps: coupling must be square");
  if ((h - h.transpose()).cwiseAbs().maxCoeff() > 1e-12) throw DomainError("classical_superposition_mps: coupling must be symmetric");
  if (n < 2) throw DomainError("classical_superposition_mps: N must be >= 2");
  const RealMatrix m = (-0.5 * beta * h).array().exp().matrix();
  Eigen::SelfAdjointEigenSolver<RealMatrix> es(m);
  if (es.eigenvalues()(0) < -1e-12) {
    std::ostringstream msg;
    msg << "classical_superposition_mps: exp(-beta h / 2) is not PSD (eigenvalue " << es.eigenvalues()(0) << ")";
    throw DomainError(msg.str());
  }
  const RealMatrix r = es.eigenvectors() * es.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal() * es.eigenvectors().transpose();
  SiteTensor a(static_cast<std::size_t>(d));
  for (Eigen::Index s = 0; s < d; ++s) {
    const RealVector row = r.row(s).transpose();
    a[static_cast<std::size_t>(s)] = (row * row.transpose()).cast<cplx>();
  }
  return detail::uniform_ring(n, a);
}

/// Ising coupling h(s, t) = -J s t with s, t in {+1, -1} (index 0 is +1).
inline RealMatrix ising_coupling(double j) {
  RealMatrix h(2, 2);
  h << -j, j, j, -j;
  return h;
}

}  // namespace entlab
