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

// Pure and mixed states on a register of sites with local dimensions, plus the
// bipartite toolkit: Schmidt decomposition, partial trace and transpose,
// entropies and mutual information.
//
// Site 0 is the most significant digit of a basis index, so a two-site index
// is (i, mu) -> i * d_B + mu. Bipartitions are contiguous cuts: sites
// [0, cut) form A, the rest form B.

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "entlab/errors.hpp"
#include "entlab/linalg.hpp"

namespace entlab {

using Dims = std::vector<int>;

enum class LogBase { bits, nats };

inline double log_in(double x, LogBase base) {
  return base == LogBase::bits ? std::log2(x) : std::log(x);
}

inline const char* base_label(LogBase base) { return base == LogBase::bits ? "bits" : "nats"; }

inline constexpr double kNormTol = 1e-10;
inline constexpr double kSchmidtCutoff = 1e-12;

inline Eigen::Index dims_product(const Dims& dims, std::size_t begin = 0, std::size_t end = std::string::npos) {
  end = std::min(end, dims.size());
  Eigen::Index p = 1;
  for (std::size_t i = begin; i < end; ++i) {
    if (dims[i] < 1) throw DimensionError("local dimension must be positive");
    if (p > std::numeric_limits<Eigen::Index>::max() / dims[i]) throw DimensionError("dimension overflow");
    p *= dims[i];
  }
  return p;
}

namespace detail {

inline void check_cut(const Dims& dims, int cut) {
  if (cut < 1 || cut >= static_cast<int>(dims.size())) {
    std::ostringstream msg;
    msg << "bipartition cut " << cut << " must lie in [1, " << dims.size() - 1 << "]";
    throw DimensionError(msg.str());
  }
}

}  // namespace detail

class PureState {
 public:
  PureState() = default;

  /// Validates dims against the amplitude length; with normalize the vector is
  /// rescaled, otherwise its norm must be 1 within 1e-10.
  PureState(Dims dims, StateVector amplitudes, bool normalize = false)
      : dims_(std::move(dims)), amps_(std::move(amplitudes)) {
    if (dims_.empty()) throw DimensionError("PureState: no sites");
    if (dims_product(dims_) != amps_.size()) throw DimensionError("PureState: product of dims != amplitude length");
    if (!amps_.allFinite()) throw DomainError("PureState: non-finite amplitude");
    const double n = amps_.norm();
    if (normalize) {
      if (n == 0.0) throw DomainError("PureState: zero vector");
      amps_ /= n;
    } else if (std::abs(n - 1.0) > kNormTol) {
      std::ostringstream msg;
      msg << "PureState: norm " << n << " differs from 1";
      throw DomainError(msg.str());
    }
  }

  const Dims& dims() const { return dims_; }
  const StateVector& amplitudes() const { return amps_; }
  Eigen::Index dim() const { return amps_.size(); }
  int sites() const { return static_cast<int>(dims_.size()); }

  DenseOperator projector() const { return amps_ * amps_.adjoint(); }

 private:
  Dims dims_;
  StateVector amps_;
};

class DensityMatrix {
 public:
  DensityMatrix() = default;

  /// Checks Hermiticity, trace one and eigenvalues >= -tol, then stores the
  /// symmetrized matrix.
  DensityMatrix(Dims dims, const DenseOperator& m, double tol = kHermitianTol) : dims_(std::move(dims)) {
    if (dims_.empty()) throw DimensionError("DensityMatrix: no sites");
    const Eigen::Index d = dims_product(dims_);
    if (m.rows() != d || m.cols() != d) throw DimensionError("DensityMatrix: matrix size != product of dims");
    m_ = checked_hermitian(m, tol);
    const double tr = m_.trace().real();
    if (std::abs(tr - 1.0) > tol) {
      std::ostringstream msg;
      msg << "DensityMatrix: trace " << tr << " differs from 1";
      throw DomainError(msg.str());
    }
    const double lo = hermitian_eigenvalues(m_)(0);
    if (lo < -tol) {
      std::ostringstream msg;
      msg << "DensityMatrix: negative eigenvalue " << lo;
      throw DomainError(msg.str());
    }
  }

  explicit DensityMatrix(const PureState& psi) : dims_(psi.dims()), m_(psi.projector()) {}

  const Dims& dims() const { return dims_; }
  const DenseOperator& matrix() const { return m_; }
  Eigen::Index dim() const { return m_.rows(); }
  int sites() const { return static_cast<int>(dims_.size()); }

 private:
  Dims dims_;
  DenseOperator m_;
};

struct SchmidtDecomposition {
  RealVector coefficients;  // descending, all > cutoff
  int rank = 0;
  DenseOperator left;   // d_A x rank, orthonormal columns
  DenseOperator right;  // d_B x rank, orthonormal columns

  StateVector reconstruct() const {
    const Eigen::Index da = left.rows();
    const Eigen::Index db = right.rows();
    StateVector out = StateVector::Zero(da * db);
    for (int k = 0; k < rank; ++k)
      for (Eigen::Index i = 0; i < da; ++i)
        for (Eigen::Index mu = 0; mu < db; ++mu) out(i * db + mu) += coefficients(k) * left(i, k) * right(mu, k);
    return out;
  }
};

/// Amplitudes reshaped to a d_A x d_B matrix for the cut after `cut` sites.
inline DenseOperator amplitude_matrix(const PureState& psi, int cut) {
  detail::check_cut(psi.dims(), cut);
  const Eigen::Index da = dims_product(psi.dims(), 0, static_cast<std::size_t>(cut));
  const Eigen::Index db = psi.dim() / da;
  DenseOperator m(da, db);
  for (Eigen::Index i = 0; i < da; ++i)
    for (Eigen::Index mu = 0; mu < db; ++mu) m(i, mu) = psi.amplitudes()(i * db + mu);
  return m;
}

inline SchmidtDecomposition schmidt(const PureState& psi, int cut = 1, double cutoff = kSchmidtCutoff) {
  const Svd s = svd(amplitude_matrix(psi, cut));
  int r = 0;
  while (r < s.s.size() && s.s(r) > cutoff) ++r;
  SchmidtDecomposition out;
  out.rank = r;
  out.coefficients = s.s.head(r);
  out.left = s.u.leftCols(r);
  out.right = s.vdag.topRows(r).transpose();
  return out;
}

/// Schmidt coefficients without frames; zeros below the cutoff dropped.
inline RealVector schmidt_coefficients(const PureState& psi, int cut = 1, double cutoff = kSchmidtCutoff) {
  Eigen::BDCSVD<DenseOperator> solver(amplitude_matrix(psi, cut));
  const RealVector s = solver.singularValues();
  int r = 0;
  while (r < s.size() && s(r) > cutoff) ++r;
  return s.head(r);
}

/// Reduced density operator on the kept sites (any nonempty subset, returned
/// in increasing site order).
inline DensityMatrix partial_trace(const DensityMatrix& rho, std::vector<int> keep) {
  const Dims& dims = rho.dims();
  const int n = rho.sites();
  if (keep.empty()) throw DimensionError("partial_trace: empty keep set");
  std::sort(keep.begin(), keep.end());
  keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
  if (keep.front() < 0 || keep.back() >= n) throw DimensionError("partial_trace: site out of range");

  std::vector<bool> kept(static_cast<std::size_t>(n), false);
  for (int s : keep) kept[static_cast<std::size_t>(s)] = true;
  Dims kdims;
  for (int s : keep) kdims.push_back(dims[static_cast<std::size_t>(s)]);
  const Eigen::Index dk = dims_product(kdims);
  const Eigen::Index dt = rho.dim() / dk;

  // index_of[t * dk + k] = full index whose kept digits spell k and traced digits spell t.
  std::vector<Eigen::Index> index_of(static_cast<std::size_t>(rho.dim()));
  for (Eigen::Index full = 0; full < rho.dim(); ++full) {
    Eigen::Index rem = full;
    Eigen::Index k = 0, t = 0, kw = 1, tw = 1;
    for (int s = n - 1; s >= 0; --s) {
      const int d = dims[static_cast<std::size_t>(s)];
      const Eigen::Index digit = rem % d;
      rem /= d;
      if (kept[static_cast<std::size_t>(s)]) {
        k += digit * kw;
        kw *= d;
      } else {
        t += digit * tw;
        tw *= d;
      }
    }
    index_of[static_cast<std::size_t>(t * dk + k)] = full;
  }

  DenseOperator red = DenseOperator::Zero(dk, dk);
  const DenseOperator& m = rho.matrix();
  for (Eigen::Index t = 0; t < dt; ++t) {
    const Eigen::Index* row = &index_of[static_cast<std::size_t>(t * dk)];
    for (Eigen::Index b = 0; b < dk; ++b)
      for (Eigen::Index a = 0; a < dk; ++a) red(a, b) += m(row[a], row[b]);
  }
  return DensityMatrix(kdims, red);
}

/// Reduced density operator of the first `cut` sites of a pure state (M M^dagger).
inline DensityMatrix reduced_left(const PureState& psi, int cut) {
  const DenseOperator m = amplitude_matrix(psi, cut);
  return DensityMatrix(Dims(psi.dims().begin(), psi.dims().begin() + cut), m * m.adjoint());
}

/// Reduced density operator of the sites after the cut (M^T M^*).
inline DensityMatrix reduced_right(const PureState& psi, int cut) {
  const DenseOperator m = amplitude_matrix(psi, cut);
  return DensityMatrix(Dims(psi.dims().begin() + cut, psi.dims().end()), m.transpose() * m.conjugate());
}

enum class Subsystem { A, B };

/// Partial transpose of a bipartite operator with factor dimensions (d_A, d_B).
inline DenseOperator partial_transpose(const DenseOperator& m, Eigen::Index da, Eigen::Index db, Subsystem which) {
  if (m.rows() != da * db || m.cols() != da * db) throw DimensionError("partial_transpose: size != d_A * d_B");
  DenseOperator out(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < da; ++i)
    for (Eigen::Index j = 0; j < da; ++j)
      for (Eigen::Index mu = 0; mu < db; ++mu)
        for (Eigen::Index nu = 0; nu < db; ++nu) {
          if (which == Subsystem::A) {
            out(j * db + mu, i * db + nu) = m(i * db + mu, j * db + nu);
          } else {
            out(i * db + nu, j * db + mu) = m(i * db + mu, j * db + nu);
          }
        }
  return out;
}

inline std::pair<Eigen::Index, Eigen::Index> cut_dims(const Dims& dims, int cut) {
  detail::check_cut(dims, cut);
  const Eigen::Index da = dims_product(dims, 0, static_cast<std::size_t>(cut));
  return {da, dims_product(dims) / da};
}

inline DenseOperator partial_transpose(const DensityMatrix& rho, Subsystem which, int cut = 1) {
  const auto [da, db] = cut_dims(rho.dims(), cut);
  return partial_transpose(rho.matrix(), da, db, which);
}

struct PptResult {
  bool ppt = true;
  double min_eigenvalue = 0.0;
  int negative_count = 0;
};

/// Peres test: PPT iff the smallest eigenvalue of rho^{T_A} is >= -tol.
inline PptResult is_ppt(const DensityMatrix& rho, double tol = 1e-10, int cut = 1) {
  const RealVector ev = hermitian_eigenvalues(partial_transpose(rho, Subsystem::A, cut));
  PptResult r;
  r.min_eigenvalue = ev(0);
  r.ppt = ev(0) >= -tol;
  for (Eigen::Index i = 0; i < ev.size(); ++i) r.negative_count += ev(i) < -tol ? 1 : 0;
  return r;
}

/// Shannon entropy of a probability vector; negative roundoff entries ignored.
inline double spectrum_entropy(const RealVector& p, LogBase base = LogBase::bits) {
  const double lb = base == LogBase::bits ? std::numbers::ln2 : 1.0;
  double s = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i) s -= xlogx(std::max(0.0, p(i)), lb);
  return std::max(0.0, s);
}

inline double von_neumann_entropy(const DensityMatrix& rho, LogBase base = LogBase::bits) {
  return spectrum_entropy(hermitian_eigenvalues(rho.matrix()), base);
}

inline double spectrum_renyi(const RealVector& p, double alpha, LogBase base = LogBase::bits) {
  if (alpha < 0.0 || std::isnan(alpha)) throw DomainError("renyi_entropy: alpha must be in [0, inf]");
  if (alpha == 1.0) return spectrum_entropy(p, base);
  if (std::isinf(alpha)) return std::max(0.0, -log_in(p.maxCoeff(), base));
  if (alpha == 0.0) {
    int rank = 0;
    for (Eigen::Index i = 0; i < p.size(); ++i) rank += p(i) > kSchmidtCutoff ? 1 : 0;
    return log_in(static_cast<double>(rank), base);
  }
  double sum = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i)
    if (p(i) > 0.0) sum += std::pow(p(i), alpha);
  return std::max(0.0, log_in(sum, base) / (1.0 - alpha));
}

inline double renyi_entropy(const DensityMatrix& rho, double alpha, LogBase base = LogBase::bits) {
  return spectrum_renyi(hermitian_eigenvalues(rho.matrix()), alpha, base);
}

/// Entanglement entropy across a cut from the Schmidt coefficients.
inline double entanglement_entropy(const PureState& psi, int cut, LogBase base = LogBase::bits) {
  return spectrum_entropy(schmidt_coefficients(psi, cut, 0.0).array().square().matrix(), base);
}

/// S(A) + S(B) - S(AB) for the contiguous cut.
inline double mutual_information(const DensityMatrix& rho, int cut = 1, LogBase base = LogBase::bits) {
  detail::check_cut(rho.dims(), cut);
  std::vector<int> a, b;
  for (int s = 0; s < rho.sites(); ++s) (s < cut ? a : b).push_back(s);
  return von_neumann_entropy(partial_trace(rho, a), base) + von_neumann_entropy(partial_trace(rho, b), base) -
         von_neumann_entropy(rho, base);
}

/// Reorders sites: site k of the result is site order[k] of the input.
inline DensityMatrix permute_sites(const DensityMatrix& rho, const std::vector<int>& order) {
  const int n = rho.sites();
  if (static_cast<int>(order.size()) != n) throw DimensionError("permute_sites: order length != site count");
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  for (int s : order) {
    if (s < 0 || s >= n || seen[static_cast<std::size_t>(s)]) throw DimensionError("permute_sites: not a permutation");
    seen[static_cast<std::size_t>(s)] = true;
  }
  Dims nd;
  for (int s : order) nd.push_back(rho.dims()[static_cast<std::size_t>(s)]);
  // Map each new index to its old index.
  std::vector<Eigen::Index> old_of(static_cast<std::size_t>(rho.dim()));
  std::vector<int> digit(static_cast<std::size_t>(n));
  for (Eigen::Index idx = 0; idx < rho.dim(); ++idx) {
    Eigen::Index rem = idx;
    for (int k = n - 1; k >= 0; --k) {
      digit[static_cast<std::size_t>(order[static_cast<std::size_t>(k)])] = static_cast<int>(rem % nd[static_cast<std::size_t>(k)]);
      rem /= nd[static_cast<std::size_t>(k)];
    }
    Eigen::Index old = 0;
    for (int s = 0; s < n; ++s) old = old * rho.dims()[static_cast<std::size_t>(s)] + digit[static_cast<std::size_t>(s)];
    old_of[static_cast<std::size_t>(idx)] = old;
  }
  DenseOperator out(rho.dim(), rho.dim());
  for (Eigen::Index b = 0; b < rho.dim(); ++b)
    for (Eigen::Index a = 0; a < rho.dim(); ++a) out(a, b) = rho.matrix()(old_of[static_cast<std::size_t>(a)], old_of[static_cast<std::size_t>(b)]);
  return DensityMatrix(nd, out);
}

// Standard states.

/// |psi_+^(d)> = sum_i |ii> / sqrt(d).
inline PureState max_entangled(int d) {
  StateVector v = StateVector::Zero(static_cast<Eigen::Index>(d) * d);
  for (int i = 0; i < d; ++i) v(i * d + i) = 1.0 / std::sqrt(static_cast<double>(d));
  return PureState({d, d}, v);
}

/// P_+^(d) = |psi_+^(d)><psi_+^(d)|.
inline DenseOperator max_entangled_projector(int d) { return max_entangled(d).projector(); }

/// Computational basis state |digits> on the given dims.
inline PureState basis_state(const Dims& dims, const std::vector<int>& digits) {
  if (digits.size() != dims.size()) throw DimensionError("basis_state: digit count != site count");
  Eigen::Index idx = 0;
  for (std::size_t s = 0; s < dims.size(); ++s) {
    if (digits[s] < 0 || digits[s] >= dims[s]) throw DimensionError("basis_state: digit out of range");
    idx = idx * dims[s] + digits[s];
  }
  StateVector v = StateVector::Zero(dims_product(dims));
  v(idx) = 1.0;
  return PureState(dims, v);
}

inline PureState product_state(const std::vector<StateVector>& factors) {
  Dims dims;
  StateVector v = StateVector::Ones(1);
  for (const auto& f : factors) {
    dims.push_back(static_cast<int>(f.size()));
    v = kron(DenseOperator(v), DenseOperator(f)).col(0);
  }
  return PureState(dims, v, true);
}

inline DensityMatrix maximally_mixed(const Dims& dims) {
  const Eigen::Index d = dims_product(dims);
  return DensityMatrix(dims, DenseOperator::Identity(d, d) / static_cast<double>(d));
}

inline DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b) {
  Dims dims = a.dims();
  dims.insert(dims.end(), b.dims().begin(), b.dims().end());
  return DensityMatrix(dims, kron(a.matrix(), b.matrix()));
}

}  // namespace entlab
