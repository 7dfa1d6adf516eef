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

// Spin-chain Hamiltonians as local term lists, exact ground states, block
// entropy scans and the thermal / classical mutual-information area laws.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <sstream>
#include <vector>

#include "entlab/errors.hpp"
#include "entlab/free_fermion.hpp"
#include "entlab/lanczos.hpp"
#include "entlab/linalg.hpp"
#include "entlab/mps.hpp"
#include "entlab/sparse.hpp"
#include "entlab/states.hpp"

namespace entlab {

/// Largest Hilbert-space dimension diagonalized densely.
inline constexpr Eigen::Index kDenseDimLimit = 4096;
/// Above this dimension Solver::automatic switches from dense to Lanczos.
inline constexpr Eigen::Index kDenseAutoDim = 1024;
/// Largest dimension handed to the matrix-free Lanczos path (N = 20 at d = 2).
inline constexpr Eigen::Index kLanczosDimLimit = Eigen::Index{1} << 20;

/// One local term: `op` acts on the tensor product of the listed sites, in
/// the listed order.
struct HamiltonianTerm {
  std::vector<int> sites;
  DenseOperator op;
};

class SpinHamiltonian {
 public:
  SpinHamiltonian(int n, int local_dim, Boundary bc) : n_(n), d_(local_dim), bc_(bc) {
    if (n < 1) throw DomainError("SpinHamiltonian: N must be >= 1");
    if (local_dim < 2) throw DimensionError("SpinHamiltonian: local dimension must be >= 2");
    double dim = std::pow(static_cast<double>(d_), n_);
    if (dim > static_cast<double>(std::numeric_limits<std::int32_t>::max())) {
      throw ResourceLimitError("SpinHamiltonian: Hilbert space too large to index");
    }
    dim_ = static_cast<Eigen::Index>(std::llround(dim));
  }

  /// Adds coeff * op on `sites`. The product must be Hermitian.
  void add_term(std::vector<int> sites, const DenseOperator& op, double coeff = 1.0) {
    if (sites.empty()) throw DimensionError("SpinHamiltonian: term without support");
    std::vector<int> sorted = sites;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      throw DimensionError("SpinHamiltonian: repeated site in term support");
    }
    if (sorted.front() < 0 || sorted.back() >= n_) throw DimensionError("SpinHamiltonian: term support outside lattice");
    Eigen::Index local = 1;
    for (std::size_t k = 0; k < sites.size(); ++k) local *= d_;
    if (op.rows() != local || op.cols() != local) throw DimensionError("SpinHamiltonian: term operator has wrong size");
    const double asym = (op - op.adjoint()).cwiseAbs().maxCoeff();
    if (asym > 1e-12) throw HermiticityError("SpinHamiltonian: term is not Hermitian", asym);
    terms_.push_back({std::move(sites), coeff * op});
  }

  /// coeff * (ops[0] on sites[0]) (x) (ops[1] on sites[1]) ...
  void add_product(double coeff, const std::vector<int>& sites, const std::vector<DenseOperator>& ops) {
    if (sites.size() != ops.size()) throw DimensionError("SpinHamiltonian: sites and operators differ in length");
    add_term(sites, kron_all(ops), coeff);
  }

  int sites() const { return n_; }
  int local_dim() const { return d_; }
  Boundary boundary() const { return bc_; }
  Eigen::Index dim() const { return dim_; }
  Dims dims() const { return Dims(static_cast<std::size_t>(n_), d_); }
  const std::vector<HamiltonianTerm>& terms() const { return terms_; }

  /// y = H x without assembling H.
  StateVector apply(const StateVector& x) const {
    if (x.size() != dim_) throw DimensionError("SpinHamiltonian::apply: size mismatch");
    StateVector y = StateVector::Zero(dim_);
    for (const auto& t : terms_) {
      for_each_entry(t, [&](Eigen::Index row, Eigen::Index col, cplx v) { y(row) += v * x(col); });
    }
    return y;
  }

  SparseOperator<cplx> to_sparse() const {
    if (dim_ > kLanczosDimLimit) throw ResourceLimitError("SpinHamiltonian::to_sparse: dimension above limit");
    std::vector<Eigen::Triplet<cplx>> trip;
    for (const auto& t : terms_) {
      for_each_entry(t, [&](Eigen::Index row, Eigen::Index col, cplx v) { trip.emplace_back(row, col, v); });
    }
    return SparseOperator<cplx>::from_triplets(dim_, trip);
  }

  /// Real sparse matrix; throws when an entry has an imaginary part.
  SparseOperator<double> to_sparse_real() const {
    if (dim_ > kLanczosDimLimit) throw ResourceLimitError("SpinHamiltonian::to_sparse_real: dimension above limit");
    std::vector<Eigen::Triplet<double>> trip;
    for (const auto& t : terms_) {
      for_each_entry(t, [&](Eigen::Index row, Eigen::Index col, cplx v) {
        if (std::abs(v.imag()) > 1e-14) throw DomainError("SpinHamiltonian::to_sparse_real: complex matrix element");
        trip.emplace_back(row, col, v.real());
      });
    }
    return SparseOperator<double>::from_triplets(dim_, trip);
  }

  DenseOperator to_dense() const {
    if (dim_ > kDenseDimLimit) {
      std::ostringstream msg;
      msg << "SpinHamiltonian::to_dense: dimension " << dim_ << " exceeds dense limit " << kDenseDimLimit;
      throw ResourceLimitError(msg.str());
    }
    DenseOperator h = DenseOperator::Zero(dim_, dim_);
    for (const auto& t : terms_) {
      for_each_entry(t, [&](Eigen::Index row, Eigen::Index col, cplx v) { h(row, col) += v; });
    }
    return h;
  }

  /// Dense matrix of one term embedded in the full chain.
  DenseOperator term_dense(const HamiltonianTerm& t) const {
    if (dim_ > kDenseDimLimit) throw ResourceLimitError("SpinHamiltonian::term_dense: dimension above dense limit");
    DenseOperator h = DenseOperator::Zero(dim_, dim_);
    for_each_entry(t, [&](Eigen::Index row, Eigen::Index col, cplx v) { h(row, col) += v; });
    return h;
  }

  /// <psi|H|psi>.
  double energy(const PureState& psi) const {
    return psi.amplitudes().dot(apply(psi.amplitudes())).real();
  }

 private:
  template <class F>
  void for_each_entry(const HamiltonianTerm& t, F&& f) const {
    const std::size_t m = t.sites.size();
    std::vector<Eigen::Index> stride(m);
    for (std::size_t k = 0; k < m; ++k) {
      Eigen::Index s = 1;
      for (int j = t.sites[k] + 1; j < n_; ++j) s *= d_;
      stride[k] = s;
    }
    struct Entry {
      Eigen::Index row, col;
      cplx v;
    };
    std::vector<Entry> nz;
    for (Eigen::Index c = 0; c < t.op.cols(); ++c)
      for (Eigen::Index r = 0; r < t.op.rows(); ++r)
        if (t.op(r, c) != cplx(0.0)) nz.push_back({r, c, t.op(r, c)});
    // Offset of each local index in the full basis.
    std::vector<Eigen::Index> offset(static_cast<std::size_t>(t.op.rows()), 0);
    for (Eigen::Index l = 0; l < t.op.rows(); ++l) {
      Eigen::Index rest = l, off = 0;
      for (std::size_t k = m; k-- > 0;) {
        off += (rest % d_) * stride[k];
        rest /= d_;
      }
      offset[static_cast<std::size_t>(l)] = off;
    }
    std::vector<std::vector<const Entry*>> by_col(static_cast<std::size_t>(t.op.cols()));
    for (const auto& e : nz) by_col[static_cast<std::size_t>(e.col)].push_back(&e);
    for (Eigen::Index x = 0; x < dim_; ++x) {
      Eigen::Index l = 0;
      for (std::size_t k = 0; k < m; ++k) l = l * d_ + (x / stride[k]) % d_;
      const Eigen::Index base = x - offset[static_cast<std::size_t>(l)];
      for (const Entry* e : by_col[static_cast<std::size_t>(l)]) f(base + offset[static_cast<std::size_t>(e->row)], x, e->v);
    }
  }

  int n_;
  int d_;
  Boundary bc_;
  Eigen::Index dim_ = 0;
  std::vector<HamiltonianTerm> terms_;
};

namespace detail {

inline int bond_count(int n, Boundary bc, int range) {
  if (bc == Boundary::open) return std::max(0, n - range);
  if (n < 2 * range + 1) {
    std::ostringstream msg;
    msg << "periodic chain with range-" << range << " terms needs N >= " << 2 * range + 1;
    throw DomainError(msg.str());
  }
  return n;
}

}  // namespace detail

/// Spin-1 matrices in the basis m = +1, 0, -1.
namespace spin1 {
inline DenseOperator sz() { return RealVector::LinSpaced(3, 1.0, -1.0).cast<cplx>().asDiagonal(); }
inline DenseOperator splus() {
  DenseOperator s = DenseOperator::Zero(3, 3);
  s(0, 1) = s(1, 2) = std::sqrt(2.0);
  return s;
}
inline DenseOperator sminus() { return splus().adjoint(); }
inline DenseOperator sx() { return 0.5 * (splus() + sminus()); }
inline DenseOperator sy() { return cplx(0.0, -0.5) * (splus() - sminus()); }
}  // namespace spin1

/// -1/2 sum_j [((1+g)/2) X_j X_{j+1} + ((1-g)/2) Y_j Y_{j+1}] - (h/2) sum_j Z_j.
inline SpinHamiltonian build_xy(double gamma, double h, int n, Boundary bc) {
  if (gamma < 0.0 || gamma > 1.0) throw DomainError("build_xy: gamma must lie in [0, 1]");
  SpinHamiltonian ham(n, 2, bc);
  const int bonds = detail::bond_count(n, bc, 1);
  const DenseOperator bond =
      -0.5 * (0.5 * (1.0 + gamma) * kron(pauli::x(), pauli::x()) + 0.5 * (1.0 - gamma) * kron(pauli::y(), pauli::y()));
  for (int j = 0; j < bonds; ++j) ham.add_term({j, (j + 1) % n}, bond);
  if (h != 0.0)
    for (int j = 0; j < n; ++j) ham.add_term({j}, pauli::z(), -0.5 * h);
  return ham;
}

/// sum S.S + (S.S)^2 / 3 with spin-1 operators.
inline SpinHamiltonian build_aklt(int n, Boundary bc = Boundary::periodic) {
  SpinHamiltonian ham(n, 3, bc);
  const DenseOperator ss =
      kron(spin1::sx(), spin1::sx()) + kron(spin1::sy(), spin1::sy()) + kron(spin1::sz(), spin1::sz());
  const DenseOperator bond = ss + ss * ss / 3.0;
  const int bonds = detail::bond_count(n, bc, 1);
  for (int j = 0; j < bonds; ++j) ham.add_term({j, (j + 1) % n}, bond);
  return ham;
}

/// sum 2 s_i.s_{i+1} + s_i.s_{i+2} with Pauli vectors.
inline SpinHamiltonian build_mg(int n, Boundary bc = Boundary::periodic) {
  SpinHamiltonian ham(n, 2, bc);
  const DenseOperator ss = kron(pauli::x(), pauli::x()) + kron(pauli::y(), pauli::y()) + kron(pauli::z(), pauli::z());
  const int nnn = detail::bond_count(n, bc, 2);
  const int nn = bc == Boundary::periodic ? n : n - 1;
  for (int j = 0; j < nn; ++j) ham.add_term({j, (j + 1) % n}, ss, 2.0);
  for (int j = 0; j < nnn; ++j) ham.add_term({j, (j + 2) % n}, ss, 1.0);
  return ham;
}

/// sign * sum Z_{i-1} X_i Z_{i+1}.
inline SpinHamiltonian build_cluster(int sign, int n, Boundary bc = Boundary::periodic) {
  if (sign != 1 && sign != -1) throw DomainError("build_cluster: sign must be +1 or -1");
  SpinHamiltonian ham(n, 2, bc);
  if (bc == Boundary::periodic && n < 3) throw DomainError("build_cluster: periodic chain needs N >= 3");
  const int terms = bc == Boundary::periodic ? n : std::max(0, n - 2);
  const DenseOperator zxz = kron_all({pauli::z(), pauli::x(), pauli::z()});
  for (int j = 0; j < terms; ++j) ham.add_term({j, (j + 1) % n, (j + 2) % n}, zxz, static_cast<double>(sign));
  return ham;
}

enum class Solver { automatic, dense, lanczos };

struct GroundStates {
  std::vector<double> energies;   // ascending, one per returned state
  std::vector<PureState> states;  // orthonormal
  double gap = std::numeric_limits<double>::quiet_NaN();  // E_k - E_0 for the first level above the ground space
  int degeneracy = 1;             // levels within kDegeneracyTol of E_0 among those computed
  double residual = 0.0;          // max ||H psi - E psi||
  Solver used = Solver::dense;
};

inline constexpr double kDegeneracyTol = 1e-8;

/// `count` lowest eigenpairs. One extra level is computed when available so
/// the gap and ground degeneracy can be reported.
inline GroundStates ground_state(const SpinHamiltonian& h, int count = 1, Solver method = Solver::automatic,
                                 std::uint64_t seed = 20260101) {
  if (count < 1) throw DomainError("ground_state: count must be >= 1");
  const Eigen::Index dim = h.dim();
  if (count > dim) throw DomainError("ground_state: more states requested than the dimension");
  Solver use = method;
  if (use == Solver::automatic) use = dim <= kDenseAutoDim ? Solver::dense : Solver::lanczos;
  if (use == Solver::dense && dim > kDenseDimLimit) throw ResourceLimitError("ground_state: dense solve above dimension limit");
  if (dim > kLanczosDimLimit) {
    std::ostringstream msg;
    msg << "ground_state: dimension " << dim << " exceeds the sparse limit " << kLanczosDimLimit;
    throw ResourceLimitError(msg.str());
  }
  const int want = static_cast<int>(std::min<Eigen::Index>(dim, count + 1));
  std::vector<double> values;
  DenseOperator vectors;
  if (use == Solver::dense) {
    const HermitianEig eig = hermitian_eig(h.to_dense());
    values.assign(eig.values.data(), eig.values.data() + want);
    vectors = eig.vectors.leftCols(want);
  } else {
    LanczosOptions opt;
    opt.tol = 1e-11;
    const auto res = lanczos_lowest_fn<cplx>(
        dim, [&h](const StateVector& x) -> StateVector { return h.apply(x); }, want, seed, opt);
    values = res.values;
    vectors = res.vectors;
  }
  GroundStates out;
  out.used = use;
  out.degeneracy = 0;
  for (int k = 0; k < want; ++k)
    if (values[static_cast<std::size_t>(k)] - values[0] <= kDegeneracyTol) ++out.degeneracy;
  if (out.degeneracy < want) out.gap = values[static_cast<std::size_t>(out.degeneracy)] - values[0];
  for (int k = 0; k < count; ++k) {
    StateVector v = vectors.col(k);
    v.normalize();
    out.energies.push_back(values[static_cast<std::size_t>(k)]);
    out.residual = std::max(out.residual, (h.apply(v) - values[static_cast<std::size_t>(k)] * v).norm());
    out.states.emplace_back(h.dims(), v, true);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Block entropy scans and scaling fits.

enum class FitAbscissa { log2_n, chord };

/// log2 n, or the ring chord log2[(N/pi) sin(pi n/N)] which tends to log2 n for n << N.
inline double fit_abscissa(int n, int n_sites, FitAbscissa a) {
  if (n < 1) throw DomainError("fit_abscissa: block size must be >= 1");
  if (a == FitAbscissa::log2_n) return std::log2(static_cast<double>(n));
  return std::log2(n_sites / std::numbers::pi * std::sin(std::numbers::pi * n / n_sites));
}

struct EntropyScan {
  int sites = 0;
  std::vector<int> blocks;
  std::vector<double> entropies;  // bits
  FitAbscissa abscissa = FitAbscissa::log2_n;
  int fit_lo = 0, fit_hi = 0;     // inclusive block-size window used by the fit
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;          // rms deviation of the fit
  int fit_points = 0;
};

/// Default slope window [N/16, N/2].
inline std::pair<int, int> default_fit_window(int n_sites) { return {std::max(1, n_sites / 16), n_sites / 2}; }

/// Least-squares S = a x + b over the blocks inside [lo, hi].
inline void fit_entropy_scan(EntropyScan& scan, int lo, int hi) {
  scan.fit_lo = lo;
  scan.fit_hi = hi;
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < scan.blocks.size(); ++i) {
    const int n = scan.blocks[i];
    if (n < lo || n > hi || n < 1 || n >= scan.sites) continue;
    xs.push_back(fit_abscissa(n, scan.sites, scan.abscissa));
    ys.push_back(scan.entropies[i]);
  }
  scan.fit_points = static_cast<int>(xs.size());
  scan.slope = 0.0;
  scan.intercept = 0.0;
  scan.residual = 0.0;
  if (xs.empty()) return;
  const double k = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i] / k;
    my += ys[i] / k;
  }
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  scan.slope = sxx > 1e-14 ? sxy / sxx : 0.0;
  scan.intercept = my - scan.slope * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - (scan.slope * xs[i] + scan.intercept);
    ss += r * r;
  }
  scan.residual = std::sqrt(ss / k);
}

namespace detail {

inline void check_blocks(const std::vector<int>& blocks, int n_sites) {
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    if (blocks[i] < 0 || blocks[i] > n_sites) throw DimensionError("entropy scan: block size out of range");
    if (i > 0 && blocks[i] <= blocks[i - 1]) throw DomainError("entropy scan: block sizes must be strictly increasing");
  }
}

}  // namespace detail

/// S of the contiguous blocks {0..n-1}, in bits, with a fit over the default window.
inline EntropyScan block_entropy_scan(const PureState& psi, const std::vector<int>& blocks,
                                      FitAbscissa abscissa = FitAbscissa::log2_n) {
  const int n_sites = psi.sites();
  detail::check_blocks(blocks, n_sites);
  EntropyScan scan;
  scan.sites = n_sites;
  scan.blocks = blocks;
  scan.abscissa = abscissa;
  for (int b : blocks) {
    scan.entropies.push_back(b == 0 || b == n_sites ? 0.0 : entanglement_entropy(psi, b, LogBase::bits));
  }
  const auto [lo, hi] = default_fit_window(n_sites);
  fit_entropy_scan(scan, lo, hi);
  return scan;
}

/// Free-fermion scan of the XY chain; periodic chains fit against the chord.
inline EntropyScan xy_entropy_scan(double gamma, double h, int n_sites, const std::vector<int>& blocks, Boundary bc) {
  detail::check_blocks(blocks, n_sites);
  EntropyScan scan;
  scan.sites = n_sites;
  scan.blocks = blocks;
  scan.abscissa = bc == Boundary::periodic ? FitAbscissa::chord : FitAbscissa::log2_n;
  scan.entropies = xy_entropy_profile(gamma, h, n_sites, blocks, bc);
  const auto [lo, hi] = default_fit_window(n_sites);
  fit_entropy_scan(scan, lo, hi);
  return scan;
}

// ---------------------------------------------------------------------------
// Thermal states.

/// exp(-beta H) / Z from a dense diagonalization.
inline DensityMatrix thermal_state(const SpinHamiltonian& h, double beta) {
  if (!(beta >= 0.0) || !std::isfinite(beta)) throw DomainError("thermal_state: beta must be finite and >= 0");
  const HermitianEig eig = hermitian_eig(h.to_dense());
  RealVector w = (-(eig.values.array() - eig.values(0)) * beta).exp();
  w /= w.sum();
  const DenseOperator rho = eig.vectors * w.cast<cplx>().asDiagonal() * eig.vectors.adjoint();
  return DensityMatrix(h.dims(), rho);
}

/// F = tr(rho H) - S(rho) / beta, entropy in nats.
inline double free_energy(const DenseOperator& h, const DensityMatrix& rho, double beta) {
  if (!(beta > 0.0)) throw DomainError("free_energy: beta must be > 0");
  return (rho.matrix() * h).trace().real() - von_neumann_entropy(rho, LogBase::nats) / beta;
}

struct AreaLawCheck {
  double mutual_info_nats = 0.0;
  double mutual_info_bits = 0.0;
  double tight_bound = 0.0;   // beta tr[H_bd (rho_A (x) rho_B - rho_AB)], nats
  double simple_bound = 0.0;  // 2 beta max||h_t|| * (number of boundary terms), nats
  int boundary_terms = 0;
  double max_term_norm = 0.0;
  bool holds(double tol = 1e-9) const {
    return mutual_info_nats <= tight_bound + tol && tight_bound <= simple_bound + tol;
  }
};

/// Mutual information of the thermal state across sites [0, cut) | [cut, N)
/// together with the free-energy bound. Terms touching both sides form H_bd.
inline AreaLawCheck mutual_info_area_check(const SpinHamiltonian& h, double beta, int cut) {
  const int n = h.sites();
  if (cut < 1 || cut >= n) throw DimensionError("mutual_info_area_check: cut must lie in [1, N-1]");
  const DensityMatrix rho = thermal_state(h, beta);
  std::vector<int> left, right;
  for (int k = 0; k < n; ++k) (k < cut ? left : right).push_back(k);
  const DensityMatrix ra = partial_trace(rho, left);
  const DensityMatrix rb = partial_trace(rho, right);
  AreaLawCheck out;
  out.mutual_info_nats = std::max(0.0, von_neumann_entropy(ra, LogBase::nats) + von_neumann_entropy(rb, LogBase::nats) -
                                           von_neumann_entropy(rho, LogBase::nats));
  out.mutual_info_bits = out.mutual_info_nats / std::numbers::ln2;
  DenseOperator hb = DenseOperator::Zero(h.dim(), h.dim());
  for (const auto& t : h.terms()) {
    const bool in_a = std::any_of(t.sites.begin(), t.sites.end(), [&](int s) { return s < cut; });
    const bool in_b = std::any_of(t.sites.begin(), t.sites.end(), [&](int s) { return s >= cut; });
    if (!(in_a && in_b)) continue;
    hb += h.term_dense(t);
    ++out.boundary_terms;
    out.max_term_norm = std::max(out.max_term_norm, hermitian_eig(t.op).values.cwiseAbs().maxCoeff());
  }
  const DenseOperator diff = tensor(ra, rb).matrix() - rho.matrix();
  out.tight_bound = beta * (hb * diff).trace().real();
  out.simple_bound = 2.0 * beta * out.max_term_norm * out.boundary_terms;
  return out;
}

// ---------------------------------------------------------------------------
// Classical Gibbs chains.

inline constexpr double kMaxEnumeration = 1 << 22;

struct ClassicalMutualInfo {
  double mutual_info_bits = 0.0;           // I(A:B)
  double boundary_mutual_info_bits = 0.0;  // I(dA:dB)
  double bound_bits = 0.0;                 // |dA| log2 d
  double markov_violation = 0.0;           // max |p(x,c,y) - p(x,c) p(c,y) / p(c)|
  std::vector<int> boundary_a, boundary_b;
};

namespace detail {

inline double shannon_bits(const std::vector<double>& p) {
  double s = 0.0;
  for (double x : p) s -= xlogx(x, std::numbers::ln2);
  return s;
}

}  // namespace detail

/// Gibbs distribution p(s) ~ exp(-beta sum_k h[s_k, s_{k+1}]) on a ring of N
/// sites, enumerated exactly. A = [0, cut), B = [cut, N).
inline ClassicalMutualInfo classical_gibbs_mutual_info(const RealMatrix& h, double beta, int n, int cut) {
  const int d = static_cast<int>(h.rows());
  if (h.cols() != d || d < 2) throw DimensionError("classical_gibbs_mutual_info: coupling must be square, d >= 2");
  if (n < 3) throw DomainError("classical_gibbs_mutual_info: ring needs N >= 3");
  if (cut < 1 || cut >= n) throw DimensionError("classical_gibbs_mutual_info: cut must lie in [1, N-1]");
  if (!(beta >= 0.0)) throw DomainError("classical_gibbs_mutual_info: beta must be >= 0");
  if (std::pow(static_cast<double>(d), n) > kMaxEnumeration) {
    throw ResourceLimitError("classical_gibbs_mutual_info: configuration count above enumeration limit");
  }
  Eigen::Index total = 1;
  for (int k = 0; k < n; ++k) total *= d;
  std::vector<int> digits(static_cast<std::size_t>(n));
  std::vector<double> logw(static_cast<std::size_t>(total));
  for (Eigen::Index x = 0; x < total; ++x) {
    Eigen::Index rest = x;
    for (int k = n; k-- > 0;) {
      digits[static_cast<std::size_t>(k)] = static_cast<int>(rest % d);
      rest /= d;
    }
    double e = 0.0;
    for (int k = 0; k < n; ++k) e += h(digits[static_cast<std::size_t>(k)], digits[static_cast<std::size_t>((k + 1) % n)]);
    logw[static_cast<std::size_t>(x)] = -beta * e;
  }
  const double mx = *std::max_element(logw.begin(), logw.end());
  std::vector<double> p(logw.size());
  double z = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) z += (p[i] = std::exp(logw[i] - mx));
  for (double& x : p) x /= z;

  ClassicalMutualInfo out;
  out.boundary_a = {0};
  if (cut - 1 != 0) out.boundary_a.push_back(cut - 1);
  out.boundary_b = {cut};
  if (n - 1 != cut) out.boundary_b.push_back(n - 1);
  out.bound_bits = static_cast<double>(out.boundary_a.size()) * std::log2(static_cast<double>(d));

  // Marginal index of the digits listed in `sites`.
  auto code = [&](Eigen::Index x, const std::vector<int>& sites) {
    Eigen::Index c = 0;
    for (int s : sites) {
      Eigen::Index stride = 1;
      for (int j = s + 1; j < n; ++j) stride *= d;
      c = c * d + (x / stride) % d;
    }
    return c;
  };
  auto marginal = [&](const std::vector<int>& sites) {
    Eigen::Index size = 1;
    for (std::size_t k = 0; k < sites.size(); ++k) size *= d;
    std::vector<double> m(static_cast<std::size_t>(size), 0.0);
    for (Eigen::Index x = 0; x < total; ++x) m[static_cast<std::size_t>(code(x, sites))] += p[static_cast<std::size_t>(x)];
    return m;
  };
  std::vector<int> a, b, bd, interior;
  for (int k = 0; k < n; ++k) (k < cut ? a : b).push_back(k);
  for (int k : a)
    if (std::find(out.boundary_a.begin(), out.boundary_a.end(), k) == out.boundary_a.end()) interior.push_back(k);
  bd = out.boundary_a;
  bd.insert(bd.end(), out.boundary_b.begin(), out.boundary_b.end());

  const double hab = detail::shannon_bits(p);
  out.mutual_info_bits = std::max(0.0, detail::shannon_bits(marginal(a)) + detail::shannon_bits(marginal(b)) - hab);
  out.boundary_mutual_info_bits =
      std::max(0.0, detail::shannon_bits(marginal(out.boundary_a)) + detail::shannon_bits(marginal(out.boundary_b)) -
                        detail::shannon_bits(marginal(bd)));

  // Interior of A and B are independent given the boundary of A.
  std::vector<int> xc = interior, cy = out.boundary_a;
  xc.insert(xc.end(), out.boundary_a.begin(), out.boundary_a.end());
  cy.insert(cy.end(), b.begin(), b.end());
  const auto pxc = marginal(xc), pcy = marginal(cy), pc = marginal(out.boundary_a);
  for (Eigen::Index x = 0; x < total; ++x) {
    const double c = pc[static_cast<std::size_t>(code(x, out.boundary_a))];
    const double pred = c > 0.0 ? pxc[static_cast<std::size_t>(code(x, xc))] * pcy[static_cast<std::size_t>(code(x, cy))] / c : 0.0;
    out.markov_violation = std::max(out.markov_violation, std::abs(p[static_cast<std::size_t>(x)] - pred));
  }
  return out;
}

}  // namespace entlab
