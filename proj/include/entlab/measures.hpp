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

// Entanglement measures, witnesses and linear maps on operators.
//
// Choi convention: Choi(L) = (I (x) L)(d P_+^(d)) = sum_ij |i><j| (x) L(|i><j|),
// so block (i, j) of the Choi matrix is L(|i><j|) and Choi(identity) has
// trace d.

#pragma once

#include <functional>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "entlab/rng.hpp"
#include "entlab/states.hpp"

namespace entlab {

/// N = sum of |negative eigenvalues| of rho^{T_B}.
inline double negativity(const DensityMatrix& rho, int cut = 1) {
  const RealVector ev = hermitian_eigenvalues(partial_transpose(rho, Subsystem::B, cut));
  double n = 0.0;
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    if (ev(i) < 0.0) n -= ev(i);
  return n;
}

/// log2 of the trace norm of rho^{T_B}.
inline double log_negativity(const DensityMatrix& rho, int cut = 1) {
  return std::max(0.0, std::log2(trace_norm(partial_transpose(rho, Subsystem::B, cut))));
}

/// sqrt(2 (1 - tr rho_A^2)) for a bipartite pure state.
inline double concurrence_pure(const PureState& psi, int cut = 1) {
  const RealVector lam = schmidt_coefficients(psi, cut, 0.0);
  const double purity = lam.array().pow(4).sum();
  return std::sqrt(std::max(0.0, 2.0 * (1.0 - purity)));
}

namespace detail {
inline void require_two_qubits(const DensityMatrix& rho, const char* who) {
  if (rho.dims() != Dims{2, 2}) throw DimensionError(std::string(who) + ": requires a 2x2 (two-qubit) state");
}
}  // namespace detail

/// Two-qubit concurrence max{0, l1 - l2 - l3 - l4}. Eigenvalues of rho and of
/// sqrt(rho) rho~ sqrt(rho) that sit at roundoff level (below 1e-14 of the
/// largest) are clamped to zero before taking square roots.
inline double concurrence_2q(const DensityMatrix& rho) {
  detail::require_two_qubits(rho, "concurrence_2q");
  constexpr double kRoundoff = 1e-14;
  const auto clamped_sqrt = [](const RealVector& v) {
    const double top = std::max(0.0, v.maxCoeff());
    RealVector r(v.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) r(i) = v(i) > kRoundoff * top ? std::sqrt(v(i)) : 0.0;
    return r;
  };
  const DenseOperator yy = kron(pauli::y(), pauli::y());
  const DenseOperator tilde = yy * rho.matrix().conjugate() * yy;
  const HermitianEig e = hermitian_eig(rho.matrix());
  const DenseOperator root = e.vectors * clamped_sqrt(e.values).cast<cplx>().asDiagonal() * e.vectors.adjoint();
  const DenseOperator m = root * tilde * root;
  // Ascending order: ev(3) is the largest.
  const RealVector ev = clamped_sqrt(hermitian_eigenvalues((m + m.adjoint()) * 0.5, 1e-8));
  return std::max(0.0, ev(3) - ev(2) - ev(1) - ev(0));
}

/// H(x) = -x log2 x - (1-x) log2(1-x).
inline double binary_entropy(double x) {
  // Adding +0.0 turns the -0.0 of a zero entropy into +0.0.
  return -xlogx(x, std::numbers::ln2) - xlogx(1.0 - x, std::numbers::ln2) + 0.0;
}

inline double eof_from_concurrence(double c) {
  c = std::clamp(c, 0.0, 1.0);
  return binary_entropy(0.5 * (1.0 + std::sqrt(std::max(0.0, 1.0 - c * c))));
}

/// Entanglement of formation of a two-qubit state, in bits.
inline double eof_2q(const DensityMatrix& rho) { return eof_from_concurrence(concurrence_2q(rho)); }

class Witness {
 public:
  /// Rejects non-Hermitian operators and operators without a negative eigenvalue.
  Witness(DenseOperator op, int da, int db) : da_(da), db_(db) {
    if (op.rows() != static_cast<Eigen::Index>(da) * db || op.cols() != op.rows())
      throw DimensionError("Witness: operator size != d_A * d_B");
    op_ = checked_hermitian(op);
    min_eig_ = hermitian_eigenvalues(op_)(0);
    if (min_eig_ >= -1e-12) throw DomainError("Witness: operator has no negative eigenvalue");
  }

  const DenseOperator& op() const { return op_; }
  int da() const { return da_; }
  int db() const { return db_; }
  double min_eigenvalue() const { return min_eig_; }

  double value(const DensityMatrix& rho) const {
    if (rho.dim() != op_.rows()) throw DimensionError("witness_value: dimension mismatch");
    return (op_ * rho.matrix()).trace().real();
  }

 private:
  DenseOperator op_;
  int da_ = 0;
  int db_ = 0;
  double min_eig_ = 0.0;
};

inline double witness_value(const Witness& w, const DensityMatrix& rho) { return w.value(rho); }

/// W = (|psi><psi|)^{T_B} for the eigenvector psi of rho^{T_B} with the most
/// negative eigenvalue; tr(W rho) equals that eigenvalue.
inline Witness witness_from_npt(const DensityMatrix& rho, double tol = 1e-10) {
  const auto [da, db] = cut_dims(rho.dims(), 1);
  const HermitianEig e = hermitian_eig(partial_transpose(rho.matrix(), da, db, Subsystem::B));
  if (e.values(0) >= -tol) throw DomainError("witness_from_npt: state is PPT, no NPT witness derivable");
  const StateVector v = e.vectors.col(0);
  const DenseOperator proj = v * v.adjoint();
  return Witness(partial_transpose(proj, da, db, Subsystem::B), static_cast<int>(da), static_cast<int>(db));
}

/// Swap operator V|i j> = |j i> on C^d (x) C^d; equals d (P_+^(d))^{T_B}.
inline DenseOperator swap_operator(int d) {
  const Eigen::Index dd = static_cast<Eigen::Index>(d) * d;
  DenseOperator v = DenseOperator::Zero(dd, dd);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) v(j * d + i, i * d + j) = 1.0;
  return v;
}

struct KrausTerm {
  double eta = 1.0;
  DenseOperator v;  // d_out x d_in
};

/// L(X) = sum_i eta_i V_i X V_i^dagger, or an explicit Choi matrix.
class LinearMapOnOperators {
 public:
  static LinearMapOnOperators from_kraus(std::vector<KrausTerm> terms, int d_in, int d_out) {
    for (const auto& t : terms)
      if (t.v.rows() != d_out || t.v.cols() != d_in) throw DimensionError("LinearMap: Kraus operator has wrong shape");
    LinearMapOnOperators m(d_in, d_out);
    m.rep_ = std::move(terms);
    m.validate();
    return m;
  }

  static LinearMapOnOperators from_choi(DenseOperator choi, int d_in, int d_out) {
    const Eigen::Index n = static_cast<Eigen::Index>(d_in) * d_out;
    if (choi.rows() != n || choi.cols() != n) throw DimensionError("LinearMap: Choi matrix has wrong shape");
    LinearMapOnOperators m(d_in, d_out);
    m.rep_ = std::move(choi);
    m.validate();
    return m;
  }

  /// Builds the Choi matrix by evaluating f on every matrix unit |i><j|.
  static LinearMapOnOperators from_function(const std::function<DenseOperator(const DenseOperator&)>& f, int d_in,
                                            int d_out) {
    DenseOperator choi(static_cast<Eigen::Index>(d_in) * d_out, static_cast<Eigen::Index>(d_in) * d_out);
    for (int i = 0; i < d_in; ++i)
      for (int j = 0; j < d_in; ++j) {
        DenseOperator e = DenseOperator::Zero(d_in, d_in);
        e(i, j) = 1.0;
        const DenseOperator out = f(e);
        if (out.rows() != d_out || out.cols() != d_out) throw DimensionError("LinearMap: function output has wrong shape");
        choi.block(static_cast<Eigen::Index>(i) * d_out, static_cast<Eigen::Index>(j) * d_out, d_out, d_out) = out;
      }
    return from_choi(std::move(choi), d_in, d_out);
  }

  int d_in() const { return d_in_; }
  int d_out() const { return d_out_; }
  bool has_kraus() const { return std::holds_alternative<std::vector<KrausTerm>>(rep_); }
  const std::vector<KrausTerm>& kraus() const { return std::get<std::vector<KrausTerm>>(rep_); }

  DenseOperator operator()(const DenseOperator& x) const {
    if (x.rows() != d_in_ || x.cols() != d_in_) throw DimensionError("LinearMap: input has wrong shape");
    DenseOperator out = DenseOperator::Zero(d_out_, d_out_);
    if (has_kraus()) {
      for (const auto& t : kraus()) out += t.eta * t.v * x * t.v.adjoint();
    } else {
      const auto& c = std::get<DenseOperator>(rep_);
      for (int i = 0; i < d_in_; ++i)
        for (int j = 0; j < d_in_; ++j)
          if (x(i, j) != cplx(0.0))
            out += x(i, j) * c.block(static_cast<Eigen::Index>(i) * d_out_, static_cast<Eigen::Index>(j) * d_out_,
                                     d_out_, d_out_);
    }
    return out;
  }

  DenseOperator choi() const {
    if (!has_kraus()) return std::get<DenseOperator>(rep_);
    const Eigen::Index n = static_cast<Eigen::Index>(d_in_) * d_out_;
    DenseOperator c(n, n);
    for (int i = 0; i < d_in_; ++i)
      for (int j = 0; j < d_in_; ++j) {
        DenseOperator e = DenseOperator::Zero(d_in_, d_in_);
        e(i, j) = 1.0;
        c.block(static_cast<Eigen::Index>(i) * d_out_, static_cast<Eigen::Index>(j) * d_out_, d_out_, d_out_) = (*this)(e);
      }
    return c;
  }

  /// Dual with respect to tr(Y L(X)) = tr(L*(Y) X).
  LinearMapOnOperators dual() const {
    if (has_kraus()) {
      std::vector<KrausTerm> t;
      for (const auto& k : kraus()) t.push_back({k.eta, k.v.adjoint()});
      return from_kraus(std::move(t), d_out_, d_in_);
    }
    const DenseOperator c = std::get<DenseOperator>(rep_);
    const int din = d_in_, dout = d_out_;
    return from_function(
        [c, din, dout](const DenseOperator& y) {
          DenseOperator out(din, din);
          for (int i = 0; i < din; ++i)
            for (int j = 0; j < din; ++j)
              out(j, i) = (y * c.block(static_cast<Eigen::Index>(i) * dout, static_cast<Eigen::Index>(j) * dout, dout, dout))
                              .trace();
          return out;
        },
        d_out_, d_in_);
  }

 private:
  LinearMapOnOperators(int d_in, int d_out) : d_in_(d_in), d_out_(d_out) {
    if (d_in < 1 || d_out < 1) throw DimensionError("LinearMap: dimensions must be positive");
  }

  void validate() const {
    const DenseOperator c = choi();
    const double asym = hermitian_asymmetry(c);
    if (asym > kHermitianTol * std::max(1.0, c.norm()))
      throw HermiticityError("LinearMap: Choi matrix is not Hermitian (map does not preserve Hermiticity)", asym);
  }

  int d_in_;
  int d_out_;
  std::variant<std::vector<KrausTerm>, DenseOperator> rep_;
};

inline DenseOperator choi_matrix(const LinearMapOnOperators& map) { return map.choi(); }

/// (L (x) I) or (I (x) L) applied to a bipartite operator with factor dims (d_A, d_B).
inline DenseOperator apply_map(const LinearMapOnOperators& map, const DenseOperator& rho, Eigen::Index da,
                               Eigen::Index db, Subsystem on) {
  if (rho.rows() != da * db || rho.cols() != da * db) throw DimensionError("apply_map: size != d_A * d_B");
  const Eigen::Index dout = map.d_out();
  if (on == Subsystem::B) {
    if (db != map.d_in()) throw DimensionError("apply_map: map source dimension != d_B");
    DenseOperator out(da * dout, da * dout);
    for (Eigen::Index a = 0; a < da; ++a)
      for (Eigen::Index b = 0; b < da; ++b) out.block(a * dout, b * dout, dout, dout) = map(rho.block(a * db, b * db, db, db));
    return out;
  }
  if (da != map.d_in()) throw DimensionError("apply_map: map source dimension != d_A");
  DenseOperator out(dout * db, dout * db);
  DenseOperator x(da, da);
  for (Eigen::Index mu = 0; mu < db; ++mu)
    for (Eigen::Index nu = 0; nu < db; ++nu) {
      for (Eigen::Index i = 0; i < da; ++i)
        for (Eigen::Index j = 0; j < da; ++j) x(i, j) = rho(i * db + mu, j * db + nu);
      const DenseOperator y = map(x);
      for (Eigen::Index i = 0; i < dout; ++i)
        for (Eigen::Index j = 0; j < dout; ++j) out(i * db + mu, j * db + nu) = y(i, j);
    }
  return out;
}

inline DenseOperator apply_map(const LinearMapOnOperators& map, const DensityMatrix& rho, Subsystem on, int cut = 1) {
  const auto [da, db] = cut_dims(rho.dims(), cut);
  return apply_map(map, rho.matrix(), da, db, on);
}

inline LinearMapOnOperators identity_map(int d) {
  return LinearMapOnOperators::from_kraus({{1.0, DenseOperator::Identity(d, d)}}, d, d);
}

inline LinearMapOnOperators transposition_map(int d) {
  return LinearMapOnOperators::from_function([](const DenseOperator& x) { return DenseOperator(x.transpose()); }, d, d);
}

/// X -> U X U^dagger.
inline LinearMapOnOperators unitary_map(const DenseOperator& u) {
  const int d = static_cast<int>(u.rows());
  if (u.cols() != d || (u.adjoint() * u - DenseOperator::Identity(d, d)).norm() > 1e-10)
    throw DomainError("unitary_map: operator is not unitary");
  return LinearMapOnOperators::from_kraus({{1.0, u}}, d, d);
}

/// L_r(X) = tr(X) 1 - X, as eta = +1 terms |i><j| and one eta = -1 identity term.
inline LinearMapOnOperators reduction_map(int d) {
  std::vector<KrausTerm> terms;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      DenseOperator e = DenseOperator::Zero(d, d);
      e(i, j) = 1.0;
      terms.push_back({1.0, e});
    }
  terms.push_back({-1.0, DenseOperator::Identity(d, d)});
  return LinearMapOnOperators::from_kraus(std::move(terms), d, d);
}

/// L(X) = tr(X) 1 - X - U X^T U^dagger with U^T = -U and U^dagger U <= 1.
inline LinearMapOnOperators extended_reduction_map(const DenseOperator& u) {
  const int d = static_cast<int>(u.rows());
  if (u.cols() != d) throw DimensionError("extended_reduction_map: U must be square");
  if ((u.transpose() + u).cwiseAbs().maxCoeff() > 1e-10) throw DomainError("extended_reduction_map: U^T != -U");
  if (hermitian_eigenvalues(u.adjoint() * u)(d - 1) > 1.0 + 1e-10)
    throw DomainError("extended_reduction_map: U^dagger U exceeds the identity");
  return LinearMapOnOperators::from_function(
      [u, d](const DenseOperator& x) {
        return DenseOperator(x.trace() * DenseOperator::Identity(d, d) - x - u * x.transpose() * u.adjoint());
      },
      d, d);
}

/// L_W(X) = tr_B[W (1_A (x) X^T)], a map from B operators to A operators.
inline LinearMapOnOperators map_from_witness(const Witness& w) {
  const int da = w.da(), db = w.db();
  const DenseOperator op = w.op();
  return LinearMapOnOperators::from_function(
      [op, da, db](const DenseOperator& x) {
        const DenseOperator prod = op * kron(DenseOperator::Identity(da, da), x.transpose());
        DenseOperator out = DenseOperator::Zero(da, da);
        for (int a = 0; a < da; ++a)
          for (int b = 0; b < da; ++b)
            for (int mu = 0; mu < db; ++mu) out(a, b) += prod(a * db + mu, b * db + mu);
        return out;
      },
      db, da);
}

struct CpResult {
  bool completely_positive = false;
  double min_choi_eigenvalue = 0.0;
  std::vector<DenseOperator> kraus;  // filled when completely positive
};

/// CP iff the Choi matrix is PSD within -1e-9 * tr(Choi); Kraus operators
/// then come from its eigenvectors and are Hilbert-Schmidt orthogonal.
inline CpResult is_completely_positive(const LinearMapOnOperators& map) {
  const DenseOperator c = map.choi();
  const HermitianEig e = hermitian_eig(c);
  const double tol = 1e-9 * std::max(1.0, std::abs(c.trace().real()));
  CpResult r;
  r.min_choi_eigenvalue = e.values(0);
  r.completely_positive = e.values(0) >= -tol;
  if (!r.completely_positive) return r;
  const int din = map.d_in(), dout = map.d_out();
  for (Eigen::Index k = 0; k < e.values.size(); ++k) {
    if (e.values(k) <= tol) continue;
    DenseOperator kr(dout, din);
    for (int i = 0; i < din; ++i)
      for (int mu = 0; mu < dout; ++mu) kr(mu, i) = std::sqrt(e.values(k)) * e.vectors(static_cast<Eigen::Index>(i) * dout + mu, k);
    r.kraus.push_back(std::move(kr));
  }
  return r;
}

/// Random separable state: a mixture of K <= (d_A d_B)^2 Haar product
/// projectors with flat Dirichlet weights. A sampler, not a separability oracle.
inline DensityMatrix random_separable(int da, int db, Rng& rng, int k = 0) {
  const int kmax = da * db * da * db;
  if (k <= 0) k = 1 + static_cast<int>(rng.bits() % static_cast<std::uint64_t>(kmax));
  if (k > kmax) throw DomainError("random_separable: K exceeds (d_A d_B)^2");
  std::vector<double> w(static_cast<std::size_t>(k));
  double total = 0.0;
  for (auto& x : w) total += (x = -std::log(1.0 - rng.uniform()));
  const Eigen::Index n = static_cast<Eigen::Index>(da) * db;
  DenseOperator rho = DenseOperator::Zero(n, n);
  for (int i = 0; i < k; ++i) {
    const StateVector a = rng.haar_state(da);
    const StateVector b = rng.haar_state(db);
    const StateVector ab = kron(DenseOperator(a), DenseOperator(b)).col(0);
    rho += (w[static_cast<std::size_t>(i)] / total) * ab * ab.adjoint();
  }
  return DensityMatrix({da, db}, rho);
}

/// p P_+^(2) + (1 - p) 1/4.
inline DensityMatrix werner_state(double p) {
  if (p < 0.0 || p > 1.0) throw DomainError("werner_state: p must lie in [0, 1]");
  return DensityMatrix({2, 2}, p * max_entangled_projector(2) + (1.0 - p) * DenseOperator::Identity(4, 4) / 4.0);
}

}  // namespace entlab
