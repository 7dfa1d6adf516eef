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

// Lowest eigenpairs of large Hermitian operators.
//
// Each Lanczos run keeps the full Krylov basis and reorthogonalises every new
// vector twice, against the basis and against all previously locked
// eigenvectors. Converged Ritz pairs are locked and the next run starts from a
// fresh random vector orthogonal to them, so an exactly degenerate level (which
// a single Krylov space only sees once) is picked up by a later run. The
// search stops when a run finds nothing below the k-th locked value.

#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <vector>

#include "entlab/rng.hpp"
#include "entlab/sparse.hpp"

namespace entlab {

/// Accepted pairs are re-checked against ||A x - theta x|| at this relative level.
inline constexpr double kLanczosResidualGuard = 1e-6;

struct LanczosOptions {
  int max_krylov = 250;
  /// Residual tolerance ||A x - theta x|| <= tol * max(1, |theta|).
  double tol = 1e-9;
  int max_runs = 64;
  int max_restarts = 200;
  bool want_vectors = true;
};

template <class Scalar>
struct LowestEigenpairs {
  std::vector<double> values;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> vectors;
  long matvecs = 0;
};

namespace detail {

template <class Scalar>
Scalar random_entry(Rng& rng) {
  if constexpr (std::is_same_v<Scalar, double>) {
    return rng.normal();
  } else {
    return rng.complex_normal();
  }
}

template <class Mat, class Vec>
void project_out(const Mat& basis, Eigen::Index cols, Vec& w) {
  if (cols == 0) return;
  for (int pass = 0; pass < 2; ++pass) {
    const Vec h = basis.leftCols(cols).adjoint() * w;
    w.noalias() -= basis.leftCols(cols) * h;
  }
}

/// Removes components along the Krylov basis and the locked vectors. The
/// locked projection goes last in each pass: done first, the basis projection
/// feeds locked components back in and they grow geometrically with the step.
template <class Mat, class Vec>
void project_out_both(const Mat& locked, const Mat& basis, Eigen::Index cols, Vec& w) {
  for (int pass = 0; pass < 2; ++pass) {
    if (cols > 0) w.noalias() -= basis.leftCols(cols) * (basis.leftCols(cols).adjoint() * w).eval();
    if (locked.cols() > 0) w.noalias() -= locked * (locked.adjoint() * w).eval();
  }
}

}  // namespace detail

/// k lowest eigenpairs of the Hermitian operator given by `apply` (y = A x) on
/// a space of dimension `dim`.
template <class Scalar, class Apply>
LowestEigenpairs<Scalar> lanczos_lowest_fn(Eigen::Index dim, Apply&& apply, int k, std::uint64_t seed,
                                           const LanczosOptions& opt = {}) {
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  if (k < 1) throw DomainError("lanczos_lowest: k must be >= 1");
  if (dim < 1) throw DimensionError("lanczos_lowest: empty operator");
  k = static_cast<int>(std::min<Eigen::Index>(k, dim));

  Mat locked(dim, 0);
  std::vector<double> locked_values;
  long matvecs = 0;
  Rng rng(seed, 0x6c616e63ULL);

  auto kth_locked = [&]() {
    std::vector<double> v = locked_values;
    std::sort(v.begin(), v.end());
    return v[static_cast<std::size_t>(k - 1)];
  };

  for (int run = 0; run < opt.max_runs; ++run) {
    const Eigen::Index free_dim = dim - locked.cols();
    if (free_dim <= 0) break;
    const bool confirming = static_cast<int>(locked_values.size()) >= k;
    const int want = confirming ? 1 : k - static_cast<int>(locked_values.size());

    Vec start(dim);
    for (Eigen::Index i = 0; i < dim; ++i) start(i) = detail::random_entry<Scalar>(rng);
    detail::project_out(locked, locked.cols(), start);
    if (start.norm() < 1e-10) break;
    start.normalize();

    const Eigen::Index m_max = std::min<Eigen::Index>(opt.max_krylov, free_dim);
    Mat basis(dim, m_max);
    std::vector<double> found_values;
    Mat found_vectors(dim, 0);
    bool run_done = false;

    for (int restart = 0; restart < opt.max_restarts && !run_done; ++restart) {
      std::vector<double> alpha;
      std::vector<double> beta;
      basis.col(0) = start;
      Eigen::Index m = 0;
      bool invariant = false;
      Vec w;
      while (m < m_max) {
        w = apply(basis.col(m));
        ++matvecs;
        const double a = std::real(basis.col(m).dot(w));
        alpha.push_back(a);
        detail::project_out_both(locked, basis, m + 1, w);
        const double b = w.norm();
        ++m;
        if (b < 1e-12 * std::max(1.0, std::abs(a))) {
          invariant = true;
          break;
        }
        if (m == m_max) {
          beta.push_back(b);
          break;
        }
        beta.push_back(b);
        basis.col(m) = w / b;
      }

      // Ritz values of the tridiagonal projection.
      RealMatrix t = RealMatrix::Zero(m, m);
      for (Eigen::Index i = 0; i < m; ++i) {
        t(i, i) = alpha[static_cast<std::size_t>(i)];
        if (i + 1 < m) t(i, i + 1) = t(i + 1, i) = beta[static_cast<std::size_t>(i)];
      }
      Eigen::SelfAdjointEigenSolver<RealMatrix> tri(t);
      const double b_last = invariant ? 0.0 : (beta.size() >= static_cast<std::size_t>(m) ? beta.back() : 0.0);

      const int look = static_cast<int>(std::min<Eigen::Index>(want, m));
      int converged = 0;
      for (int i = 0; i < look; ++i) {
        const double theta = tri.eigenvalues()(i);
        const double est = std::abs(b_last * tri.eigenvectors()(m - 1, i));
        if (est <= opt.tol * std::max(1.0, std::abs(theta))) {
          ++converged;
        } else {
          break;
        }
      }
      // An exhausted Krylov space is exact for every Ritz pair it holds.
      if (invariant) converged = static_cast<int>(std::min<Eigen::Index>(m, std::max(want, 1)));

      if (converged > 0) {
        for (int i = 0; i < converged; ++i) {
          Vec x = basis.leftCols(m) * tri.eigenvectors().col(i).template cast<Scalar>();
          detail::project_out(found_vectors, found_vectors.cols(), x);
          detail::project_out(locked, locked.cols(), x);
          const double nx = x.norm();
          if (nx < 1e-8) continue;
          x /= nx;
          const Vec ax = apply(x);
          ++matvecs;
          const double theta = std::real(x.dot(ax));
          const double residual = (ax - theta * x).norm();
          if (residual > kLanczosResidualGuard * std::max(1.0, std::abs(theta))) {
            throw ConvergenceError("lanczos_lowest: accepted Ritz pair fails the true residual check",
                                   static_cast<int>(matvecs));
          }
          found_values.push_back(theta);
          found_vectors.conservativeResize(Eigen::NoChange, found_vectors.cols() + 1);
          found_vectors.col(found_vectors.cols() - 1) = x;
        }
        run_done = true;
      } else {
        // Restart from the combination of the wanted Ritz vectors.
        Vec next = Vec::Zero(dim);
        for (int i = 0; i < look; ++i) {
          next += basis.leftCols(m) * tri.eigenvectors().col(i).template cast<Scalar>();
        }
        detail::project_out(locked, locked.cols(), next);
        const double nn = next.norm();
        if (nn < 1e-12) break;
        start = next / nn;
      }
    }
    if (!run_done) {
      throw ConvergenceError("lanczos_lowest: no convergence within restart budget",
                             opt.max_restarts * opt.max_krylov);
    }

    if (confirming) {
      const double kth = kth_locked();
      const double slack = opt.tol * std::max(1.0, std::abs(kth));
      bool any_below = false;
      for (double v : found_values) any_below = any_below || v < kth - slack;
      // Equal within tolerance may still be a missed degenerate partner.
      bool any_equal = false;
      for (double v : found_values) any_equal = any_equal || std::abs(v - kth) <= 1e3 * slack;
      if (!any_below && !any_equal) break;
    }
    const Eigen::Index old = locked.cols();
    locked.conservativeResize(Eigen::NoChange, old + found_vectors.cols());
    locked.rightCols(found_vectors.cols()) = found_vectors;
    locked_values.insert(locked_values.end(), found_values.begin(), found_values.end());
  }

  if (static_cast<int>(locked_values.size()) < k) {
    throw ConvergenceError("lanczos_lowest: fewer converged eigenpairs than requested", opt.max_runs);
  }

  std::vector<std::size_t> order(locked_values.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return locked_values[a] < locked_values[b]; });

  LowestEigenpairs<Scalar> out;
  out.matvecs = matvecs;
  out.values.reserve(static_cast<std::size_t>(k));
  if (opt.want_vectors) out.vectors.resize(dim, k);
  for (int i = 0; i < k; ++i) {
    const auto idx = order[static_cast<std::size_t>(i)];
    out.values.push_back(locked_values[idx]);
    if (opt.want_vectors) out.vectors.col(i) = locked.col(static_cast<Eigen::Index>(idx));
  }
  return out;
}

/// k lowest eigenvalues (ascending) and eigenvectors of a Hermitian sparse operator.
template <class Scalar>
LowestEigenpairs<Scalar> lanczos_lowest(const SparseOperator<Scalar>& a, int k, std::uint64_t seed,
                                        const LanczosOptions& opt = {}) {
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  const double asym = a.max_asymmetry();
  if (asym > 1e-10) throw HermiticityError("lanczos_lowest: operator is not Hermitian", asym);
  return lanczos_lowest_fn<Scalar>(
      a.dim(), [&a](const auto& x) -> Vec { return a.csr() * x; }, k, seed, opt);
}

}  // namespace entlab
