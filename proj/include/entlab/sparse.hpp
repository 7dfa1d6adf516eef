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

#pragma once

#include <Eigen/Sparse>
#include <vector>

#include "entlab/linalg.hpp"

namespace entlab {

/// Square sparse operator assembled from (row, col, value) triplets and stored
/// in compressed-row form for matrix-vector products. Duplicate triplets are
/// summed during assembly, so the stored form has one entry per (row, col).
template <class Scalar>
class SparseOperator {
 public:
  using Triplet = Eigen::Triplet<Scalar>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using Dense = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Storage = Eigen::SparseMatrix<Scalar, Eigen::RowMajor>;

  SparseOperator() = default;

  static SparseOperator from_triplets(Eigen::Index dim, const std::vector<Triplet>& triplets) {
    if (dim <= 0) throw DimensionError("SparseOperator: dimension must be positive");
    for (const auto& t : triplets) {
      if (t.row() < 0 || t.col() < 0 || t.row() >= dim || t.col() >= dim) {
        throw DimensionError("SparseOperator: triplet index out of range");
      }
    }
    SparseOperator op;
    op.m_.resize(dim, dim);
    op.m_.setFromTriplets(triplets.begin(), triplets.end());
    op.m_.makeCompressed();
    return op;
  }

  static SparseOperator from_dense(const Dense& a, double drop = 0.0) {
    std::vector<Triplet> t;
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      for (Eigen::Index j = 0; j < a.cols(); ++j)
        if (std::abs(a(i, j)) > drop) t.emplace_back(i, j, a(i, j));
    return from_triplets(a.rows(), t);
  }

  Eigen::Index dim() const { return m_.rows(); }
  Eigen::Index nonzeros() const { return m_.nonZeros(); }
  const Storage& csr() const { return m_; }

  Vector apply(const Vector& x) const {
    if (x.size() != dim()) throw DimensionError("SparseOperator::apply: size mismatch");
    return m_ * x;
  }

  Dense to_dense() const { return Dense(m_); }

  /// Largest |a_ij - conj(a_ji)|.
  double max_asymmetry() const {
    Storage diff = Storage(m_.adjoint()) - m_;
    double worst = 0.0;
    for (Eigen::Index k = 0; k < diff.outerSize(); ++k)
      for (typename Storage::InnerIterator it(diff, k); it; ++it) worst = std::max(worst, std::abs(it.value()));
    return worst;
  }

 private:
  Storage m_;
};

using RealSparse = SparseOperator<double>;
using ComplexSparse = SparseOperator<cplx>;

}  // namespace entlab
