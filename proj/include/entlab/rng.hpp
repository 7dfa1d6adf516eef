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

// Seeded random streams. A stream is identified by (seed, stream index); the
// same pair always yields the same sequence, independent of which thread or
// how many threads consume the streams.

#pragma once

#include <cstdint>
#include <random>

#include "entlab/linalg.hpp"

namespace entlab {

class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
                      0x656e746cu};
    engine_.seed(seq);
  }

  double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }
  double normal() { return normal_(engine_); }
  /// Standard complex Gaussian: real and imaginary parts N(0, 1/2).
  cplx complex_normal() {
    constexpr double s = 0.70710678118654752440;
    const double re = normal();
    const double im = normal();
    return {s * re, s * im};
  }
  std::uint64_t bits() { return engine_(); }
  std::mt19937_64& engine() { return engine_; }

  StateVector complex_gaussian_vector(Eigen::Index n) {
    StateVector v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = complex_normal();
    return v;
  }

  DenseOperator complex_gaussian_matrix(Eigen::Index rows, Eigen::Index cols) {
    DenseOperator m(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
      for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = complex_normal();
    return m;
  }

  /// Haar-random unit vector in C^n.
  StateVector haar_state(Eigen::Index n) {
    StateVector v = complex_gaussian_vector(n);
    return v / v.norm();
  }

  /// Haar-distributed unitary via QR of a Ginibre matrix with phase fix.
  DenseOperator haar_unitary(Eigen::Index n) {
    const DenseOperator g = complex_gaussian_matrix(n, n);
    Eigen::HouseholderQR<DenseOperator> qr(g);
    DenseOperator q = qr.householderQ() * DenseOperator::Identity(n, n);
    const DenseOperator r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index i = 0; i < n; ++i) {
      const cplx d = r(i, i);
      const double a = std::abs(d);
      if (a > 0) q.col(i) *= d / a;
    }
    return q;
  }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace entlab
