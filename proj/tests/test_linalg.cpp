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

#include <catch2/catch_amalgamated.hpp>

#include "entlab/lanczos.hpp"
#include "entlab/linalg.hpp"
#include "entlab/rng.hpp"
#include "entlab/sparse.hpp"

using namespace entlab;
using Catch::Matchers::WithinAbs;

namespace {

DenseOperator random_hermitian(Rng& rng, Eigen::Index n) {
  const DenseOperator g = rng.complex_gaussian_matrix(n, n);
  return (g + g.adjoint()) * 0.5;
}

// Transverse-field Ising chain assembled directly from bit operations; kept
// independent of the chains module so it can serve as a Lanczos test matrix.
RealSparse bit_tfim(int n, double h) {
  const Eigen::Index dim = Eigen::Index{1} << n;
  std::vector<RealSparse::Triplet> t;
  for (Eigen::Index s = 0; s < dim; ++s) {
    double diag = 0;
    for (int i = 0; i < n; ++i) {
      const int j = (i + 1) % n;
      const int zi = ((s >> i) & 1) ? -1 : 1;
      const int zj = ((s >> j) & 1) ? -1 : 1;
      diag -= zi * zj;
      t.emplace_back(s ^ (Eigen::Index{1} << i), s, -h);
    }
    t.emplace_back(s, s, diag);
  }
  return RealSparse::from_triplets(dim, t);
}

}  // namespace

TEST_CASE("kron follows the (i,mu),(j,nu) entry rule", "[tensor-core]") {
  CHECK(kron(pauli::id(), pauli::id()).isApprox(DenseOperator::Identity(4, 4)));
  DenseOperator zz = DenseOperator::Zero(4, 4);
  zz.diagonal() << 1, -1, -1, 1;
  CHECK(kron(pauli::z(), pauli::z()).isApprox(zz));

  StateVector ket00 = StateVector::Zero(4);
  ket00(0) = 1;
  const StateVector flipped = kron(pauli::x(), pauli::x()) * ket00;
  CHECK(std::abs(flipped(3) - cplx(1)) < 1e-15);
  CHECK(flipped.head(3).norm() < 1e-15);

  Rng rng(11);
  const DenseOperator a = rng.complex_gaussian_matrix(2, 3);
  const DenseOperator b = rng.complex_gaussian_matrix(3, 2);
  const DenseOperator k = kron(a, b);
  REQUIRE(k.rows() == 6);
  REQUIRE(k.cols() == 6);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 3; ++j)
      for (int mu = 0; mu < 3; ++mu)
        for (int nu = 0; nu < 2; ++nu) CHECK(std::abs(k(i * 3 + mu, j * 2 + nu) - a(i, j) * b(mu, nu)) < 1e-15);
}

TEST_CASE("kron is associative on random matrices", "[tensor-core][property]") {
  Rng rng(3);
  for (int trial = 0; trial < 25; ++trial) {
    const auto dims = [&] { return 1 + static_cast<Eigen::Index>(rng.bits() % 3); };
    const DenseOperator a = rng.complex_gaussian_matrix(dims(), dims());
    const DenseOperator b = rng.complex_gaussian_matrix(dims(), dims());
    const DenseOperator c = rng.complex_gaussian_matrix(dims(), dims());
    const DenseOperator lhs = kron(kron(a, b), c);
    const DenseOperator rhs = kron(a, kron(b, c));
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("svd examples and reconstruction", "[tensor-core]") {
  const Svd id = svd(DenseOperator::Identity(3, 3));
  CHECK((id.s - RealVector::Ones(3)).norm() < 1e-14);

  DenseOperator d = DenseOperator::Zero(2, 2);
  d(0, 0) = 3;
  const Svd ds = svd(d);
  CHECK_THAT(ds.s(0), WithinAbs(3.0, 1e-14));
  CHECK_THAT(ds.s(1), WithinAbs(0.0, 1e-14));

  DenseOperator bell = DenseOperator::Zero(2, 2);
  bell(0, 0) = bell(1, 1) = 1.0 / std::sqrt(2.0);
  const Svd bs = svd(bell);
  CHECK_THAT(bs.s(0), WithinAbs(1.0 / std::sqrt(2.0), 1e-14));
  CHECK_THAT(bs.s(1), WithinAbs(1.0 / std::sqrt(2.0), 1e-14));

  Rng rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const Eigen::Index r = 1 + static_cast<Eigen::Index>(rng.bits() % 64);
    const Eigen::Index c = 1 + static_cast<Eigen::Index>(rng.bits() % 64);
    const DenseOperator a = rng.complex_gaussian_matrix(r, c);
    const Svd s = svd(a);
    const DenseOperator rec = s.u * s.s.cast<cplx>().asDiagonal() * s.vdag;
    CHECK((a - rec).norm() <= 1e-10 * a.norm());
    for (Eigen::Index i = 1; i < s.s.size(); ++i) CHECK(s.s(i) <= s.s(i - 1));
    const Eigen::Index kk = s.s.size();
    CHECK((s.u.adjoint() * s.u - DenseOperator::Identity(kk, kk)).norm() < 1e-10);
    CHECK((s.vdag * s.vdag.adjoint() - DenseOperator::Identity(kk, kk)).norm() < 1e-10);
  }
  DenseOperator bad = DenseOperator::Identity(2, 2);
  bad(0, 1) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(svd(bad), DomainError);
}

TEST_CASE("hermitian_eig spectra, trace and orthonormality", "[tensor-core]") {
  const RealVector sz = hermitian_eig(pauli::z()).values;
  CHECK_THAT(sz(0), WithinAbs(-1.0, 1e-15));
  CHECK_THAT(sz(1), WithinAbs(1.0, 1e-15));
  const RealVector sx = hermitian_eig(pauli::x()).values;
  CHECK_THAT(sx(0), WithinAbs(-1.0, 1e-15));
  CHECK_THAT(sx(1), WithinAbs(1.0, 1e-15));

  Rng rng(9);
  for (int trial = 0; trial < 50; ++trial) {
    const Eigen::Index n = 1 + static_cast<Eigen::Index>(rng.bits() % 40);
    const DenseOperator a = random_hermitian(rng, n);
    const HermitianEig e = hermitian_eig(a);
    CHECK(std::abs(e.values.sum() - a.trace().real()) < 1e-10);
    CHECK((e.vectors.adjoint() * e.vectors - DenseOperator::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((a * e.vectors - e.vectors * e.values.cast<cplx>().asDiagonal()).norm() < 1e-9);
  }

  DenseOperator nh = pauli::x();
  nh(0, 1) = 2.0;
  try {
    hermitian_eig(nh);
    FAIL("expected HermiticityError");
  } catch (const HermiticityError& err) {
    CHECK_THAT(err.asymmetry(), WithinAbs(1.0, 1e-15));
  }
}

TEST_CASE("trace norm", "[tensor-core]") {
  CHECK_THAT(trace_norm(pauli::z()), WithinAbs(2.0, 1e-14));
  Rng rng(1);
  const StateVector v = rng.complex_gaussian_vector(4).normalized();
  const DenseOperator rho = v * v.adjoint();
  CHECK_THAT(trace_norm(rho), WithinAbs(1.0, 1e-12));
  CHECK_THROWS_AS(trace_norm(DenseOperator::Zero(2, 3)), DimensionError);
}

TEST_CASE("matrix_function on the spectrum", "[tensor-core]") {
  const DenseOperator e0 = matrix_function(DenseOperator::Zero(3, 3), [](double x) { return std::exp(x); });
  CHECK(e0.isApprox(DenseOperator::Identity(3, 3)));
  const DenseOperator sq = matrix_function(pauli::z(), [](double x) { return x * x; });
  CHECK(sq.isApprox(DenseOperator::Identity(2, 2)));

  const DenseOperator h = -pauli::z();
  DenseOperator g = matrix_function(h, [](double x) { return std::exp(-x); });
  g /= g.trace();
  const double e = std::exp(1.0);
  CHECK_THAT(g(0, 0).real(), WithinAbs(e / (e + 1 / e), 1e-14));
  CHECK_THAT(g(1, 1).real(), WithinAbs((1 / e) / (e + 1 / e), 1e-14));
}

TEST_CASE("sparse operator assembly", "[tensor-core]") {
  std::vector<RealSparse::Triplet> t{{0, 0, 1.0}, {0, 0, 2.0}, {1, 2, 4.0}};
  const RealSparse s = RealSparse::from_triplets(3, t);
  CHECK(s.nonzeros() == 2);
  CHECK(s.to_dense()(0, 0) == 3.0);
  CHECK(s.max_asymmetry() == 4.0);
  std::vector<RealSparse::Triplet> bad{{3, 0, 1.0}};
  CHECK_THROWS_AS(RealSparse::from_triplets(3, bad), DimensionError);
}

TEST_CASE("lanczos on a diagonal operator", "[tensor-core][lanczos]") {
  std::vector<RealSparse::Triplet> t;
  for (int i = 0; i < 8; ++i) t.emplace_back(i, i, static_cast<double>(i));
  const auto res = lanczos_lowest(RealSparse::from_triplets(8, t), 2, 1);
  CHECK_THAT(res.values[0], WithinAbs(0.0, 1e-12));
  CHECK_THAT(res.values[1], WithinAbs(1.0, 1e-12));
}

TEST_CASE("lanczos agrees with the dense eigensolver", "[tensor-core][lanczos]") {
  Rng rng(21);
  for (Eigen::Index n : {16, 64, 256}) {
    const DenseOperator a = random_hermitian(rng, n);
    const RealVector exact = hermitian_eigenvalues(a);
    const auto res = lanczos_lowest(ComplexSparse::from_dense(a), 4, 7);
    for (int i = 0; i < 4; ++i) CHECK_THAT(res.values[static_cast<std::size_t>(i)], WithinAbs(exact(i), 1e-10));
    for (int i = 0; i < 4; ++i) {
      const StateVector v = res.vectors.col(i);
      CHECK((a * v - res.values[static_cast<std::size_t>(i)] * v).norm() < 1e-7);
    }
  }

  // Degenerate spectrum: the ferromagnetic Ising ring at h -> 0 has a doubly
  // degenerate ground level that a single Krylov space cannot resolve.
  const RealSparse ising = bit_tfim(8, 0.0);
  const auto deg = lanczos_lowest(ising, 3, 3);
  CHECK_THAT(deg.values[0], WithinAbs(-8.0, 1e-10));
  CHECK_THAT(deg.values[1], WithinAbs(-8.0, 1e-10));
  CHECK_THAT(deg.values[2], WithinAbs(-4.0, 1e-10));
}

TEST_CASE("lanczos matches dense at dimension 4096", "[tensor-core][lanczos][slow]") {
  const RealSparse h = bit_tfim(12, 0.7);
  Eigen::SelfAdjointEigenSolver<RealMatrix> dense(h.to_dense(), Eigen::EigenvaluesOnly);
  const auto res = lanczos_lowest(h, 4, 99);
  for (int i = 0; i < 4; ++i) CHECK_THAT(res.values[static_cast<std::size_t>(i)], WithinAbs(dense.eigenvalues()(i), 1e-9));
}

TEST_CASE("lanczos rejects non-Hermitian input", "[tensor-core][lanczos]") {
  std::vector<RealSparse::Triplet> t{{0, 1, 1.0}, {1, 0, 2.0}};
  CHECK_THROWS_AS(lanczos_lowest(RealSparse::from_triplets(2, t), 1, 0), HermiticityError);
}
