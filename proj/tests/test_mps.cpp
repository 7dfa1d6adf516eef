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

#include "entlab/mps.hpp"
#include "entlab/rng.hpp"

using namespace entlab;
using Catch::Matchers::WithinAbs;

namespace {

PureState random_state(Rng& rng, int n, int d) {
  return PureState(Dims(static_cast<std::size_t>(n), d), rng.haar_state(dims_product(Dims(static_cast<std::size_t>(n), d))));
}

MatrixProductState random_open_mps(Rng& rng, int n, int d, int dmax) {
  std::vector<SiteTensor> t;
  int dl = 1;
  for (int k = 0; k < n; ++k) {
    const int dr = k + 1 == n ? 1 : 1 + static_cast<int>(rng.bits() % static_cast<std::uint64_t>(dmax));
    SiteTensor a;
    for (int i = 0; i < d; ++i) a.push_back(rng.complex_gaussian_matrix(dl, dr));
    t.push_back(a);
    dl = dr;
  }
  return MatrixProductState(t, Boundary::open);
}

// Dense operator prod_k O_k on n sites of dimension d.
DenseOperator dense_product(int n, int d, const std::vector<std::pair<int, DenseOperator>>& ops) {
  std::vector<DenseOperator> f(static_cast<std::size_t>(n), DenseOperator::Identity(d, d));
  for (const auto& [k, o] : ops) f[static_cast<std::size_t>(k)] = o;
  return kron_all(f);
}

StateVector basis(int n, Eigen::Index idx) {
  StateVector v = StateVector::Zero(Eigen::Index{1} << n);
  v(idx) = 1.0;
  return v;
}

// Naive open-chain GHZ tensors (not canonical).
MatrixProductState open_ghz(int n) {
  std::vector<SiteTensor> t;
  for (int k = 0; k < n; ++k) {
    SiteTensor a(2);
    for (int i = 0; i < 2; ++i) {
      if (k == 0) {
        a[static_cast<std::size_t>(i)] = DenseOperator::Zero(1, 2);
        a[static_cast<std::size_t>(i)](0, i) = 3.0;
      } else if (k + 1 == n) {
        a[static_cast<std::size_t>(i)] = DenseOperator::Zero(2, 1);
        a[static_cast<std::size_t>(i)](i, 0) = 1.0;
      } else {
        a[static_cast<std::size_t>(i)] = DenseOperator::Zero(2, 2);
        a[static_cast<std::size_t>(i)](i, i) = 1.0;
      }
    }
    t.push_back(a);
  }
  return MatrixProductState(t, Boundary::open);
}

}  // namespace

TEST_CASE("from_dense on simple states", "[mps]") {
  StateVector up(2);
  up << 1.0, 0.0;
  StateVector plus(2);
  plus << 1.0, 1.0;
  const auto [prod, r0] = from_dense(product_state({up, plus, up, plus}), 16);
  for (int b : prod.bonds()) CHECK(b == 1);

  const auto [bell, r1] = from_dense(max_entangled(2), 4);
  REQUIRE(bell.bonds() == std::vector<int>{1, 2, 1});
  CHECK_THAT(bell.lambdas()[1](0), WithinAbs(0.5, 1e-12));
  CHECK_THAT(bell.lambdas()[1](1), WithinAbs(0.5, 1e-12));

  Rng rng(8);
  for (int t = 0; t < 10; ++t) {
    const PureState psi = random_state(rng, 8, 2);
    const auto [m, rep] = from_dense(psi, 16);
    CHECK(std::abs(psi.amplitudes().dot(to_dense(m).amplitudes())) >= 1 - 1e-10);
    CHECK(rep.bound == 0.0);
    CHECK(check_canonical(m).worst() < 1e-8);
  }
  CHECK_THROWS_AS(from_dense(PureState({2, 3}, rng.haar_state(6)), 4), DimensionError);
}

TEST_CASE("canonical form", "[mps]") {
  const MatrixProductState g = canonicalize(open_ghz(6));
  CHECK(check_canonical(g).worst() < 1e-10);
  for (int k = 1; k < 6; ++k) {
    REQUIRE(g.lambdas()[static_cast<std::size_t>(k)].size() == 2);
    CHECK_THAT(g.lambdas()[static_cast<std::size_t>(k)](0), WithinAbs(0.5, 1e-12));
    CHECK_THAT(g.lambdas()[static_cast<std::size_t>(k)](1), WithinAbs(0.5, 1e-12));
  }
  CHECK_THAT(expectation(g, {}).real(), WithinAbs(1.0, 1e-12));
  CHECK_THAT(g.norm(), WithinAbs(1.0, 1e-12));

  // Canonicalizing a canonical state changes nothing physical.
  const MatrixProductState gg = canonicalize(g);
  CHECK(std::abs(overlap(g, gg)) >= 1 - 1e-12);

  CHECK_THROWS_AS(canonicalize(ghz_mps(4)), DomainError);

  Rng rng(100);
  for (int t = 0; t < 100; ++t) {
    const int n = 2 + static_cast<int>(rng.bits() % 9);
    const int d = 2 + static_cast<int>(rng.bits() % 2);
    const MatrixProductState raw = random_open_mps(rng, n, d, 4);
    const MatrixProductState c = canonicalize(raw);
    CHECK(check_canonical(c).worst() < 1e-8);
    if (n <= 10 && std::pow(d, n) <= 4096) {
      const PureState a = to_dense(raw), b = to_dense(c);
      CHECK(std::abs(a.amplitudes().dot(b.amplitudes())) >= 1 - 1e-10);
      // Lambda[k] = squared Schmidt coefficients and block entropies agree.
      for (int k = 1; k < n; ++k) {
        const RealVector s = schmidt_coefficients(b, k);
        const RealVector& l = c.lambdas()[static_cast<std::size_t>(k)];
        REQUIRE(l.size() == s.size());
        CHECK((l - RealVector(s.array().square())).cwiseAbs().maxCoeff() < 1e-8);
        std::vector<int> left;
        for (int j = 0; j < k; ++j) left.push_back(j);
        CHECK_THAT(c.block_entropy(k), WithinAbs(von_neumann_entropy(partial_trace(DensityMatrix(b), left)), 1e-8));
      }
    }
  }
}

TEST_CASE("truncation and its error bound", "[mps]") {
  Rng rng(9);
  const auto [full, r] = from_dense(random_state(rng, 6, 2), 64);
  const auto [same, rs] = truncate(full, 64);
  CHECK(rs.bound == 0.0);
  CHECK(std::abs(overlap(full, same)) >= 1 - 1e-12);
  CHECK_THROWS_AS(truncate(full, 0), DomainError);

  const int n = 6;
  const MatrixProductState g = canonicalize(open_ghz(n));
  const auto [g1, rg] = truncate(g, 1);
  for (double e : rg.discarded) CHECK_THAT(e, WithinAbs(0.5, 1e-12));
  CHECK_THAT(rg.bound, WithinAbs(n - 1.0, 1e-12));
  const StateVector ghz = to_dense(g).amplitudes();
  const StateVector g1d = rg.kept_norm * to_dense(g1).amplitudes();
  CHECK((ghz - g1d).squaredNorm() <= rg.bound);

  for (int t = 0; t < 100; ++t) {
    const PureState psi = random_state(rng, 8, 2);
    const auto [m, rep0] = from_dense(psi, 16);
    for (int dd : {1, 2, 4}) {
      const auto [md, rep] = truncate(m, dd);
      CHECK(md.max_bond() <= dd);
      const StateVector approx = rep.kept_norm * to_dense(md).amplitudes();
      CHECK((psi.amplitudes() - approx).squaredNorm() <= rep.bound + 1e-12);
    }
    // from_dense with a small Dmax applies the same construction.
    const auto [m2, rep2] = from_dense(psi, 2);
    CHECK(m2.max_bond() <= 2);
    CHECK((psi.amplitudes() - rep2.kept_norm * to_dense(m2).amplitudes()).squaredNorm() <= rep2.bound + 1e-12);
  }
}

TEST_CASE("Renyi truncation bound", "[mps]") {
  CHECK_THROWS_AS(renyi_truncation_bound(1.0, 1.0, 2), DomainError);
  CHECK_THROWS_AS(renyi_truncation_bound(1.0, 0.0, 2), DomainError);
  Rng rng(3);
  for (int t = 0; t < 100; ++t) {
    RealVector p(32);
    for (Eigen::Index i = 0; i < p.size(); ++i) p(i) = std::pow(rng.uniform(), 1 + static_cast<double>(t % 7));
    p /= p.sum();
    std::sort(p.data(), p.data() + p.size(), std::greater<double>());
    const double s_half = spectrum_renyi(p, 0.5);
    for (int dd : {2, 4, 8}) {
      const double eps = p.tail(p.size() - dd).sum();
      CHECK(std::log2(eps) <= renyi_truncation_bound(s_half, 0.5, dd) + 1e-12);
    }
  }
  // Flat spectrum of rank r <= D: nothing is discarded and the bound is finite.
  RealVector flat = RealVector::Constant(4, 0.25);
  CHECK(std::isfinite(renyi_truncation_bound(spectrum_renyi(flat, 0.5), 0.5, 4)));
  CHECK(renyi_truncation_bound(1.0, 0.5, 4) < renyi_truncation_bound(2.0, 0.5, 4));
}

TEST_CASE("example states", "[mps]") {
  const PureState g4 = to_dense(ghz_mps(4));
  StateVector expect = (basis(4, 0) + basis(4, 15)) / std::sqrt(2.0);
  CHECK((g4.amplitudes() - expect).norm() < 1e-12);
  const auto g = ghz_mps(6);
  for (int k = 1; k < 6; ++k) CHECK_THAT(expectation(g, {{0, pauli::z()}, {k, pauli::z()}}).real(), WithinAbs(1.0, 1e-12));

  const PureState afm = to_dense(afm_ghz_mps(6));
  // |010101> = index 0b010101 = 21, |101010> = 42.
  CHECK(std::abs(afm.amplitudes()(21)) > 0.7);
  CHECK(std::abs(afm.amplitudes()(42)) > 0.7);
  CHECK_THAT(std::abs(afm.amplitudes()(21)) + std::abs(afm.amplitudes()(42)), WithinAbs(std::sqrt(2.0), 1e-12));
  CHECK_THROWS_AS(afm_ghz_mps(5), DomainError);
  CHECK_THROWS_AS(majumdar_ghosh_mps(7), DomainError);

  for (int n : {6, 8}) {
    const auto c = cluster_mps(n);
    for (int i = 0; i < n; ++i) {
      const cplx v = expectation(c, {{(i + n - 1) % n, pauli::z()}, {i, pauli::x()}, {(i + 1) % n, pauli::z()}});
      CHECK_THAT(v.real(), WithinAbs(-1.0, 1e-10));
    }
  }
  CHECK_THAT(cluster_mps(6).norm(), WithinAbs(8.0, 1e-10));
  CHECK_THAT(majumdar_ghosh_mps(6).norm(), WithinAbs(std::sqrt(12.0), 1e-10));
}

TEST_CASE("expectation and overlap agree with dense contraction", "[mps]") {
  Rng rng(12);
  for (int t = 0; t < 20; ++t) {
    const int n = 3 + static_cast<int>(rng.bits() % 8);
    const MatrixProductState m = random_open_mps(rng, n, 2, 3);
    const MatrixProductState m2 = random_open_mps(rng, n, 2, 3);
    const StateVector v = to_dense(m).amplitudes();
    std::vector<std::pair<int, DenseOperator>> ops;
    for (int k = 0; k < n; ++k)
      if (rng.uniform() < 0.4) ops.emplace_back(k, rng.complex_gaussian_matrix(2, 2));
    const cplx dense = v.dot(dense_product(n, 2, ops) * v);
    CHECK(std::abs(expectation(m, ops) - dense) < 1e-9 * std::max(1.0, std::abs(dense)));
    CHECK(std::abs(overlap(m, m2) - v.dot(to_dense(m2).amplitudes())) < 1e-9);
  }
  // Periodic chains.
  const auto aklt = aklt_mps(5);
  const StateVector a = to_dense(aklt).amplitudes();
  DenseOperator sz = DenseOperator::Zero(3, 3);
  sz.diagonal() << 1.0, 0.0, -1.0;
  const cplx dense = a.dot(dense_product(5, 3, {{0, sz}, {2, sz}}) * a);
  CHECK(std::abs(expectation(aklt, {{0, sz}, {2, sz}}) - dense) < 1e-10);
  CHECK_THROWS_AS(expectation(aklt, {{0, pauli::z()}}), DimensionError);
  CHECK_THROWS_AS(to_dense(ghz_mps(17)), ResourceLimitError);
}

TEST_CASE("classical superposition MPS", "[mps]") {
  const RealMatrix h = ising_coupling(1.0);
  const PureState flat = to_dense(classical_superposition_mps(h, 0.0, 6));
  for (Eigen::Index s = 0; s < flat.dim(); ++s) CHECK_THAT(flat.amplitudes()(s).real(), WithinAbs(std::pow(2.0, -3.0), 1e-12));

  const int n = 8;
  const double beta = 0.6;
  const PureState psi = to_dense(classical_superposition_mps(h, beta, n));
  // Dense Gibbs weights on the ring (bit 1 of a digit means s = -1).
  StateVector w(Eigen::Index{1} << n);
  for (Eigen::Index c = 0; c < w.size(); ++c) {
    double e = 0.0;
    for (int k = 0; k < n; ++k) {
      const int s1 = ((c >> (n - 1 - k)) & 1) ? -1 : 1;
      const int s2 = ((c >> (n - 1 - (k + 1) % n)) & 1) ? -1 : 1;
      e -= s1 * s2;
    }
    w(c) = std::exp(-beta * e);
  }
  w /= w.real().sum();
  const cplx phase = psi.amplitudes()(0) / std::abs(psi.amplitudes()(0));
  for (Eigen::Index c = 0; c < w.size(); ++c) {
    CHECK_THAT((psi.amplitudes()(c) / phase).real(), WithinAbs(std::sqrt(w(c).real()), 1e-10));
    CHECK_THAT((psi.amplitudes()(c) / phase).imag(), WithinAbs(0.0, 1e-12));
  }

  // Strong coupling: the aligned configurations dominate.
  const PureState cold = to_dense(classical_superposition_mps(h, 20.0, 6));
  CHECK(std::norm(cold.amplitudes()(0)) + std::norm(cold.amplitudes()(63)) > 1 - 1e-9);

  // Area law: block entropy <= log2 d for every block and N.
  for (int nn : {4, 6, 8, 10}) {
    const PureState p = to_dense(classical_superposition_mps(h, 0.4, nn));
    for (int k = 1; k < nn; ++k) CHECK(entanglement_entropy(p, k) <= 2.0 + 1e-10);
  }

  // Antiferromagnetic coupling at large beta is not PSD.
  CHECK_THROWS_AS(classical_superposition_mps(ising_coupling(-2.0), 1.0, 4), DomainError);
}
