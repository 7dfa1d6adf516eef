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

#include "entlab/measures.hpp"

using namespace entlab;
using Catch::Matchers::WithinAbs;

namespace {

DensityMatrix random_mixed(Rng& rng, Dims dims, Eigen::Index rank = -1) {
  const Eigen::Index d = dims_product(dims);
  const DenseOperator g = rng.complex_gaussian_matrix(d, rank < 0 ? d : rank);
  const DenseOperator m = g * g.adjoint();
  return DensityMatrix(dims, m / m.trace());
}

DenseOperator random_psd(Rng& rng, Eigen::Index d) {
  const DenseOperator g = rng.complex_gaussian_matrix(d, d);
  return g * g.adjoint();
}

}  // namespace

TEST_CASE("negativity and logarithmic negativity", "[measures]") {
  Rng rng(1);
  CHECK_THAT(negativity(random_separable(3, 3, rng)), WithinAbs(0.0, 1e-10));
  for (int d : {2, 3, 4, 5}) {
    const DensityMatrix p(max_entangled(d));
    CHECK_THAT(negativity(p), WithinAbs((d - 1) / 2.0, 1e-10));
    CHECK_THAT(log_negativity(p), WithinAbs(std::log2(d), 1e-10));
  }
  // PPT states have zero negativity.
  for (int t = 0; t < 50; ++t) {
    const DensityMatrix rho = random_mixed(rng, {2, 3});
    if (is_ppt(rho).ppt) CHECK(negativity(rho) < 1e-10);
  }
  // E_N = log2(2N + 1), both evaluated independently.
  for (int t = 0; t < 100; ++t) {
    const DensityMatrix rho = random_mixed(rng, {3, 3}, 1 + static_cast<Eigen::Index>(rng.bits() % 3));
    CHECK_THAT(log_negativity(rho), WithinAbs(std::log2(2 * negativity(rho) + 1), 1e-10));
  }
}

TEST_CASE("logarithmic negativity is additive and bounds the entropy", "[measures]") {
  Rng rng(2);
  for (int t = 0; t < 10; ++t) {
    const DensityMatrix r = random_mixed(rng, {2, 2}, 1);
    const DensityMatrix s = random_mixed(rng, {2, 3}, 2);
    // rho_{A1B1} (x) sigma_{A2B2} regrouped as (A1 A2 | B1 B2).
    const DensityMatrix joint = permute_sites(tensor(r, s), {0, 2, 1, 3});
    CHECK_THAT(log_negativity(joint, 2), WithinAbs(log_negativity(r) + log_negativity(s), 1e-10));
  }
  for (int t = 0; t < 100; ++t) {
    const PureState psi({3, 4}, rng.haar_state(12));
    CHECK(entanglement_entropy(psi, 1) <= log_negativity(DensityMatrix(psi)) + 1e-10);
  }
}

TEST_CASE("concurrence", "[measures]") {
  StateVector zero(2);
  zero << 1.0, 0.0;
  CHECK_THAT(concurrence_pure(product_state({zero, zero})), WithinAbs(0.0, 1e-12));
  for (int d : {2, 3, 6}) CHECK_THAT(concurrence_pure(max_entangled(d)), WithinAbs(std::sqrt(2.0 * (1.0 - 1.0 / d)), 1e-12));
  CHECK_THAT(concurrence_pure(max_entangled(2)), WithinAbs(1.0, 1e-12));

  const DensityMatrix bell(max_entangled(2));
  CHECK_THAT(concurrence_2q(bell), WithinAbs(1.0, 1e-8));
  CHECK_THAT(concurrence_2q(maximally_mixed({2, 2})), WithinAbs(0.0, 1e-8));
  Rng rng(3);
  for (int t = 0; t < 20; ++t) CHECK_THAT(concurrence_2q(random_separable(2, 2, rng)), WithinAbs(0.0, 1e-8));
  CHECK_THROWS_AS(concurrence_2q(maximally_mixed({2, 3})), DimensionError);

  // Reduction-independence and the pure/mixed formulas agree.
  for (int t = 0; t < 500; ++t) {
    const PureState psi({2, 2}, rng.haar_state(4));
    CHECK_THAT(concurrence_2q(DensityMatrix(psi)), WithinAbs(concurrence_pure(psi), 1e-8));
    const PureState flipped({2, 2}, [&] {
      StateVector v(4);
      v << psi.amplitudes()(0), psi.amplitudes()(2), psi.amplitudes()(1), psi.amplitudes()(3);
      return v;
    }());
    CHECK_THAT(concurrence_pure(flipped), WithinAbs(concurrence_pure(psi), 1e-12));
  }
}

TEST_CASE("entanglement of formation", "[measures]") {
  CHECK_THAT(eof_2q(DensityMatrix(max_entangled(2))), WithinAbs(1.0, 1e-8));
  CHECK_THAT(eof_2q(maximally_mixed({2, 2})), WithinAbs(0.0, 1e-12));
  Rng rng(4);
  for (int t = 0; t < 100; ++t) {
    const PureState psi({2, 2}, rng.haar_state(4));
    CHECK_THAT(eof_2q(DensityMatrix(psi)), WithinAbs(entanglement_entropy(psi, 1), 1e-8));
  }
  double prev_c = -1.0, prev_e = -1.0;
  for (int i = 0; i <= 100; ++i) {
    const DensityMatrix w = werner_state(i / 100.0);
    const double c = concurrence_2q(w);
    const double e = eof_2q(w);
    CHECK(e >= 0.0);
    CHECK(e <= 1.0 + 1e-12);
    CHECK(c >= prev_c - 1e-9);
    CHECK(e >= prev_e - 1e-9);
    prev_c = c;
    prev_e = e;
  }
}

TEST_CASE("witnesses", "[measures]") {
  const DensityMatrix bell(max_entangled(2));
  const Witness w = witness_from_npt(bell);
  CHECK_THAT(witness_value(w, bell), WithinAbs(-0.5, 1e-10));

  for (double p : {0.34, 0.5, 0.8, 1.0}) {
    const DensityMatrix rho = werner_state(p);
    const RealVector ev = hermitian_eigenvalues(partial_transpose(rho, Subsystem::B));
    CHECK_THAT(ev(0), WithinAbs((1 - 3 * p) / 4, 1e-12));
    const Witness wp = witness_from_npt(rho);
    CHECK_THAT(wp.value(rho), WithinAbs(ev(0), 1e-10));
    CHECK(wp.value(rho) < 0);
  }
  CHECK_THROWS_AS(witness_from_npt(werner_state(0.3)), DomainError);
  CHECK_THROWS_AS(Witness(DenseOperator::Identity(4, 4), 2, 2), DomainError);

  Rng rng(1000);
  for (int t = 0; t < 1000; ++t) CHECK(w.value(random_separable(2, 2, rng)) >= -1e-9);

  // The swap operator is a witness that misses P_+^(2).
  const Witness v(swap_operator(2), 2, 2);
  CHECK(v.op().isApprox(DenseOperator(2.0 * partial_transpose(max_entangled_projector(2), 2, 2, Subsystem::B))));
  CHECK(v.value(bell) >= 0.0);
}

TEST_CASE("decomposable witnesses never detect PPT states", "[measures]") {
  Rng rng(200);
  int tested = 0;
  for (int t = 0; t < 200; ++t) {
    DenseOperator w = random_psd(rng, 4) * 0.1 + partial_transpose(random_psd(rng, 4), 2, 2, Subsystem::B);
    // Random PPT state: a separable one, or any random state that passes the test.
    const DensityMatrix rho = (t % 2 == 0) ? random_separable(2, 2, rng) : random_mixed(rng, {2, 2});
    if (!is_ppt(rho).ppt) continue;
    ++tested;
    CHECK((w * rho.matrix()).trace().real() >= -1e-9);
  }
  CHECK(tested >= 100);
}

TEST_CASE("maps applied to subsystems", "[measures]") {
  Rng rng(5);
  const DensityMatrix rho = random_mixed(rng, {2, 3});
  CHECK((apply_map(identity_map(3), rho, Subsystem::B) - rho.matrix()).norm() < 1e-12);
  CHECK((apply_map(identity_map(2), rho, Subsystem::A) - rho.matrix()).norm() < 1e-12);
  CHECK((apply_map(transposition_map(3), rho, Subsystem::B) - partial_transpose(rho, Subsystem::B)).norm() < 1e-12);
  CHECK((apply_map(transposition_map(2), rho, Subsystem::A) - partial_transpose(rho, Subsystem::A)).norm() < 1e-12);
  CHECK_THROWS_AS(apply_map(identity_map(2), rho, Subsystem::B), DimensionError);

  for (int d : {2, 3, 4}) {
    const DenseOperator out = apply_map(reduction_map(d), DensityMatrix(max_entangled(d)), Subsystem::B);
    CHECK(hermitian_eigenvalues(out)(0) < -1e-3);
  }
}

TEST_CASE("reduction maps", "[measures]") {
  for (int d : {2, 3, 5}) {
    CHECK((reduction_map(d)(DenseOperator::Identity(d, d)) - (d - 1.0) * DenseOperator::Identity(d, d)).norm() < 1e-12);
  }
  Rng rng(500);
  const auto red = reduction_map(3);
  const auto dual = red.dual();
  for (int t = 0; t < 500; ++t) {
    const DenseOperator x = random_psd(rng, 3);
    CHECK(hermitian_eigenvalues(red(x))(0) >= -1e-10);
    CHECK(hermitian_eigenvalues(dual(x))(0) >= -1e-10);
  }

  // L_r = L_CP o T with V_ij = |i><j| - |j><i|, i < j.
  const int d = 3;
  for (int t = 0; t < 10; ++t) {
    const DenseOperator x = rng.complex_gaussian_matrix(d, d);
    DenseOperator y = DenseOperator::Zero(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = i + 1; j < d; ++j) {
        DenseOperator v = DenseOperator::Zero(d, d);
        v(i, j) = 1.0;
        v(j, i) = -1.0;
        y += v * x.transpose() * v.adjoint();
      }
    CHECK((y - red(x)).cwiseAbs().maxCoeff() < 1e-12);
  }

  // Extended reduction map with a valid antisymmetric U.
  DenseOperator u = DenseOperator::Zero(4, 4);
  u(0, 1) = 1.0;
  u(1, 0) = -1.0;
  u(2, 3) = 1.0;
  u(3, 2) = -1.0;
  const auto ext = extended_reduction_map(u);
  for (int t = 0; t < 200; ++t) CHECK(hermitian_eigenvalues(ext(random_psd(rng, 4)))(0) >= -1e-10);
  CHECK_FALSE(is_completely_positive(ext).completely_positive);
  CHECK_THROWS_AS(extended_reduction_map(DenseOperator::Identity(4, 4)), DomainError);
  CHECK_THROWS_AS(extended_reduction_map(2.0 * u), DomainError);
}

TEST_CASE("Choi matrices and complete positivity", "[measures]") {
  for (int d : {2, 3}) {
    const DenseOperator c = choi_matrix(identity_map(d));
    CHECK((c - d * max_entangled_projector(d)).norm() < 1e-12);
    CHECK_THAT(c.trace().real(), WithinAbs(d, 1e-12));
    CHECK(hermitian_eigenvalues(choi_matrix(transposition_map(d)))(0) < -0.5);
  }

  Rng rng(6);
  const DenseOperator u = rng.haar_unitary(3);
  const auto cpu = is_completely_positive(unitary_map(u));
  CHECK(cpu.completely_positive);
  REQUIRE(cpu.kraus.size() == 1);
  CHECK_FALSE(is_completely_positive(transposition_map(3)).completely_positive);
  CHECK_FALSE(is_completely_positive(reduction_map(3)).completely_positive);

  // A random channel: Kraus round trip through the Choi matrix.
  std::vector<KrausTerm> terms;
  for (int k = 0; k < 3; ++k) terms.push_back({1.0, rng.complex_gaussian_matrix(2, 3)});
  const auto chan = LinearMapOnOperators::from_kraus(terms, 3, 2);
  const auto cp = is_completely_positive(chan);
  REQUIRE(cp.completely_positive);
  for (std::size_t a = 0; a < cp.kraus.size(); ++a)
    for (std::size_t b = a + 1; b < cp.kraus.size(); ++b)
      CHECK(std::abs((cp.kraus[a].adjoint() * cp.kraus[b]).trace()) < 1e-8);
  std::vector<KrausTerm> extracted;
  for (const auto& k : cp.kraus) extracted.push_back({1.0, k});
  const auto rebuilt = LinearMapOnOperators::from_kraus(extracted, 3, 2);
  const auto from_choi = LinearMapOnOperators::from_choi(chan.choi(), 3, 2);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      DenseOperator e = DenseOperator::Zero(3, 3);
      e(i, j) = 1.0;
      CHECK((rebuilt(e) - chan(e)).norm() < 1e-10);
      CHECK((from_choi(e) - chan(e)).norm() < 1e-10);
    }

  DenseOperator bad = DenseOperator::Zero(4, 4);
  bad(0, 1) = 1.0;
  CHECK_THROWS_AS(LinearMapOnOperators::from_choi(bad, 2, 2), HermiticityError);
}

TEST_CASE("maps from witnesses", "[measures]") {
  Rng rng(7);
  // W >= 0 iff L_W is completely positive.
  const DenseOperator p = random_psd(rng, 6);
  const Witness w = witness_from_npt(DensityMatrix(max_entangled(2)));
  const auto lw = map_from_witness(w);
  CHECK(lw.d_in() == 2);
  CHECK(lw.d_out() == 2);
  CHECK_FALSE(is_completely_positive(lw).completely_positive);
  CHECK(std::abs(hermitian_eigenvalues(lw.choi())(0) - w.min_eigenvalue()) < 1e-10);

  // A PSD operator fed through the same construction yields a CP map.
  const auto lp = LinearMapOnOperators::from_function(
      [&](const DenseOperator& x) {
        const DenseOperator prod = p * kron(DenseOperator::Identity(2, 2), x.transpose());
        DenseOperator out = DenseOperator::Zero(2, 2);
        for (int a = 0; a < 2; ++a)
          for (int b = 0; b < 2; ++b)
            for (int mu = 0; mu < 3; ++mu) out(a, b) += prod(a * 3 + mu, b * 3 + mu);
        return out;
      },
      3, 2);
  CHECK(is_completely_positive(lp).completely_positive);
}
