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

#include "entlab/kinetic.hpp"
#include "entlab/mps.hpp"
#include "entlab/rng.hpp"

using namespace entlab;
using Catch::Matchers::WithinAbs;

namespace {

DensityMatrix random_density(Rng& rng, int n) {
  const Eigen::Index dim = Eigen::Index{1} << n;
  const DenseOperator g = rng.complex_gaussian_matrix(dim, dim);
  const DenseOperator p = g * g.adjoint();
  return DensityMatrix(Dims(static_cast<std::size_t>(n), 2), p / p.trace());
}

double max_entry(const DenseOperator& a) { return a.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("Glauber rates", "[kinetic]") {
  const KineticModel free = KineticModel::from_gamma(FlipType::single, 5, 0.0, 0.0, 1.7);
  for (Eigen::Index x = 0; x < 32; ++x)
    for (int i = 0; i < 5; ++i) CHECK_THAT(glauber_rate(spins_of(x, 5), i, free), WithinAbs(1.7, 1e-15));

  const KineticModel m = KineticModel::from_gamma(FlipType::single, 6, 0.4, 0.3, 2.0);
  const Spins up(6, 1);
  CHECK_THAT(glauber_rate(up, 2, m), WithinAbs(2.0 * 1.3 * 0.6, 1e-14));
  const Spins wall = {1, 1, 1, -1, -1, -1};
  // Site 2 sits at the wall: neighbours +1 and -1.
  CHECK_THAT(glauber_rate(wall, 2, m), WithinAbs(2.0 * (1.0 - 0.3), 1e-14));
}

TEST_CASE("two-flip rates", "[kinetic]") {
  const KineticModel hot = KineticModel::thermal(FlipType::pair, 6, 0.0);
  for (Eigen::Index x = 0; x < 64; ++x)
    for (int i = 0; i < 6; ++i) CHECK_THAT(two_flip_rate(spins_of(x, 6), i, hot), WithinAbs(1.0, 1e-15));
  const KineticModel m = KineticModel::thermal(FlipType::pair, 6, 0.35);
  CHECK_THAT(two_flip_rate(Spins(6, 1), 0, m), WithinAbs(1.0 - m.gamma, 1e-15));
  // s_{i-1} s_i = -s_{i+1} s_{i+2}.
  CHECK_THAT(two_flip_rate({1, 1, 1, -1, 1, 1}, 1, m), WithinAbs(1.0, 1e-15));
}

TEST_CASE("tau encoding", "[kinetic]") {
  const TauSector t = TauSector::from_code(0b0101, 4);
  CHECK(t.tau == std::vector<int>{1, -1, 1, -1});
  CHECK(t.pattern() == "+-+-");
  CHECK(TauSector::uniform(8, 1).code == 255);
  CHECK(TauSector::uniform(8, -1).code == 0);
  CHECK(TauSector::from_pattern(t.tau).code == t.code);
  CHECK_THROWS_AS(TauSector::from_code(16, 4), DomainError);
  for (Eigen::Index x = 0; x < 16; ++x) CHECK(index_of(spins_of(x, 4)) == x);
  CHECK(spins_of(0, 3) == Spins{1, 1, 1});
  CHECK(spins_of(1, 3) == Spins{1, 1, -1});
}

TEST_CASE("generator structure", "[kinetic]") {
  SECTION("uniform single flips at N = 3 have gap 2 Gamma") {
    const KineticModel m = KineticModel::from_gamma(FlipType::single, 3, 0.0, 0.0, 1.5);
    const RealMatrix g = build_generator(m).to_dense();
    CHECK(g.colwise().sum().cwiseAbs().maxCoeff() < 1e-12);
    Eigen::SelfAdjointEigenSolver<RealMatrix> es(-g);
    CHECK_THAT(es.eigenvalues()(0), WithinAbs(0.0, 1e-12));
    CHECK_THAT(es.eigenvalues()(1), WithinAbs(3.0, 1e-12));
  }
  for (FlipType f : {FlipType::single, FlipType::pair}) {
    const KineticModel m = KineticModel::thermal(f, 8, 0.45, 1.0, f == FlipType::single ? 0.2 : 0.0);
    const SparseOperator<double> g = build_generator(m);
    const RealMatrix gd = g.to_dense();
    CHECK(gd.colwise().sum().cwiseAbs().maxCoeff() < 1e-12);
    for (Eigen::Index r = 0; r < gd.rows(); ++r)
      for (Eigen::Index c = 0; c < gd.cols(); ++c)
        if (r != c) CHECK(gd(r, c) >= 0.0);
    const RealVector p = gibbs_distribution(8, m.beta, m.coupling);
    CHECK((g.csr() * p).cwiseAbs().maxCoeff() < 1e-12);
    const RealVector pt = evolve_master(m, RealVector::Unit(256, 3), 0.7);
    CHECK_THAT(pt.sum(), WithinAbs(1.0, 1e-12));
    CHECK(pt.minCoeff() > -1e-14);
  }
}

TEST_CASE("detailed balance", "[kinetic]") {
  for (FlipType f : {FlipType::single, FlipType::pair}) {
    for (double beta : {0.0, 0.3, 1.1}) {
      const KineticModel m = KineticModel::thermal(f, 8, beta, 0.8, f == FlipType::single ? -0.4 : 0.0);
      const DetailedBalanceReport r = check_detailed_balance(m);
      CHECK(r.passes);
      CHECK(r.max_violation <= 1e-10);
    }
  }
  const KineticModel m = KineticModel::thermal(FlipType::single, 6, 0.5);
  const RateFunction bad = [&](const Spins& s, int i) {
    const double w = glauber_rate(s, i, m);
    return index_of(s) == 5 && i == 2 ? 1.01 * w : w;
  };
  const DetailedBalanceReport r = check_detailed_balance(6, FlipType::single, bad, m.beta, m.coupling);
  CHECK_FALSE(r.passes);
  CHECK(r.worst_from == 5);
  CHECK(r.worst_to == (5 ^ site_mask(2, 6)));

  KineticModel off = m;
  off.gamma = 0.2;  // no longer tanh 2 beta J
  CHECK_FALSE(off.is_thermal());
  CHECK_FALSE(check_detailed_balance(off).passes);
  CHECK_THROWS_AS(symmetrize(off), DomainError);
}

TEST_CASE("symmetrized generator", "[kinetic]") {
  SECTION("kernel is the classical superposition state") {
    for (double beta : {0.0, 0.3, 0.6}) {
      const KineticModel m = KineticModel::thermal(FlipType::single, 8, beta);
      const DenseOperator h = symmetrize(m);
      CHECK(max_entry(h - h.adjoint()) <= 1e-10);
      const HermitianEig eig = hermitian_eig(h);
      CHECK(eig.values(0) >= -1e-10);
      CHECK_THAT(eig.values(0), WithinAbs(0.0, 1e-10));
      CHECK(eig.values(1) > 1e-3);
      const PureState mps = to_dense(classical_superposition_mps(ising_coupling(1.0), beta, 8));
      const StateVector ground = eig.vectors.col(0);
      CHECK(std::abs(ground.dot(mps.amplitudes())) >= 1.0 - 1e-10);
    }
  }
  SECTION("infinite temperature gives Gamma sum (1 - X)") {
    const KineticModel m = KineticModel::from_gamma(FlipType::single, 5, 0.0, 0.0, 1.3);
    SpinHamiltonian ref(5, 2, Boundary::periodic);
    for (int i = 0; i < 5; ++i) ref.add_term({i}, DenseOperator::Identity(2, 2) - pauli::x(), 1.3);
    CHECK(max_entry(symmetrize(m) - ref.to_dense()) < 1e-12);
  }
  SECTION("operator form equals the symmetrized matrix") {
    for (double delta : {0.0, 0.35, -0.6}) {
      for (double beta : {0.2, 0.9}) {
        const KineticModel m = KineticModel::thermal(FlipType::single, 8, beta, 1.0, delta);
        CHECK(max_entry(build_h_beta_single_flip(m).to_dense() - symmetrize(m)) <= 1e-9);
      }
    }
    const KineticModel g0 = KineticModel::from_gamma(FlipType::single, 6, 0.0, 0.4);
    CHECK(max_entry(build_h_beta_single_flip(g0).to_dense() - symmetrize(g0)) <= 1e-12);
  }
  SECTION("pair flips: uniform tau sector is the symmetrized generator") {
    const KineticModel m = KineticModel::thermal(FlipType::pair, 8, 0.4);
    const DenseOperator h = build_h_tau_two_flip(TauSector::uniform(8, 1), m.phi(), 8).to_dense();
    CHECK(max_entry(h - symmetrize(m)) <= 1e-12);
  }
  SECTION("delta = 0 spectrum is gapped at finite temperature") {
    const RealVector ev = hermitian_eigenvalues(build_h_beta_single_flip(KineticModel::thermal(FlipType::single, 8, 0.7)).to_dense());
    CHECK(ev(1) - ev(0) > 1e-2);
  }
  SECTION("special line flag") {
    const double g = 0.6;
    CHECK(on_special_line(KineticModel::from_gamma(FlipType::single, 6, g, g / (2.0 - g))));
    CHECK_FALSE(on_special_line(KineticModel::from_gamma(FlipType::single, 6, g, 0.1)));
  }
}

TEST_CASE("single-flip sector Hamiltonians", "[kinetic]") {
  for (double delta : {0.0, 0.3}) {
    const KineticModel m = KineticModel::thermal(FlipType::single, 8, 0.5, 1.0, delta);
    const DenseOperator ref = build_h_beta_single_flip(m).to_dense();
    for (std::uint64_t code : {std::uint64_t{0}, std::uint64_t{255}}) {
      CHECK(max_entry(build_h_tau_single_flip(TauSector::from_code(code, 8), m).to_dense() - ref) <= 1e-12);
    }
    const DenseOperator mixed = build_h_tau_single_flip(TauSector::from_code(0b00010110, 8), m).to_dense();
    CHECK(max_entry(mixed - mixed.adjoint()) <= 1e-12);
  }
  // Mixed branch coefficient on the X term of site 1 (tau_0 != tau_2).
  const KineticModel m = KineticModel::from_gamma(FlipType::single, 4, 0.5, 0.2);
  const SpinHamiltonian h = build_h_tau_single_flip(TauSector::from_pattern({1, 1, -1, -1}), m);
  const DenseOperator t1 = h.terms()[1].op;
  // <+ + +| H |+ - +> on the three-site support picks -(A - B) with B = 0.
  CHECK_THAT(t1(0, 2).real(), WithinAbs(-std::sqrt(1 - 0.04) * std::pow(1 - 0.25, 0.25), 1e-14));
}

TEST_CASE("two-flip sector Hamiltonians", "[kinetic]") {
  SECTION("phi = 0 removes the tau dependence") {
    SpinHamiltonian ref(6, 2, Boundary::periodic);
    for (int i = 0; i < 6; ++i) ref.add_term({i, (i + 1) % 6}, DenseOperator::Identity(4, 4) - kron(pauli::x(), pauli::x()));
    for (std::uint64_t code : {0u, 5u, 63u, 17u}) {
      CHECK(max_entry(build_h_tau_two_flip(TauSector::from_code(code, 6), 0.0, 6).to_dense() - ref.to_dense()) < 1e-14);
    }
  }
  SECTION("all-down sector drops the diagonal field terms") {
    const double phi = 0.3;
    SpinHamiltonian ref(6, 2, Boundary::periodic);
    const DenseOperator i2 = DenseOperator::Identity(2, 2), z = pauli::z(), x = pauli::x();
    const double c = std::cos(phi), s = std::sin(phi);
    for (int i = 0; i < 6; ++i) {
      const DenseOperator t = -((c * c * DenseOperator::Identity(16, 16) - s * s * kron_all({z, z, z, z})) * kron_all({i2, x, x, i2}) -
                                DenseOperator::Identity(16, 16));
      ref.add_term({(i + 5) % 6, i, (i + 1) % 6, (i + 2) % 6}, t);
    }
    CHECK(max_entry(build_h_tau_two_flip(TauSector::uniform(6, -1), phi, 6).to_dense() - ref.to_dense()) < 1e-14);
  }
  SECTION("mixed-tau term minimum eigenvalue") {
    for (double phi : {0.0, 0.1, std::numbers::pi / 8, 0.7, std::numbers::pi / 4}) {
      const double want = mixed_tau_term_min_eigenvalue(phi);
      CHECK_THAT(hermitian_eigenvalues(two_flip_term(-1, 1, phi))(0), WithinAbs(want, 1e-12));
      CHECK_THAT(hermitian_eigenvalues(two_flip_term(1, -1, phi))(0), WithinAbs(want, 1e-12));
      CHECK(hermitian_eigenvalues(two_flip_term(1, 1, phi))(0) >= -1e-12);
      CHECK(hermitian_eigenvalues(two_flip_term(-1, -1, phi))(0) >= -1e-12);
    }
  }
  SECTION("positivity in every sector at N = 6") {
    for (int j = 0; j <= 4; ++j) {
      const double phi = j * std::numbers::pi / 16;
      for (std::uint64_t code = 0; code < 64; ++code) {
        const TauSector tau = TauSector::from_code(code, 6);
        const double e0 = hermitian_eigenvalues(build_h_tau_two_flip(tau, phi, 6).to_dense())(0);
        CHECK(e0 >= -1e-10);
        if (!tau.is_uniform() && j > 0) CHECK(e0 > 1e-6);
      }
    }
  }
  SECTION("uniform sector ground level is doubly degenerate at zero") {
    const RealVector ev = hermitian_eigenvalues(build_h_tau_two_flip(TauSector::uniform(8, 1), 0.4, 8).to_dense());
    CHECK_THAT(ev(0), WithinAbs(0.0, 1e-10));
    CHECK_THAT(ev(1), WithinAbs(0.0, 1e-10));
    CHECK(ev(2) > 1e-3);
  }
}

TEST_CASE("vectorized generator conserves the tau operators", "[kinetic]") {
  const KineticModel m = KineticModel::thermal(FlipType::pair, 5, 0.4);
  const SparseOperator<double> l = vectorized_generator(m);
  const RealMatrix ld = l.to_dense();
  for (int i = 0; i < 5; ++i) {
    const RealVector t = vectorized_tau_operator(i, 5);
    const RealMatrix comm = t.asDiagonal() * ld - ld * t.asDiagonal();
    CHECK(comm.cwiseAbs().maxCoeff() <= 1e-10);
  }
  // Same action as the operator form of the master equation.
  Rng rng(4);
  const DensityMatrix rho = random_density(rng, 5);
  const DenseOperator rhs = qmaster_rhs(rho.matrix(), m);
  Eigen::VectorXcd vec(1024);
  for (Eigen::Index a = 0; a < 32; ++a)
    for (Eigen::Index b = 0; b < 32; ++b) vec(a * 32 + b) = rho.matrix()(a, b);
  const Eigen::VectorXcd lv = l.csr().cast<cplx>() * vec;
  for (Eigen::Index a = 0; a < 32; ++a)
    for (Eigen::Index b = 0; b < 32; ++b) CHECK(std::abs(lv(a * 32 + b) - rhs(a, b)) < 1e-12);
}

TEST_CASE("sector-split evolution", "[kinetic]") {
  const KineticModel m = KineticModel::thermal(FlipType::pair, 6, 0.45);
  Rng rng(99);
  SECTION("t = 0 is the identity") {
    const DensityMatrix rho = random_density(rng, 6);
    CHECK(max_entry(sector_split_evolve(rho, m, 0.0).matrix() - rho.matrix()) < 1e-12);
  }
  SECTION("agrees with direct integration") {
    for (int k = 0; k < 2; ++k) {
      const DensityMatrix rho = random_density(rng, 6);
      for (double t : {0.1, 1.0}) {
        const DensityMatrix a = sector_split_evolve(rho, m, t);
        const DenseOperator b = integrate_qmaster(rho.matrix(), m, t);
        CHECK(trace_norm(a.matrix() - b) / 2.0 <= 1e-8);
        CHECK_THAT(a.matrix().trace().real(), WithinAbs(1.0, 1e-10));
      }
    }
  }
  SECTION("diagonal states follow the classical master equation") {
    RealVector p = RealVector::Zero(64);
    for (Eigen::Index x = 0; x < 64; ++x) p(x) = rng.uniform();
    p /= p.sum();
    const DensityMatrix rho(Dims(6, 2), p.cast<cplx>().asDiagonal().toDenseMatrix());
    const DensityMatrix out = sector_split_evolve(rho, m, 0.8);
    const RealVector classical = evolve_master(m, p, 0.8);
    CHECK((out.matrix().diagonal().real() - classical).cwiseAbs().maxCoeff() <= 1e-8);
    CHECK(max_entry(out.matrix() - DenseOperator(out.matrix().diagonal().asDiagonal())) <= 1e-12);
  }
  SECTION("invalid input") {
    KineticModel off = m;
    off.gamma = 0.1;
    CHECK_THROWS_AS(sector_split_evolve(random_density(rng, 6), off, 0.1), DomainError);
    CHECK_THROWS_AS(sector_split_evolve(random_density(rng, 6), KineticModel::thermal(FlipType::single, 6, 0.3), 0.1),
                    DomainError);
  }
}

TEST_CASE("sector spectra scan", "[kinetic]") {
  const std::vector<SpectrumRow> rows =
      sector_spectra_scan(FlipType::pair, 8, {255, 0b00011000}, {0.0, std::numbers::pi / 8}, 3);
  REQUIRE(rows.size() == 12);
  CHECK(rows[0].tau_pattern == "++++++++");
  CHECK(rows[6].tau_pattern == "---++---");
  CHECK_THAT(rows[0].eigenvalue, WithinAbs(0.0, 1e-10));
  // Sparse path agrees with the dense one.
  const auto sparse_rows = sector_spectra_scan(FlipType::single, 11, {0b00000110000}, {0.6}, 2);
  const RealVector dense = hermitian_eigenvalues(
      build_h_tau_single_flip(TauSector::from_code(0b00000110000, 11), KineticModel::from_gamma(FlipType::single, 11, 0.6))
          .to_dense());
  CHECK_THAT(sparse_rows[0].eigenvalue, WithinAbs(dense(0), 1e-9));
  CHECK_THAT(sparse_rows[1].eigenvalue, WithinAbs(dense(1), 1e-9));
}

TEST_CASE("long Lanczos runs keep locked vectors out of the Krylov space", "[kinetic][lanczos]") {
  // Half-up single-flip sector at N = 16: after the first level is locked the
  // next run needs the full Krylov length, which is where locked components
  // used to leak back in.
  const SpinHamiltonian h =
      build_h_tau_single_flip(TauSector::from_code(255, 16), KineticModel::from_gamma(FlipType::single, 16, 0.995));
  const SparseOperator<double> sp = h.to_sparse_real();
  LanczosOptions opt;
  opt.tol = 1e-11;
  const auto r = lanczos_lowest(sp, 4, 1, opt);
  LanczosOptions wide = opt;
  wide.max_krylov = 600;
  wide.want_vectors = false;
  const auto ref = lanczos_lowest(sp, 4, 2, wide);
  for (int i = 0; i < 4; ++i) {
    const Eigen::VectorXd x = r.vectors.col(i);
    CHECK((sp.csr() * x - r.values[static_cast<std::size_t>(i)] * x).norm() <= 1e-9);
    CHECK_THAT(r.values[static_cast<std::size_t>(i)], WithinAbs(ref.values[static_cast<std::size_t>(i)], 1e-9));
  }
  CHECK_THAT(r.values[1], WithinAbs(r.values[2], 1e-9));
}
