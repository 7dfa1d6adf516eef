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

// Acceptance criteria as runnable checks, shared by the acceptance binary and
// the CLI selftest. Each check fills an Outcome; run_criterion adds timing.

#pragma once

#include <chrono>
#include <functional>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "entlab/entlab.hpp"

namespace entlab::acceptance {


struct Outcome {
  bool ok = true;
  std::ostringstream detail;
  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      detail << " [failed: " << what << "]";
    }
  }
};

struct Criterion {
  int id;
  const char* title;
  double budget_s;
  std::function<void(Outcome&)> run;
};

inline std::vector<int> range(int lo, int hi) {
  std::vector<int> v(static_cast<std::size_t>(hi - lo + 1));
  std::iota(v.begin(), v.end(), lo);
  return v;
}

inline double max_entry(const DenseOperator& a) { return a.cwiseAbs().maxCoeff(); }

inline DensityMatrix random_density(Rng& rng, int n) {
  const Eigen::Index dim = Eigen::Index{1} << n;
  const DenseOperator g = rng.complex_gaussian_matrix(dim, dim);
  const DenseOperator p = g * g.adjoint();
  return DensityMatrix(Dims(static_cast<std::size_t>(n), 2), p / p.trace());
}

inline void maximally_entangled(Outcome& o) {
  double worst = 0.0;
  for (int d = 2; d <= 6; ++d) {
    const DensityMatrix p(max_entangled(d));
    worst = std::max(worst, std::abs(negativity(p) - (d - 1) / 2.0));
    worst = std::max(worst, std::abs(log_negativity(p) - std::log2(d)));
  }
  o.detail << "max deviation " << worst;
  o.require(worst <= 1e-10, "tol 1e-10");
}

inline void two_qubit_measures(Outcome& o) {
  const DensityMatrix bell(max_entangled(2));
  const double eof_bell = eof_2q(bell);
  Rng rng(2002);
  double worst_c = 0.0, worst_e = 0.0;
  for (int k = 0; k < 500; ++k) {
    const PureState psi(Dims{2, 2}, rng.haar_state(4));
    const DensityMatrix rho(psi);
    worst_c = std::max(worst_c, std::abs(concurrence_2q(rho) - concurrence_pure(psi)));
    worst_e = std::max(worst_e, std::abs(eof_2q(rho) - entanglement_entropy(psi, 1)));
  }
  o.detail << "EoF(Bell) " << eof_bell << ", max |C_2q - C_pure| " << worst_c << ", max |EoF - S_A| " << worst_e;
  o.require(std::abs(eof_bell - 1.0) <= 1e-10, "EoF(Bell) = 1");
  o.require(worst_c <= 1e-8, "concurrence tol 1e-8");
  o.require(worst_e <= 1e-8, "EoF tol 1e-8");
}

inline void ppt_structure(Outcome& o) {
  Rng rng(3003);
  int mismatches = 0;
  for (int r = 2; r <= 4; ++r) {
    for (int k = 0; k < 200; ++k) {
      const DenseOperator m = rng.complex_gaussian_matrix(4, r) * rng.complex_gaussian_matrix(r, 4);
      StateVector v(16);
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) v(i * 4 + j) = m(i, j);
      const PureState psi(Dims{4, 4}, v, true);
      if (schmidt_coefficients(psi).size() != r) ++mismatches;
      if (is_ppt(DensityMatrix(psi), 1e-10).negative_count != r * (r - 1) / 2) ++mismatches;
    }
  }
  o.detail << "600 states, " << mismatches << " mismatches";
  o.require(mismatches == 0, "negative eigenvalue count r(r-1)/2");
}

inline void positive_maps(Outcome& o) {
  double worst_neg = -std::numeric_limits<double>::infinity();
  for (int d = 2; d <= 5; ++d) {
    const DenseOperator out = apply_map(reduction_map(d), DensityMatrix(max_entangled(d)), Subsystem::B);
    worst_neg = std::max(worst_neg, hermitian_eigenvalues(out)(0));
  }
  Rng rng(4004);
  double worst_pos = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 500; ++k) {
    const int d = 2 + k % 4;
    const DenseOperator g = rng.complex_gaussian_matrix(d, 1 + k % d);
    const DenseOperator x = g * g.adjoint();
    worst_pos = std::min(worst_pos, hermitian_eigenvalues(reduction_map(d)(x))(0) / x.trace().real());
  }
  const double choi_r = is_completely_positive(reduction_map(3)).min_choi_eigenvalue;
  const double choi_u = is_completely_positive(unitary_map(rng.haar_unitary(3))).min_choi_eigenvalue;
  o.detail << "max min-eig (I x L_r)(P+) " << worst_neg << ", min output eig " << worst_pos << ", Choi min eig L_r "
           << choi_r << ", L_U " << choi_u;
  o.require(worst_neg < -1e-9, "(I x L_r)(P+) has a negative eigenvalue");
  o.require(worst_pos >= -1e-9, "L_r positive on PSD inputs");
  o.require(choi_r < -1e-9, "Choi(L_r) not PSD");
  o.require(choi_u >= -1e-9, "Choi(L_U) PSD");
}

inline void haar_statistics(Outcome& o) {
  double worst = 0.0;
  for (auto [m, n] : {std::pair{2, 2}, std::pair{2, 8}, std::pair{4, 4}}) {
    const MeanEstimate pur = mean_purity_mc(m, n, 10000, 5005);
    const MeanEstimate ent = mean_entropy_mc(m, n, 10000, 5006);
    worst = std::max(worst, std::abs(pur.mean - mean_purity_exact(m, n)) / pur.std_error);
    worst = std::max(worst, std::abs(ent.mean - mean_entropy_exact(m, n)) / ent.std_error);
  }
  const double rel = std::abs(mean_entropy_exact(8, 512) - mean_entropy_approx(8, 512)) / std::log(8.0);
  o.detail << "max deviation " << worst << " standard errors, approximation error at (8,512) " << rel;
  o.require(worst <= 3.0, "within 3 standard errors");
  o.require(rel <= 0.02, "approximation within 2%");
}

inline void mps_engine(Outcome& o) {
  Rng rng(6006);
  double worst_fid = 1.0, worst_canon = 0.0, worst_margin = -std::numeric_limits<double>::infinity();
  int violations = 0;
  for (int k = 0; k < 100; ++k) {
    const PureState psi(Dims(8, 2), rng.haar_state(256));
    const auto [m, rep0] = from_dense(psi, 16);
    worst_fid = std::min(worst_fid, std::norm(psi.amplitudes().dot(to_dense(m).amplitudes())));
    worst_canon = std::max(worst_canon, check_canonical(m).worst());
    for (int dd : {1, 2, 4}) {
      const auto [md, rep] = truncate(m, dd);
      worst_canon = std::max(worst_canon, check_canonical(md).worst());
      const double err = (psi.amplitudes() - rep.kept_norm * to_dense(md).amplitudes()).squaredNorm();
      worst_margin = std::max(worst_margin, err - rep.bound);
      if (err > rep.bound + 1e-12) ++violations;
    }
  }
  o.detail << "min fidelity " << worst_fid << ", bound violations " << violations << " (max err - bound " << worst_margin
           << "), canonical residual " << worst_canon;
  o.require(worst_fid >= 1.0 - 1e-10, "round-trip fidelity");
  o.require(violations == 0, "truncation bound");
  o.require(worst_canon <= 1e-8, "canonical conditions");
}

inline void named_states(Outcome& o) {
  StateVector ghz = StateVector::Zero(256);
  ghz(0) = ghz(255) = 1.0 / std::sqrt(2.0);
  const double ghz_err = (to_dense(ghz_mps(8)).amplitudes() - ghz).cwiseAbs().maxCoeff();
  double aklt = 0.0;
  for (int n : {6, 8}) {
    const SpinHamiltonian h = build_aklt(n);
    const double e0 = ground_state(h).energies[0];
    const PureState psi = to_dense(aklt_mps(n));
    aklt = std::max({aklt, std::abs(h.energy(psi) - e0), (h.apply(psi.amplitudes()) - e0 * psi.amplitudes()).norm()});
  }
  const SpinHamiltonian mg = build_mg(6);
  const double mg_e0 = ground_state(mg).energies[0];
  const PureState mg_psi = to_dense(majumdar_ghosh_mps(6));
  const double mg_res = (mg.apply(mg_psi.amplitudes()) - mg_e0 * mg_psi.amplitudes()).norm();
  const MatrixProductState cl = cluster_mps(8);
  std::set<long> signs;
  double cl_err = 0.0;
  for (int i = 0; i < 8; ++i) {
    const std::vector<std::pair<int, DenseOperator>> ops = {
        {(i + 7) % 8, pauli::z()}, {i, pauli::x()}, {(i + 1) % 8, pauli::z()}};
    const double v = expectation(cl, ops).real();
    signs.insert(std::lround(v));
    cl_err = std::max(cl_err, std::abs(std::abs(v) - 1.0));
  }
  o.detail << "GHZ error " << ghz_err << ", AKLT residual " << aklt << ", MG residual " << mg_res << ", cluster stabilizer sign "
           << (signs.size() == 1 ? *signs.begin() : 0) << " (deviation " << cl_err << ")";
  o.require(ghz_err <= 1e-15, "GHZ dense form");
  o.require(aklt <= 1e-8, "AKLT energy and residual");
  o.require(mg_res <= 1e-8, "MG eigenstate");
  o.require(signs.size() == 1 && cl_err <= 1e-10, "cluster stabilizers share one sign");
}

inline void classical_superposition(Outcome& o) {
  double amp_err = 0.0, kernel = 0.0, overlap_def = 0.0;
  for (double beta : {0.0, 0.3, 0.6}) {
    const PureState psi = to_dense(classical_superposition_mps(ising_coupling(1.0), beta, 8));
    const StateVector want = gibbs_distribution(8, beta, 1.0).cwiseSqrt().cast<cplx>();
    Eigen::Index big;
    psi.amplitudes().cwiseAbs().maxCoeff(&big);
    const cplx phase = psi.amplitudes()(big) / std::abs(psi.amplitudes()(big));
    amp_err = std::max(amp_err, (psi.amplitudes() / phase - want).cwiseAbs().maxCoeff());
    const HermitianEig eig = hermitian_eig(symmetrize(KineticModel::thermal(FlipType::single, 8, beta)));
    kernel = std::max(kernel, std::abs(eig.values(0)));
    overlap_def = std::max(overlap_def, 1.0 - std::abs(eig.vectors.col(0).dot(psi.amplitudes())));
  }
  o.detail << "amplitude error " << amp_err << ", |lowest eigenvalue| " << kernel << ", 1 - overlap " << overlap_def;
  o.require(amp_err <= 1e-10, "amplitudes");
  o.require(kernel <= 1e-10, "zero eigenvalue");
  o.require(overlap_def <= 1e-10, "kernel overlap");
}

inline void area_law_slopes(Outcome& o) {
  const EntropyScan ising = xy_entropy_scan(1.0, 1.0, 128, range(8, 64), Boundary::periodic);
  const EntropyScan xx = xy_entropy_scan(0.0, 0.0, 128, range(8, 64), Boundary::periodic);
  double worst = 0.0;
  for (int n : {10, 12}) {
    for (Boundary bc : {Boundary::open, Boundary::periodic}) {
      for (double g : {0.25, 0.6, 1.0}) {
        for (double h : {0.4, 1.0, 1.7}) {
          const GroundStates gs = ground_state(build_xy(g, h, n, bc));
          const EntropyScan dense = block_entropy_scan(gs.states[0], range(1, n - 1));
          const std::vector<double> ff = xy_entropy_profile(g, h, n, range(1, n - 1), bc);
          for (int b = 1; b < n; ++b) worst = std::max(worst, std::abs(ff[b - 1] - dense.entropies[b - 1]));
        }
      }
    }
  }
  o.detail << "slope(Ising) " << ising.slope << ", slope(XX) " << xx.slope << ", free-fermion vs dense " << worst;
  o.require(std::abs(ising.slope - 1.0 / 6.0) <= 0.02, "Ising slope 1/6 +- 0.02");
  o.require(std::abs(xx.slope - 1.0 / 3.0) <= 0.03, "XX slope 1/3 +- 0.03");
  o.require(worst <= 1e-6, "free fermion vs dense");
}

inline void mutual_info_area_laws(Outcome& o) {
  bool quantum_ok = true;
  for (double beta : {0.1, 1.0}) {
    const AreaLawCheck c = mutual_info_area_check(build_xy(1.0, 1.0, 10, Boundary::periodic), beta, 5);
    o.detail << "beta " << beta << ": I " << c.mutual_info_nats << " <= " << c.tight_bound << " <= " << c.simple_bound
             << " nats; ";
    quantum_ok = quantum_ok && c.holds();
  }
  const ClassicalMutualInfo cl = classical_gibbs_mutual_info(ising_coupling(1.0), 0.5, 12, 6);
  o.detail << "classical I " << cl.mutual_info_bits << " bits (bound " << cl.bound_bits << "), |I - I_boundary| "
           << std::abs(cl.mutual_info_bits - cl.boundary_mutual_info_bits);
  o.require(quantum_ok, "thermal bounds");
  o.require(cl.mutual_info_bits <= cl.bound_bits, "classical bound");
  o.require(std::abs(cl.mutual_info_bits - cl.boundary_mutual_info_bits) <= 1e-9, "boundary identity");
}

inline void kinetic_sectors(Outcome& o) {
  double db = 0.0;
  for (FlipType f : {FlipType::single, FlipType::pair}) db = std::max(db, check_detailed_balance(KineticModel::thermal(f, 8, 0.5)).max_violation);
  double min_eig = std::numeric_limits<double>::infinity();
  for (double phi : {0.0, std::numbers::pi / 8, std::numbers::pi / 4}) {
    for (std::uint64_t code = 0; code < 256; ++code) {
      const TauSector tau = TauSector::from_code(code, 8);
      min_eig = std::min(min_eig, hermitian_eigenvalues(build_h_tau_two_flip(tau, phi, 8).to_dense())(0));
    }
  }
  double block = 0.0;
  for (int j = 0; j <= 8; ++j) {
    const double phi = j * std::numbers::pi / 32;
    block = std::max(block, std::abs(hermitian_eigenvalues(two_flip_term(1, -1, phi))(0) - mixed_tau_term_min_eigenvalue(phi)));
  }
  // Uniform single-flip sectors against the symmetrized generator written with Pauli matrices.
  double felderhof = 0.0;
  for (double delta : {0.0, 0.3}) {
    const KineticModel m = KineticModel::thermal(FlipType::single, 8, 0.5, 1.0, delta);
    const DenseOperator ref = build_h_beta_single_flip(m).to_dense();
    for (std::uint64_t code : {std::uint64_t{0}, std::uint64_t{255}})
      felderhof = std::max(felderhof, max_entry(build_h_tau_single_flip(TauSector::from_code(code, 8), m).to_dense() - ref));
  }
  o.detail << "detailed balance " << db << ", min eig over 768 sectors " << min_eig << ", block formula " << block
           << ", uniform-tau vs H_beta " << felderhof;
  o.require(db <= 1e-10, "detailed balance");
  o.require(min_eig >= -1e-10, "positivity");
  o.require(block <= 1e-12, "three-site block");
  o.require(felderhof <= 1e-12, "uniform tau sectors");
}

inline void sector_evolution(Outcome& o) {
  const KineticModel m = KineticModel::thermal(FlipType::pair, 6, 0.45);
  Rng rng(12012);
  double worst = 0.0;
  for (int k = 0; k < 5; ++k) {
    const DensityMatrix rho = random_density(rng, 6);
    for (double t : {0.1, 1.0}) {
      const DensityMatrix a = sector_split_evolve(rho, m, t);
      worst = std::max(worst, trace_norm(a.matrix() - integrate_qmaster(rho.matrix(), m, t)) / 2.0);
    }
  }
  o.detail << "max trace distance " << worst;
  o.require(worst <= 1e-8, "trace distance 1e-8");
}

inline void figure_degeneracies(Outcome& o) {
  const int n = 16;
  std::vector<double> phis;
  for (int j = 0; j <= 8; ++j) phis.push_back(j * std::numbers::pi / 32);
  const std::uint64_t pair_up = (1u << 9) + (1u << 8), one_up = 1u << 8;
  const auto adj = sector_spectra_scan(FlipType::pair, n, {pair_up}, phis, 2);
  double worst_pair = 0.0;
  for (std::size_t i = 0; i + 1 < adj.size(); i += 2) worst_pair = std::max(worst_pair, adj[i + 1].eigenvalue - adj[i].eigenvalue);
  const auto one = sector_spectra_scan(FlipType::pair, n, {one_up}, {std::numbers::pi / 4}, 2);
  const double one_gap = one[1].eigenvalue - one[0].eigenvalue;
  bool unique = true, closing = true;
  std::ostringstream gap_text;
  for (std::uint64_t code : {std::uint64_t{(1u << 8) - 1u}, one_up, pair_up}) {
    std::vector<double> gaps;
    for (double g : {0.9, 0.99, 0.999}) {
      const auto r = sector_spectra_scan(FlipType::single, n, {code}, {g}, 2);
      gaps.push_back(r[1].eigenvalue - r[0].eigenvalue);
      unique = unique && gaps.back() > 1e-8;
    }
    closing = closing && gaps[0] > gaps[1] && gaps[1] > gaps[2];
    gap_text << " " << gaps[0] << " > " << gaps[1] << " > " << gaps[2] << ";";
  }
  o.detail << "adjacent-pair sector max splitting " << worst_pair << ", single-up gap at pi/4 " << one_gap
           << ", single-flip gaps per tau pattern" << gap_text.str();
  o.require(worst_pair < 1e-8, "adjacent pair doubly degenerate");
  o.require(one_gap > 1e-4, "single tau up non-degenerate at pi/4");
  o.require(unique, "single-flip ground state unique");
  o.require(closing, "single-flip gap closing as gamma -> 1");
}

inline std::vector<Criterion> criteria() {
  return {
      {1, "maximally entangled negativity benchmarks", 1, maximally_entangled},
      {2, "two-qubit concurrence and entanglement of formation", 5, two_qubit_measures},
      {3, "partial-transpose negative eigenvalue counts", 10, ppt_structure},
      {4, "reduction map detection and Choi positivity", 10, positive_maps},
      {5, "Haar purity and entropy statistics", 60, haar_statistics},
      {6, "MPS round trip, truncation bound, canonical form", 60, mps_engine},
      {7, "named MPS states as ground states", 60, named_states},
      {8, "classical superposition state and Glauber kernel", 30, classical_superposition},
      {9, "critical block-entropy slopes and free-fermion oracle", 120, area_law_slopes},
      {10, "thermal and classical mutual-information area laws", 60, mutual_info_area_laws},
      {11, "kinetic detailed balance and sector positivity", 120, kinetic_sectors},
      {12, "sector-split evolution against direct integration", 120, sector_evolution},
      {13, "N = 16 sector degeneracies", 600, figure_degeneracies},
  };
}

struct CriterionResult {
  int id = 0;
  std::string title;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
  double budget_s = 0.0;
};

/// Runs one criterion; exceptions and budget overruns count as failures.
inline CriterionResult run_criterion(const Criterion& c) {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    c.run(o);
  } catch (const std::exception& e) {
    o.ok = false;
    o.detail << " [exception: " << e.what() << "]";
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (secs > c.budget_s) {
    o.ok = false;
    o.detail << " [over time budget " << c.budget_s << " s]";
  }
  return {c.id, c.title, o.ok, o.detail.str(), secs, c.budget_s};
}

}  // namespace entlab::acceptance
