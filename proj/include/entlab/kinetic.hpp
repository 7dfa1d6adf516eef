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

// Kinetic Ising models on a ring: single-flip (Glauber) and pair-flip master
// equations, their detailed-balance symmetrization, the quantum two-flip
// master equation and its split into tau sectors.
//
// Conventions:
//  - configuration index x has site 0 as its most significant binary digit;
//    digit 0 is spin +1, so sigma^z = diag(1, -1) as in SpinHamiltonian.
//  - generator columns are source configurations: G(x', x) = rate x -> x'.
//  - tau codes: bit k (LSB = first site) set <=> tau_{k+1} = +1, so the
//    uniform +1 pattern is 2^N - 1 and the uniform -1 pattern is 0.

#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "entlab/chains.hpp"
#include "entlab/errors.hpp"
#include "entlab/lanczos.hpp"
#include "entlab/linalg.hpp"
#include "entlab/sparse.hpp"
#include "entlab/states.hpp"

namespace entlab {

enum class FlipType { single, pair };

inline const char* flip_name(FlipType f) { return f == FlipType::single ? "single" : "pair"; }

/// Largest N for dense kinetic matrices and for the sector evolution.
inline constexpr int kKineticDenseSites = 12;
inline constexpr int kSectorEvolveSites = 10;
/// Largest N for sparse generators and sector Hamiltonians.
inline constexpr int kKineticSparseSites = 20;

struct KineticModel {
  int sites = 0;
  FlipType flip = FlipType::single;
  double rate = 1.0;      // Gamma
  double gamma = 0.0;     // in [0, 1]
  double delta = 0.0;     // single-flip only, in [-1, 1]
  double beta = 0.0;      // inverse temperature
  double coupling = 1.0;  // J > 0

  /// gamma = tanh(2 beta J).
  static KineticModel thermal(FlipType flip, int n, double beta, double j = 1.0, double delta = 0.0, double rate = 1.0) {
    KineticModel m{n, flip, rate, std::tanh(2.0 * beta * j), delta, beta, j};
    m.validate();
    return m;
  }

  /// Parametrized by gamma; beta J = atanh(gamma) / 2 (infinite at gamma = 1).
  static KineticModel from_gamma(FlipType flip, int n, double gamma, double delta = 0.0, double rate = 1.0) {
    const double b = gamma >= 1.0 ? std::numeric_limits<double>::infinity() : 0.5 * std::atanh(gamma);
    KineticModel m{n, flip, rate, gamma, delta, b, 1.0};
    m.validate();
    return m;
  }

  /// Pair-flip model at angle phi in [0, pi/4]: gamma = sin 2 phi, tan phi = tanh beta J.
  static KineticModel from_phi(int n, double phi, double rate = 1.0) {
    if (phi < 0.0 || phi > std::numbers::pi / 4 + 1e-15) throw DomainError("KineticModel: phi must lie in [0, pi/4]");
    const double t = std::tan(phi);
    const double b = t >= 1.0 ? std::numeric_limits<double>::infinity() : std::atanh(t);
    KineticModel m{n, FlipType::pair, rate, std::min(1.0, std::sin(2.0 * phi)), 0.0, b, 1.0};
    m.validate();
    return m;
  }

  void validate() const {
    if (sites < (flip == FlipType::pair ? 4 : 3)) throw DomainError("KineticModel: ring too short for the flip range");
    if (sites > kKineticSparseSites) throw ResourceLimitError("KineticModel: N above the sparse limit");
    if (!(rate > 0.0)) throw DomainError("KineticModel: Gamma must be > 0");
    if (gamma < 0.0 || gamma > 1.0) throw DomainError("KineticModel: gamma must lie in [0, 1]");
    if (delta < -1.0 || delta > 1.0) throw DomainError("KineticModel: delta must lie in [-1, 1]");
    if (flip == FlipType::pair && delta != 0.0) throw DomainError("KineticModel: delta applies to single flips only");
    if (!(beta >= 0.0)) throw DomainError("KineticModel: beta must be >= 0");
    if (!(coupling > 0.0)) throw DomainError("KineticModel: J must be > 0");
  }

  /// True when gamma = tanh(2 beta J).
  bool is_thermal(double tol = 1e-12) const { return std::abs(gamma - std::tanh(2.0 * beta * coupling)) <= tol; }

  /// Angle with cos phi = cosh(bJ) / sqrt(cosh^2 + sinh^2); equals asin(gamma) / 2.
  double phi() const { return 0.5 * std::asin(gamma); }

  Eigen::Index dim() const { return Eigen::Index{1} << sites; }
};

/// The line delta = gamma / (2 - gamma) with the anomalous dynamical exponent.
inline bool on_special_line(const KineticModel& m, double tol = 1e-12) {
  return m.flip == FlipType::single && std::abs(m.delta - m.gamma / (2.0 - m.gamma)) <= tol;
}

// ---------------------------------------------------------------------------
// Configurations and tau sectors.

using Spins = std::vector<int>;

inline Spins spins_of(Eigen::Index x, int n) {
  Spins s(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) s[static_cast<std::size_t>(k)] = ((x >> (n - 1 - k)) & 1) ? -1 : 1;
  return s;
}

inline Eigen::Index index_of(const Spins& s) {
  Eigen::Index x = 0;
  for (int v : s) x = (x << 1) | (v < 0 ? 1 : 0);
  return x;
}

/// Bit mask of site k inside a configuration index.
inline Eigen::Index site_mask(int k, int n) { return Eigen::Index{1} << (n - 1 - k); }

struct TauSector {
  std::vector<int> tau;  // +-1 per site
  std::uint64_t code = 0;

  static TauSector from_code(std::uint64_t code, int n) {
    if (n < 1 || n > 63 || code >> n) throw DomainError("TauSector: code out of range");
    TauSector t;
    t.code = code;
    for (int k = 0; k < n; ++k) t.tau.push_back((code >> k) & 1 ? 1 : -1);
    return t;
  }

  static TauSector from_pattern(const std::vector<int>& tau) {
    TauSector t;
    t.tau = tau;
    for (std::size_t k = 0; k < tau.size(); ++k) {
      if (tau[k] != 1 && tau[k] != -1) throw DomainError("TauSector: entries must be +1 or -1");
      if (tau[k] == 1) t.code |= std::uint64_t{1} << k;
    }
    return t;
  }

  static TauSector uniform(int n, int value) { return from_pattern(std::vector<int>(static_cast<std::size_t>(n), value)); }

  int sites() const { return static_cast<int>(tau.size()); }
  int at(int k) const {
    const int n = sites();
    return tau[static_cast<std::size_t>(((k % n) + n) % n)];
  }
  bool is_uniform() const { return std::all_of(tau.begin(), tau.end(), [&](int v) { return v == tau[0]; }); }
  int product() const {
    int p = 1;
    for (int v : tau) p *= v;
    return p;
  }
  /// "+" / "-" per site, first site first.
  std::string pattern() const {
    std::string s;
    for (int v : tau) s += v > 0 ? '+' : '-';
    return s;
  }
};

// ---------------------------------------------------------------------------
// Rates, generators and detailed balance.

namespace detail {
inline int at(const Spins& s, int k) {
  const int n = static_cast<int>(s.size());
  return s[static_cast<std::size_t>(((k % n) + n) % n)];
}
}  // namespace detail

/// Gamma (1 + delta s_{i-1} s_{i+1}) [1 - gamma s_i (s_{i-1} + s_{i+1}) / 2].
inline double glauber_rate(const Spins& s, int i, const KineticModel& m) {
  const int l = detail::at(s, i - 1), c = detail::at(s, i), r = detail::at(s, i + 1);
  return m.rate * (1.0 + m.delta * l * r) * (1.0 - 0.5 * m.gamma * c * (l + r));
}

/// Gamma [1 - gamma (s_{i-1} s_i + s_{i+1} s_{i+2}) / 2] for flipping sites i, i+1.
inline double two_flip_rate(const Spins& s, int i, const KineticModel& m) {
  return m.rate * (1.0 - 0.5 * m.gamma * (detail::at(s, i - 1) * detail::at(s, i) + detail::at(s, i + 1) * detail::at(s, i + 2)));
}

/// Rate of move i out of configuration s, and the mask flipped by it.
using RateFunction = std::function<double(const Spins&, int)>;

inline RateFunction model_rate(const KineticModel& m) {
  if (m.flip == FlipType::single) return [m](const Spins& s, int i) { return glauber_rate(s, i, m); };
  return [m](const Spins& s, int i) { return two_flip_rate(s, i, m); };
}

inline Eigen::Index move_mask(FlipType flip, int i, int n) {
  Eigen::Index mask = site_mask(i, n);
  if (flip == FlipType::pair) mask |= site_mask((i + 1) % n, n);
  return mask;
}

/// Classical Ising energy -J sum_i s_i s_{i+1} on the ring.
inline double ising_energy(const Spins& s, double j) {
  double e = 0.0;
  for (int k = 0; k < static_cast<int>(s.size()); ++k) e -= j * detail::at(s, k) * detail::at(s, k + 1);
  return e;
}

/// Master-equation generator; columns sum to zero.
inline SparseOperator<double> build_generator(int n, FlipType flip, const RateFunction& rate) {
  if (n > kKineticSparseSites) throw ResourceLimitError("build_generator: N above the sparse limit");
  const Eigen::Index dim = Eigen::Index{1} << n;
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(dim) * static_cast<std::size_t>(n + 1));
  for (Eigen::Index x = 0; x < dim; ++x) {
    const Spins s = spins_of(x, n);
    double out = 0.0;
    for (int i = 0; i < n; ++i) {
      const double w = rate(s, i);
      if (w < 0.0) throw DomainError("build_generator: negative rate");
      if (w == 0.0) continue;
      trip.emplace_back(x ^ move_mask(flip, i, n), x, w);
      out += w;
    }
    trip.emplace_back(x, x, -out);
  }
  return SparseOperator<double>::from_triplets(dim, trip);
}

inline SparseOperator<double> build_generator(const KineticModel& m) {
  m.validate();
  return build_generator(m.sites, m.flip, model_rate(m));
}

struct DetailedBalanceReport {
  bool passes = false;
  double max_violation = 0.0;  // relative
  Eigen::Index worst_from = -1, worst_to = -1;
};

/// max |W(s, s') e^{-b H(s')} - W(s', s) e^{-b H(s)}| / max(both) over all moves.
inline DetailedBalanceReport check_detailed_balance(int n, FlipType flip, const RateFunction& rate, double beta, double j,
                                                    double tol = 1e-10) {
  const Eigen::Index dim = Eigen::Index{1} << n;
  DetailedBalanceReport rep;
  for (Eigen::Index x = 0; x < dim; ++x) {
    const Spins s = spins_of(x, n);
    const double es = ising_energy(s, j);
    for (int i = 0; i < n; ++i) {
      const Eigen::Index y = x ^ move_mask(flip, i, n);
      const Spins t = spins_of(y, n);
      const double et = ising_energy(t, j);
      // W(t, s) e^{-b H(s)} vs W(s, t) e^{-b H(t)}, scaled by e^{b min(H)}.
      const double emin = std::min(es, et);
      const double lhs = rate(s, i) * std::exp(-beta * (es - emin));
      const double rhs = rate(t, i) * std::exp(-beta * (et - emin));
      const double scale = std::max({std::abs(lhs), std::abs(rhs), 1e-300});
      const double v = std::abs(lhs - rhs) / scale;
      if (v > rep.max_violation) {
        rep.max_violation = v;
        rep.worst_from = x;
        rep.worst_to = y;
      }
    }
  }
  rep.passes = rep.max_violation <= tol;
  return rep;
}

inline DetailedBalanceReport check_detailed_balance(const KineticModel& m, double tol = 1e-10) {
  m.validate();
  if (!std::isfinite(m.beta)) throw DomainError("check_detailed_balance: beta must be finite");
  return check_detailed_balance(m.sites, m.flip, model_rate(m), m.beta, m.coupling, tol);
}

/// Gibbs distribution e^{-beta H} / Z over configurations.
inline RealVector gibbs_distribution(int n, double beta, double j) {
  const Eigen::Index dim = Eigen::Index{1} << n;
  RealVector e(dim);
  for (Eigen::Index x = 0; x < dim; ++x) e(x) = ising_energy(spins_of(x, n), j);
  RealVector p = (-beta * (e.array() - e.minCoeff())).exp();
  return p / p.sum();
}

/// H_beta(s, s') = delta_{ss'} sum_s'' W(s'', s') - e^{b H(s)/2} W(s, s') e^{-b H(s')/2}.
inline DenseOperator symmetrize(const KineticModel& m) {
  if (m.sites > kKineticDenseSites) throw ResourceLimitError("symmetrize: N above the dense limit");
  const DetailedBalanceReport db = check_detailed_balance(m);
  if (!db.passes) {
    std::ostringstream msg;
    msg << "symmetrize: detailed balance fails (relative violation " << db.max_violation << " at " << db.worst_from << " -> "
        << db.worst_to << ")";
    throw DomainError(msg.str());
  }
  const Eigen::Index dim = m.dim();
  RealVector e(dim);
  for (Eigen::Index x = 0; x < dim; ++x) e(x) = ising_energy(spins_of(x, m.sites), m.coupling);
  const RealMatrix g = build_generator(m).to_dense();
  RealMatrix h(dim, dim);
  for (Eigen::Index r = 0; r < dim; ++r)
    for (Eigen::Index c = 0; c < dim; ++c) h(r, c) = -std::exp(0.5 * m.beta * (e(r) - e(c))) * g(r, c);
  // Exact symmetry up to roundoff in the exponentials.
  return (0.5 * (h + h.transpose())).cast<cplx>();
}

// ---------------------------------------------------------------------------
// Operator-form Hamiltonians.

namespace detail {

inline DenseOperator id2() { return DenseOperator::Identity(2, 2); }

/// Single-flip A without the removable gamma -> 0 singularity:
/// (1+d) g^2 / (2 (1 - sqrt(1 - g^2))) - d = (1 + d)(1 + sqrt(1 - g^2)) / 2 - d.
inline double felderhof_a(double delta, double gamma) {
  return 0.5 * (1.0 + delta) * (1.0 + std::sqrt(1.0 - gamma * gamma)) - delta;
}

/// Single-flip term on (i-1, i, i+1):
/// -G[(a - b Z Z) X - c0 + (g/2)(1+d) Z_i (fl Z_{i-1} + fr Z_{i+1}) - d fo Z_{i-1} Z_{i+1}].
inline DenseOperator single_flip_term(double a, double b, double fl, double fr, double fo, const KineticModel& m) {
  const DenseOperator x = pauli::x(), z = pauli::z(), i2 = id2();
  const DenseOperator zz = kron_all({z, i2, z});
  const DenseOperator hop = (a * DenseOperator::Identity(8, 8) - b * zz) * kron_all({i2, x, i2});
  const DenseOperator diag = -DenseOperator::Identity(8, 8) +
                             0.5 * m.gamma * (1.0 + m.delta) * (fl * kron_all({z, z, i2}) + fr * kron_all({i2, z, z})) -
                             m.delta * fo * zz;
  return -m.rate * (hop + diag);
}

}  // namespace detail

/// Symmetrized single-flip generator written with Pauli operators:
/// -G sum_i [(A - B Z_{i-1} Z_{i+1}) X_i - (1 + d Z_{i-1} Z_{i+1})(1 - (g/2) Z_i (Z_{i-1} + Z_{i+1}))],
/// A = (1+d) g^2 / (2 (1 - sqrt(1-g^2))) - d and B = 1 - d - A.
inline SpinHamiltonian build_h_beta_single_flip(const KineticModel& m) {
  m.validate();
  if (m.flip != FlipType::single) throw DomainError("build_h_beta_single_flip: single-flip model required");
  const double a = detail::felderhof_a(m.delta, m.gamma);
  const double b = 1.0 - m.delta - a;
  SpinHamiltonian h(m.sites, 2, Boundary::periodic);
  const DenseOperator x = pauli::x(), z = pauli::z(), i2 = detail::id2();
  const DenseOperator zz = kron_all({z, i2, z});
  const DenseOperator id8 = DenseOperator::Identity(8, 8);
  const DenseOperator diag = (id8 + m.delta * zz) * (id8 - 0.5 * m.gamma * (kron_all({z, z, i2}) + kron_all({i2, z, z})));
  const DenseOperator term = -m.rate * ((a * id8 - b * zz) * kron_all({i2, x, i2}) - diag);
  const int n = m.sites;
  for (int i = 0; i < n; ++i) h.add_term({(i + n - 1) % n, i, (i + 1) % n}, term);
  return h;
}

/// Single-flip sector Hamiltonian H_tau(delta, gamma).
inline SpinHamiltonian build_h_tau_single_flip(const TauSector& tau, const KineticModel& m) {
  m.validate();
  if (m.flip != FlipType::single) throw DomainError("build_h_tau_single_flip: single-flip model required");
  const int n = m.sites;
  if (tau.sites() != n) throw DimensionError("build_h_tau_single_flip: tau length differs from N");
  const double a_same = detail::felderhof_a(m.delta, m.gamma);
  const double b_same = 1.0 - m.delta - a_same;
  const double a_mixed = std::sqrt(1.0 - m.delta * m.delta) * std::pow(1.0 - m.gamma * m.gamma, 0.25);
  auto f = [](int v) { return 0.5 * (1.0 + v); };
  SpinHamiltonian h(n, 2, Boundary::periodic);
  for (int i = 0; i < n; ++i) {
    const bool same = tau.at(i - 1) == tau.at(i + 1);
    const double a = same ? a_same : a_mixed;
    const double b = same ? b_same : 0.0;
    h.add_term({(i + n - 1) % n, i, (i + 1) % n},
               detail::single_flip_term(a, b, f(tau.at(i - 1) * tau.at(i)), f(tau.at(i) * tau.at(i + 1)),
                                        f(tau.at(i - 1) * tau.at(i + 1)), m));
  }
  return h;
}

/// One two-flip term on (i-1, i, i+1, i+2) for neighbouring tau values, Gamma = 1:
/// -[(A - B Z Z Z Z) X_i X_{i+1} - (1 - (g/2)(f(t_{i-1}) Z_{i-1} Z_i + f(t_{i+1}) Z_{i+1} Z_{i+2}))].
inline DenseOperator two_flip_term(int tau_prev, int tau_next, double phi) {
  const double c2 = std::cos(2.0 * phi);
  const double g = std::sin(2.0 * phi);
  const bool same = tau_prev * tau_next == 1;
  const double a = same ? std::cos(phi) * std::cos(phi) : std::sqrt(std::max(0.0, c2));
  const double b = same ? std::sin(phi) * std::sin(phi) : 0.0;
  const double fp = 0.5 * (1.0 + tau_prev), fn = 0.5 * (1.0 + tau_next);
  const DenseOperator x = pauli::x(), z = pauli::z(), i2 = detail::id2();
  const DenseOperator id16 = DenseOperator::Identity(16, 16);
  const DenseOperator hop = (a * id16 - b * kron_all({z, z, z, z})) * kron_all({i2, x, x, i2});
  const DenseOperator diag = id16 - 0.5 * g * (fp * kron_all({z, z, i2, i2}) + fn * kron_all({i2, i2, z, z}));
  return -(hop - diag);
}

/// Two-flip sector Hamiltonian H_tau(phi), scaled by Gamma.
inline SpinHamiltonian build_h_tau_two_flip(const TauSector& tau, double phi, int n, double rate = 1.0) {
  if (phi < 0.0 || phi > std::numbers::pi / 4 + 1e-15) throw DomainError("build_h_tau_two_flip: phi must lie in [0, pi/4]");
  if (n < 4) throw DomainError("build_h_tau_two_flip: ring needs N >= 4");
  if (tau.sites() != n) throw DimensionError("build_h_tau_two_flip: tau length differs from N");
  SpinHamiltonian h(n, 2, Boundary::periodic);
  for (int i = 0; i < n; ++i) {
    h.add_term({(i + n - 1) % n, i, (i + 1) % n, (i + 2) % n}, two_flip_term(tau.at(i - 1), tau.at(i + 1), phi), rate);
  }
  return h;
}

/// 1 - sqrt(4 cos 2phi + sin^2 2phi) / 2, smallest eigenvalue of a mixed-tau term.
inline double mixed_tau_term_min_eigenvalue(double phi) {
  const double s = std::sin(2.0 * phi);
  return 1.0 - 0.5 * std::sqrt(4.0 * std::cos(2.0 * phi) + s * s);
}

// ---------------------------------------------------------------------------
// Quantum two-flip master equation.

namespace detail {

/// Diagonal of w_i(sigma^z) over configurations.
inline RealVector pair_rate_diagonal(const KineticModel& m, int i) {
  const Eigen::Index dim = m.dim();
  RealVector w(dim);
  for (Eigen::Index x = 0; x < dim; ++x) w(x) = two_flip_rate(spins_of(x, m.sites), i, m);
  return w;
}

inline void check_pair(const KineticModel& m, const char* who) {
  m.validate();
  if (m.flip != FlipType::pair) throw DomainError(std::string(who) + ": pair-flip model required");
}

}  // namespace detail

/// d rho / dt = sum_i [K_i rho K_i^dag - {w_i, rho} / 2], K_i = X_i X_{i+1} sqrt(w_i).
inline DenseOperator qmaster_rhs(const DenseOperator& rho, const KineticModel& m) {
  detail::check_pair(m, "qmaster_rhs");
  const int n = m.sites;
  const Eigen::Index dim = m.dim();
  if (rho.rows() != dim || rho.cols() != dim) throw DimensionError("qmaster_rhs: rho has the wrong size");
  DenseOperator out = DenseOperator::Zero(dim, dim);
  for (int i = 0; i < n; ++i) {
    const RealVector w = detail::pair_rate_diagonal(m, i);
    const RealVector sw = w.cwiseSqrt();
    const Eigen::Index mask = move_mask(FlipType::pair, i, n);
    // (K rho K^dag)(a, b) = sqrt(w(Fa) w(Fb)) rho(Fa, Fb).
    for (Eigen::Index b = 0; b < dim; ++b)
      for (Eigen::Index a = 0; a < dim; ++a) {
        out(a, b) += sw(a ^ mask) * sw(b ^ mask) * rho(a ^ mask, b ^ mask) - 0.5 * (w(a) + w(b)) * rho(a, b);
      }
  }
  return out;
}

/// Vectorized generator on |rho> = sum rho(s, s~) |s>|s~>, index s * 2^N + s~.
inline SparseOperator<double> vectorized_generator(const KineticModel& m) {
  detail::check_pair(m, "vectorized_generator");
  if (m.sites > 8) throw ResourceLimitError("vectorized_generator: N above 8");
  const int n = m.sites;
  const Eigen::Index dim = m.dim();
  std::vector<Eigen::Triplet<double>> trip;
  for (int i = 0; i < n; ++i) {
    const RealVector w = detail::pair_rate_diagonal(m, i);
    const Eigen::Index mask = move_mask(FlipType::pair, i, n);
    for (Eigen::Index a = 0; a < dim; ++a)
      for (Eigen::Index b = 0; b < dim; ++b) {
        const Eigen::Index row = a * dim + b;
        trip.emplace_back(row, (a ^ mask) * dim + (b ^ mask), std::sqrt(w(a ^ mask) * w(b ^ mask)));
        trip.emplace_back(row, row, -0.5 * (w(a) + w(b)));
      }
  }
  return SparseOperator<double>::from_triplets(dim * dim, trip);
}

/// Diagonal conserved quantity s_i s_{i+1} s~_i s~_{i+1} on the vectorized space.
inline RealVector vectorized_tau_operator(int i, int n) {
  const Eigen::Index dim = Eigen::Index{1} << n;
  RealVector t(dim * dim);
  for (Eigen::Index a = 0; a < dim; ++a) {
    const Spins s = spins_of(a, n);
    for (Eigen::Index b = 0; b < dim; ++b) {
      const Spins u = spins_of(b, n);
      t(a * dim + b) = detail::at(s, i) * detail::at(s, i + 1) * detail::at(u, i) * detail::at(u, i + 1);
    }
  }
  return t;
}

/// exp(t A) v by a Taylor series on sub-steps with ||A|| dt <= 1; `norm_bound`
/// is an upper bound on ||A||.
template <class Vec, class Apply>
Vec taylor_propagate(const Apply& apply, Vec v, double t, double norm_bound) {
  if (t < 0.0) throw DomainError("taylor_propagate: t must be >= 0");
  if (t == 0.0) return v;
  const int steps = std::max(1, static_cast<int>(std::ceil(t * std::max(norm_bound, 1e-12))));
  const double dt = t / steps;
  for (int s = 0; s < steps; ++s) {
    Vec term = v, sum = v;
    for (int k = 1; k < 80; ++k) {
      term = apply(term) * (dt / k);
      sum += term;
      if (term.norm() <= 1e-17 * sum.norm()) break;
    }
    v = sum;
  }
  return v;
}

/// Direct integration of the quantum two-flip master equation on rho.
inline DenseOperator integrate_qmaster(const DenseOperator& rho0, const KineticModel& m, double t) {
  detail::check_pair(m, "integrate_qmaster");
  const double bound = 2.0 * m.sites * m.rate * (1.0 + m.gamma);
  return taylor_propagate([&m](const DenseOperator& r) -> DenseOperator { return qmaster_rhs(r, m); }, rho0, t, bound);
}

/// Classical master equation P(t) = exp(G t) P(0).
inline RealVector evolve_master(const KineticModel& m, const RealVector& p0, double t) {
  const SparseOperator<double> g = build_generator(m);
  if (p0.size() != g.dim()) throw DimensionError("evolve_master: P0 has the wrong size");
  const double bound = 2.0 * m.sites * m.rate * 2.0 * (1.0 + std::abs(m.delta));
  return taylor_propagate([&g](const RealVector& p) -> RealVector { return g.csr() * p; }, p0, t, bound);
}

/// Evolves rho0 under the quantum two-flip master equation by splitting into
/// blocks psi_eta(s) = psi(s, eta s), eta = +-1 per site, each of which
/// evolves with exp(-H_tau t), tau_k = eta_k eta_{k+1}; psi = e^{(b/4)(H(s) + H(s~))} rho.
inline DensityMatrix sector_split_evolve(const DensityMatrix& rho0, const KineticModel& m, double t) {
  detail::check_pair(m, "sector_split_evolve");
  const int n = m.sites;
  if (n > kSectorEvolveSites) throw ResourceLimitError("sector_split_evolve: N above the sector-evolution limit");
  if (!m.is_thermal() || !std::isfinite(m.beta)) throw DomainError("sector_split_evolve: model must be thermally parametrized with finite beta");
  if (rho0.sites() != n || rho0.dim() != m.dim()) throw DimensionError("sector_split_evolve: rho0 does not match the model");
  if (t < 0.0) throw DomainError("sector_split_evolve: t must be >= 0");
  const Eigen::Index dim = m.dim();
  RealVector weight(dim);
  for (Eigen::Index x = 0; x < dim; ++x) weight(x) = std::exp(0.25 * m.beta * ising_energy(spins_of(x, n), m.coupling));
  const double phi = m.phi();
  std::map<std::uint64_t, DenseOperator> propagators;
  DenseOperator out = DenseOperator::Zero(dim, dim);
  for (Eigen::Index e = 0; e < dim; ++e) {
    // eta as a flip mask: site k has eta_k = -1 when its bit is set in e.
    const Spins eta = spins_of(e, n);
    std::vector<int> tau(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) tau[static_cast<std::size_t>(k)] = detail::at(eta, k) * detail::at(eta, k + 1);
    const TauSector sector = TauSector::from_pattern(tau);
    auto it = propagators.find(sector.code);
    if (it == propagators.end()) {
      const HermitianEig eig = hermitian_eig(build_h_tau_two_flip(sector, phi, n, m.rate).to_dense());
      const RealVector decay = (-t * eig.values.array()).exp();
      it = propagators.emplace(sector.code, eig.vectors * decay.cast<cplx>().asDiagonal() * eig.vectors.adjoint()).first;
    }
    StateVector v(dim);
    for (Eigen::Index s = 0; s < dim; ++s) v(s) = weight(s) * weight(s ^ e) * rho0.matrix()(s, s ^ e);
    const StateVector w = it->second * v;
    for (Eigen::Index s = 0; s < dim; ++s) out(s, s ^ e) = w(s) / (weight(s) * weight(s ^ e));
  }
  return DensityMatrix(rho0.dims(), out, 1e-8);
}

// ---------------------------------------------------------------------------
// Sector spectra.

struct SpectrumRow {
  FlipType flip = FlipType::pair;
  int sites = 0;
  std::uint64_t tau_code = 0;
  std::string tau_pattern;
  double parameter = 0.0;  // phi for pair flips, gamma for single flips
  int level = 0;
  double eigenvalue = 0.0;
};

/// k lowest eigenvalues of H_tau for every (tau, parameter); rows ordered by
/// tau (as given), then parameter, then level.
inline std::vector<SpectrumRow> sector_spectra_scan(FlipType flip, int n, const std::vector<std::uint64_t>& taus,
                                                    const std::vector<double>& params, int k, double delta = 0.0,
                                                    std::uint64_t seed = 20260101) {
  if (n > kKineticSparseSites) throw ResourceLimitError("sector_spectra_scan: N above the sparse limit");
  if (k < 1) throw DomainError("sector_spectra_scan: k must be >= 1");
  std::vector<SpectrumRow> rows;
  for (std::uint64_t code : taus) {
    const TauSector tau = TauSector::from_code(code, n);
    for (double p : params) {
      const SpinHamiltonian h = flip == FlipType::pair
                                    ? build_h_tau_two_flip(tau, p, n)
                                    : build_h_tau_single_flip(tau, KineticModel::from_gamma(FlipType::single, n, p, delta));
      std::vector<double> values;
      if (h.dim() <= kDenseAutoDim) {
        const RealVector ev = hermitian_eigenvalues(h.to_dense());
        values.assign(ev.data(), ev.data() + std::min<Eigen::Index>(k, ev.size()));
      } else {
        const SparseOperator<double> sp = h.to_sparse_real();
        LanczosOptions opt;
        opt.tol = 1e-11;
        opt.want_vectors = false;
        values = lanczos_lowest(sp, k, seed, opt).values;
      }
      for (int l = 0; l < static_cast<int>(values.size()); ++l) {
        rows.push_back({flip, n, code, tau.pattern(), p, l, values[static_cast<std::size_t>(l)]});
      }
    }
  }
  return rows;
}

}  // namespace entlab
