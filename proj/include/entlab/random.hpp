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

// Haar-random bipartite pure states on C^m (x) C^n and their reduced-state
// statistics. Entropies here are in nats unless a function says otherwise.

#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "entlab/parallel.hpp"
#include "entlab/rng.hpp"
#include "entlab/states.hpp"

namespace entlab {

/// Samples per substream; sample i of a run always comes from substream
/// i / kSamplesPerStream, whatever the thread count.
inline constexpr long kSamplesPerStream = 256;

inline PureState haar_pure(Rng& rng, int m, int n) {
  if (m < 1 || n < 1) throw DimensionError("haar_pure: m and n must be >= 1");
  return PureState({m, n}, rng.haar_state(static_cast<Eigen::Index>(m) * n));
}

inline PureState haar_pure(int m, int n, std::uint64_t seed) {
  Rng rng(seed);
  return haar_pure(rng, m, n);
}

/// <tr rho_A^2> = (m + n) / (mn + 1).
inline double mean_purity_exact(int m, int n) {
  if (m < 1 || n < 1) throw DimensionError("mean_purity_exact: m and n must be >= 1");
  return static_cast<double>(m + n) / (static_cast<double>(m) * n + 1.0);
}

/// <S(rho_A)> = Psi(mn+1) - Psi(n+1) - (m-1)/(2n) in nats, with the digamma
/// difference written as the harmonic sum sum_{k=n+1}^{mn} 1/k.
inline double mean_entropy_exact(int m, int n) {
  if (m < 1 || n < 1) throw DimensionError("mean_entropy_exact: m and n must be >= 1");
  if (m > n) throw DomainError("mean_entropy_exact: requires m <= n");
  const long top = static_cast<long>(m) * n;
  double h = 0.0;
  for (long k = top; k > n; --k) h += 1.0 / static_cast<double>(k);
  return h - (m - 1.0) / (2.0 * n);
}

/// Large-n approximation ln m - m / (2n), nats.
inline double mean_entropy_approx(int m, int n) { return std::log(static_cast<double>(m)) - m / (2.0 * n); }

inline double nats_to_bits(double nats) { return nats / std::numbers::ln2; }

/// Eigenvalues of rho_A for a Haar state drawn from rng (m x n amplitude matrix).
inline RealVector haar_reduced_spectrum(Rng& rng, int m, int n) {
  const DenseOperator g = rng.complex_gaussian_matrix(m, n);
  const DenseOperator r = g * g.adjoint();
  Eigen::SelfAdjointEigenSolver<DenseOperator> es(r, Eigen::EigenvaluesOnly);
  return es.eigenvalues() / r.trace().real();
}

struct MeanEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  long samples = 0;
};

namespace detail {

struct Moments {
  long n = 0;
  double mean = 0.0;
  double m2 = 0.0;
  void add(double x) {
    ++n;
    const double d = x - mean;
    mean += d / static_cast<double>(n);
    m2 += d * (x - mean);
  }
  void merge(const Moments& o) {
    if (o.n == 0) return;
    const long total = n + o.n;
    const double d = o.mean - mean;
    mean += d * static_cast<double>(o.n) / static_cast<double>(total);
    m2 += o.m2 + d * d * static_cast<double>(n) * static_cast<double>(o.n) / static_cast<double>(total);
    n = total;
  }
};

}  // namespace detail

/// Per-sample values of f(spectrum of rho_A), reproducible for any thread count.
template <class F>
std::vector<double> haar_sample_values(int m, int n, long samples, std::uint64_t seed, F&& f, int threads = 0) {
  if (m < 1 || n < 1) throw DimensionError("haar sampling: m and n must be >= 1");
  std::vector<double> out(static_cast<std::size_t>(samples));
  const long streams = (samples + kSamplesPerStream - 1) / kSamplesPerStream;
  parallel_for(streams, threads > 0 ? threads : default_threads(), [&](long s) {
    Rng rng(seed, static_cast<std::uint64_t>(s) + 1);
    const long end = std::min(samples, (s + 1) * kSamplesPerStream);
    for (long i = s * kSamplesPerStream; i < end; ++i) out[static_cast<std::size_t>(i)] = f(haar_reduced_spectrum(rng, m, n));
  });
  return out;
}

inline MeanEstimate mean_of(const std::vector<double>& values) {
  // Chunked merge keeps the summation order fixed.
  detail::Moments total;
  for (std::size_t c = 0; c < values.size(); c += static_cast<std::size_t>(kSamplesPerStream)) {
    detail::Moments part;
    const std::size_t end = std::min(values.size(), c + static_cast<std::size_t>(kSamplesPerStream));
    for (std::size_t i = c; i < end; ++i) part.add(values[i]);
    total.merge(part);
  }
  MeanEstimate e;
  e.samples = total.n;
  e.mean = total.mean;
  e.std_error = total.n > 1 ? std::sqrt(total.m2 / static_cast<double>(total.n - 1) / static_cast<double>(total.n)) : 0.0;
  return e;
}

/// Monte Carlo <S(rho_A)> in nats with its standard error.
inline MeanEstimate mean_entropy_mc(int m, int n, long samples, std::uint64_t seed, int threads = 0) {
  if (samples < 100) throw DomainError("mean_entropy_mc: samples must be >= 100");
  return mean_of(haar_sample_values(
      m, n, samples, seed, [](const RealVector& p) { return spectrum_entropy(p, LogBase::nats); }, threads));
}

/// Monte Carlo <tr rho_A^2>.
inline MeanEstimate mean_purity_mc(int m, int n, long samples, std::uint64_t seed, int threads = 0) {
  if (samples < 100) throw DomainError("mean_purity_mc: samples must be >= 100");
  return mean_of(haar_sample_values(
      m, n, samples, seed, [](const RealVector& p) { return p.squaredNorm(); }, threads));
}

/// log C_{m,n} = log Gamma(mn) - sum_{i=0}^{m-1} [log Gamma(n-i) + log Gamma(m-i+1)].
inline double log_spectral_constant(int m, int n) {
  double c = std::lgamma(static_cast<double>(m) * n);
  for (int i = 0; i < m; ++i) c -= std::lgamma(static_cast<double>(n - i)) + std::lgamma(static_cast<double>(m - i + 1));
  return c;
}

/// C_{m,n} prod lambda_i^{n-m} prod_{i<j} (lambda_i - lambda_j)^2, evaluated in
/// log space. The simplex delta is left to the caller's parametrization.
inline double spectral_density(int m, int n, const std::vector<double>& lambdas) {
  if (m < 1 || n < m) throw DomainError("spectral_density: requires 1 <= m <= n");
  if (static_cast<int>(lambdas.size()) != m) throw DimensionError("spectral_density: need m eigenvalues");
  for (double l : lambdas)
    if (l < 0.0) throw DomainError("spectral_density: negative eigenvalue");
  double logd = log_spectral_constant(m, n);
  for (int i = 0; i < m; ++i) {
    const double l = lambdas[static_cast<std::size_t>(i)];
    if (n > m) {
      if (l == 0.0) return 0.0;
      logd += (n - m) * std::log(l);
    }
    for (int j = i + 1; j < m; ++j) {
      const double diff = std::abs(l - lambdas[static_cast<std::size_t>(j)]);
      if (diff == 0.0) return 0.0;
      logd += 2.0 * std::log(diff);
    }
  }
  return std::exp(logd);
}

/// Two-sample Kolmogorov-Smirnov statistic sup |F1 - F2|.
inline double ks_statistic(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

/// Asymptotic two-sample KS critical value at significance 1%.
inline double ks_critical_1pct(std::size_t na, std::size_t nb) {
  const double a = static_cast<double>(na), b = static_cast<double>(nb);
  return 1.628 * std::sqrt((a + b) / (a * b));
}

}  // namespace entlab
