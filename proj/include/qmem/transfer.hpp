// Copyright 2026 The qmem Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// End-to-end transfer on a chain: F(t) = |<M| exp(-iHt) |1>|.

#ifndef QMEM_TRANSFER_HPP_
#define QMEM_TRANSFER_HPP_

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <optional>
#include <utility>
#include <vector>

#include "qmem/errors.hpp"
#include "qmem/spectral.hpp"

namespace qmem {

/// J_i = (2/(N-1)) sqrt((i+1)(N-2-i)), i = 0..N-3.
inline std::vector<double> christandl_couplings(int N) {
  detail::require(N >= 3, "christandl_couplings: N must be >= 3");
  std::vector<double> J(static_cast<std::size_t>(N - 2));
  for (int i = 0; i < N - 2; ++i) J[static_cast<std::size_t>(i)] = 2.0 / (N - 1) * std::sqrt((i + 1.0) * (N - 2.0 - i));
  return J;
}

inline double fidelity(const SpectralData &s, double t) {
  detail::require(t >= 0, "fidelity: t must be non-negative");
  std::complex<double> sum = 0;
  for (std::size_t i = 0; i < s.size(); ++i) sum += std::polar(s.amplitudes[i], -s.eigenvalues[i] * t);
  return std::abs(sum);
}

/// Upper bound sum_i |a_i| on F(t).
inline double f_max(const SpectralData &s) {
  double total = 0;
  for (double a : s.amplitudes) total += std::abs(a);
  return total;
}

inline double spectral_width(const SpectralData &s) {
  return s.size() ? s.eigenvalues.back() - s.eigenvalues.front() : 0.0;
}

/// Golden-section search for a local maximum of F on [lo, hi].
inline std::pair<double, double> maximize_fidelity(const SpectralData &s, double lo, double hi) {
  detail::require(0 <= lo && lo <= hi, "maximize_fidelity: need 0 <= lo <= hi");
  const double r = (std::sqrt(5.0) - 1) / 2;
  double a = lo, b = hi;
  double c = b - r * (b - a), d = a + r * (b - a);
  double fc = fidelity(s, c), fd = fidelity(s, d);
  for (int iter = 0; iter < 200 && b - a > 1e-15 * std::max(1.0, b); ++iter) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - r * (b - a);
      fc = fidelity(s, c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + r * (b - a);
      fd = fidelity(s, d);
    }
  }
  double best_t = fc >= fd ? c : d;
  double best_f = std::max(fc, fd);
  for (double t : {lo, hi}) {
    const double f = fidelity(s, t);
    if (f > best_f) best_f = f, best_t = t;
  }
  return {best_t, best_f};
}

struct TransferResult {
  std::vector<double> times;
  std::vector<double> fidelities;
  double f_max = 0;
  std::optional<double> transfer_time;  ///< empty when the threshold is never reached
  double min_gap = 0;                   ///< 0 for a single level
  double peak_time = 0;                 ///< refined location of the largest sampled peak
  double peak_fidelity = 0;

  bool reached() const { return transfer_time.has_value(); }
};

/// Samples F on [0, t_max] with step <= pi / (4 * spectral width), refining
/// every sampled local maximum, and returns the first time F >= threshold.
inline TransferResult measure_transfer_time(const SpectralData &s, double threshold, double t_max) {
  detail::require(threshold >= 0, "measure_transfer_time: threshold must be >= 0");
  detail::require(threshold <= 1, "measure_transfer_time: threshold must be <= 1");
  detail::require(t_max > 0, "measure_transfer_time: t_max must be positive");
  TransferResult r;
  r.f_max = f_max(s);
  r.min_gap = s.size() >= 2 ? min_gap(s) : 0.0;

  const double width = spectral_width(s);
  const double step_cap = width > 0 ? std::numbers::pi / (4 * width) : t_max;
  const auto steps = static_cast<std::size_t>(std::ceil(t_max / step_cap));
  const double dt = t_max / static_cast<double>(std::max<std::size_t>(steps, 1));
  for (std::size_t k = 0; k <= steps; ++k) {
    const double t = std::min(t_max, dt * static_cast<double>(k));
    r.times.push_back(t);
    r.fidelities.push_back(fidelity(s, t));
  }

  auto crossing = [&](double lo, double hi) {
    // F(lo) < threshold <= F(hi).
    for (int iter = 0; iter < 200 && hi - lo > 1e-14 * std::max(1.0, hi); ++iter) {
      const double mid = (lo + hi) / 2;
      (fidelity(s, mid) >= threshold ? hi : lo) = mid;
    }
    return hi;
  };

  const auto &F = r.fidelities;
  const auto &T = r.times;
  if (F[0] >= threshold) r.transfer_time = 0.0;
  for (std::size_t k = 1; k < F.size(); ++k) {
    if (!r.reached() && F[k] >= threshold) r.transfer_time = crossing(T[k - 1], T[k]);
    const bool peak = F[k] >= F[k - 1] && (k + 1 == F.size() || F[k] >= F[k + 1]);
    if (!peak) continue;
    const double hi = k + 1 < F.size() ? T[k + 1] : T[k];
    auto [tp, fp] = maximize_fidelity(s, T[k - 1], hi);
    if (fp > r.peak_fidelity) r.peak_fidelity = fp, r.peak_time = tp;
    if (!r.reached() && fp >= threshold && F[k - 1] < threshold) r.transfer_time = crossing(T[k - 1], tp);
  }
  if (F[0] > r.peak_fidelity) r.peak_fidelity = F[0], r.peak_time = 0;
  return r;
}

}  // namespace qmem

#endif
