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

// Spectral retuning for exact transfer at a chosen time, and Jacobi matrix
// reconstruction from eigenvalues and first-component weights.

#ifndef QMEM_IEP_HPP_
#define QMEM_IEP_HPP_

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <sstream>
#include <vector>

#include "qmem/errors.hpp"
#include "qmem/matrix.hpp"
#include "qmem/spectral.hpp"

namespace qmem {

struct RetunePlan {
  double t = 0;
  double theta = 0;  ///< in (-pi, pi]
  std::vector<double> original;
  std::vector<double> retuned;
  std::vector<double> shifts;  ///< retuned - original
};

inline constexpr double kRetuneMinTimeFactor = 10.0;

/// Moves each eigenvalue by at most pi/t so that
///   exp(-i lambda~_i t) = exp(i theta) sign(a_i)
/// for a common theta. The grid is anchored at lambda_1, which is kept.
inline RetunePlan retune_eigenvalues(const SpectralData &s, double t,
                                     double min_time_factor = kRetuneMinTimeFactor) {
  const std::size_t M = s.size();
  detail::require(M >= 1, "retune_eigenvalues: empty spectrum");
  detail::require(t > 0, "retune_eigenvalues: t must be positive");
  if (M >= 2) {
    const double bound = min_time_factor * std::numbers::pi / min_gap(s);
    if (t < bound) {
      std::ostringstream msg;
      msg << "retune_eigenvalues: t = " << t << " is below " << min_time_factor << "*pi/min_gap = " << bound;
      throw UsageError(msg.str());
    }
  }
  for (std::size_t i = 0; i < M; ++i) {
    if (s.amplitudes[i] == 0.0) {
      std::ostringstream msg;
      msg << "retune_eigenvalues: amplitude a_" << i << " is zero, its sign is undefined";
      throw UsageError(msg.str());
    }
  }

  const double grid = std::numbers::pi / t;
  RetunePlan p;
  p.t = t;
  p.original = s.eigenvalues;
  p.retuned.resize(M);
  p.shifts.resize(M);
  const double lambda1 = s.eigenvalues[0];
  const bool neg1 = s.amplitudes[0] < 0;
  p.theta = std::remainder(-lambda1 * t + (neg1 ? std::numbers::pi : 0.0), 2 * std::numbers::pi);
  p.retuned[0] = lambda1;
  for (std::size_t i = 1; i < M; ++i) {
    // Level i sits an even number of grid steps above level 1 iff the
    // amplitude signs agree.
    const long parity = (s.amplitudes[i] < 0) != neg1 ? 1 : 0;
    const double x = (s.eigenvalues[i] - lambda1) / grid;
    long n = static_cast<long>(std::floor(x));
    if (((n % 2) + 2) % 2 != parity) ++n;
    p.retuned[i] = lambda1 + static_cast<double>(n) * grid;
  }
  for (std::size_t i = 0; i < M; ++i) p.shifts[i] = p.retuned[i] - p.original[i];
  for (std::size_t i = 1; i < M; ++i) {
    if (!(p.retuned[i] > p.retuned[i - 1]))
      throw NumericalError("retune_eigenvalues: retuned spectrum lost its ordering");
  }
  return p;
}

/// Jacobi matrix with spectrum `eigenvalues` and squared first eigenvector
/// components `weights`, by Lanczos on diag(eigenvalues) started from
/// sqrt(weights) with full reorthogonalisation. Off-diagonals are positive.
inline SymTridiag reconstruct_jacobi(const std::vector<double> &eigenvalues, const std::vector<double> &weights) {
  const std::size_t M = eigenvalues.size();
  detail::require(M >= 1, "reconstruct_jacobi: empty spectrum");
  detail::require(weights.size() == M, "reconstruct_jacobi: need one weight per eigenvalue");
  for (std::size_t i = 1; i < M; ++i)
    detail::require(eigenvalues[i] > eigenvalues[i - 1], "reconstruct_jacobi: eigenvalues must be strictly ascending");
  double total = 0;
  for (double w : weights) {
    detail::require(w > 0, "reconstruct_jacobi: weights must be positive");
    total += w;
  }
  detail::require(std::abs(total - 1) <= 1e-8, "reconstruct_jacobi: weights must sum to 1");

  double scale = 0;
  for (double l : eigenvalues) scale = std::max(scale, std::abs(l));
  scale = std::max(scale, 1e-300);

  std::vector<std::vector<double>> q;
  q.emplace_back(M);
  for (std::size_t i = 0; i < M; ++i) q[0][i] = std::sqrt(weights[i] / total);

  SymTridiag out;
  out.diag.resize(M);
  out.offdiag.resize(M - 1);
  std::vector<double> r(M);
  for (std::size_t k = 0; k < M; ++k) {
    const auto &qk = q[k];
    double alpha = 0;
    for (std::size_t i = 0; i < M; ++i) alpha += eigenvalues[i] * qk[i] * qk[i];
    out.diag[k] = alpha;
    if (k + 1 == M) break;
    for (std::size_t i = 0; i < M; ++i) r[i] = eigenvalues[i] * qk[i];
    // Twice is enough.
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto &qj : q) {
        double h = 0;
        for (std::size_t i = 0; i < M; ++i) h += qj[i] * r[i];
        for (std::size_t i = 0; i < M; ++i) r[i] -= h * qj[i];
      }
    }
    double beta = 0;
    for (double v : r) beta += v * v;
    beta = std::sqrt(beta);
    if (beta <= 1e-14 * scale) {
      std::ostringstream msg;
      msg << "reconstruct_jacobi: recurrence broke down at step " << k << " (norm " << beta << ", scale " << scale
          << ")";
      throw NumericalError(msg.str());
    }
    out.offdiag[k] = beta;
    q.emplace_back(M);
    for (std::size_t i = 0; i < M; ++i) q.back()[i] = r[i] / beta;
  }
  return out;
}

/// Squared first components of the persymmetric Jacobi matrix with the
/// given spectrum: w_i proportional to 1 / prod_{j != i} |lambda_i - lambda_j|.
inline std::vector<double> persymmetric_weights(const std::vector<double> &eigenvalues) {
  const std::size_t M = eigenvalues.size();
  detail::require(M >= 1, "persymmetric_weights: empty spectrum");
  std::vector<double> logw(M, 0.0);
  for (std::size_t i = 0; i < M; ++i) {
    for (std::size_t j = 0; j < M; ++j) {
      if (i == j) continue;
      const double d = std::abs(eigenvalues[i] - eigenvalues[j]);
      detail::require(d > 0, "persymmetric_weights: eigenvalues must be distinct");
      logw[i] -= std::log(d);
    }
  }
  const double top = *std::max_element(logw.begin(), logw.end());
  std::vector<double> w(M);
  double total = 0;
  for (std::size_t i = 0; i < M; ++i) total += w[i] = std::exp(logw[i] - top);
  for (auto &v : w) v /= total;
  return w;
}

/// max_i |exp(-i (l~_i - l~_1) t) - sign(a_i) sign(a_1)|, the retuning
/// condition with the common phase divided out. Differences are used so the
/// check is not swamped by rounding in lambda * t when t is large.
inline double phase_condition_residual(const RetunePlan &p, const std::vector<double> &amplitudes) {
  detail::require(amplitudes.size() == p.retuned.size(), "phase_condition_residual: size mismatch");
  double worst = 0;
  for (std::size_t i = 0; i < p.retuned.size(); ++i) {
    const double want = (amplitudes[i] < 0) == (amplitudes[0] < 0) ? 1.0 : -1.0;
    const std::complex<double> got = std::polar(1.0, -(p.retuned[i] - p.retuned[0]) * p.t);
    worst = std::max(worst, std::abs(got - want));
  }
  return worst;
}

struct RetunedChain {
  SymTridiag chain;
  RetunePlan plan;
  double max_coupling_shift = 0;  ///< max_i |J~_i - J_i| over the off-diagonal
  double max_diagonal_shift = 0;
};

/// Retunes a persymmetric chain for perfect transfer at time t. The new
/// chain is the persymmetric Jacobi matrix of the retuned spectrum, with the
/// signs of the original couplings restored.
inline RetunedChain retune_chain(const SymTridiag &m, double t, double min_time_factor = kRetuneMinTimeFactor) {
  m.validate();
  const double tol = 1e-12 * std::max(1.0, m.norm());
  detail::require(m.is_persymmetric(tol),
                  "retune_chain: input must be persymmetric; use retune_eigenvalues and reconstruct_jacobi with "
                  "explicit weights otherwise");
  for (double e : m.offdiag) detail::require(e != 0.0, "retune_chain: couplings must be nonzero");

  RetunedChain out;
  out.plan = retune_eigenvalues(eigh_tridiag(m), t, min_time_factor);
  out.chain = reconstruct_jacobi(out.plan.retuned, persymmetric_weights(out.plan.retuned));
  for (std::size_t i = 0; i < m.offdiag.size(); ++i) {
    if (m.offdiag[i] < 0) out.chain.offdiag[i] = -out.chain.offdiag[i];
    out.max_coupling_shift = std::max(out.max_coupling_shift, std::abs(out.chain.offdiag[i] - m.offdiag[i]));
  }
  for (std::size_t i = 0; i < m.size(); ++i)
    out.max_diagonal_shift = std::max(out.max_diagonal_shift, std::abs(out.chain.diag[i] - m.diag[i]));
  return out;
}

}  // namespace qmem

#endif
