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

// Effective Hamiltonians on the error-string subspaces.

#ifndef QMEM_EFFHAM_HPP_
#define QMEM_EFFHAM_HPP_

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "qmem/errors.hpp"
#include "qmem/lattice.hpp"
#include "qmem/matrix.hpp"

namespace qmem {

/// Toric code, basis U_0|psi> .. U_{N-2}|psi>: diag 2*Delta + delta*B_l,
/// offdiag delta*J_l.
inline SymTridiag toric_effective(int N, double Delta, double delta, std::span<const double> J,
                                  std::span<const double> B) {
  detail::require(N >= 2, "toric_effective: N must be >= 2");
  const auto M = static_cast<std::size_t>(N - 1);
  detail::require(B.size() == M, "toric_effective: B must have N-1 entries");
  detail::require(J.size() == M - 1, "toric_effective: J must have N-2 entries");
  detail::require(delta >= 0, "toric_effective: delta must be non-negative");
  SymTridiag m;
  m.diag.resize(M);
  m.offdiag.resize(M - 1);
  for (std::size_t l = 0; l < M; ++l) m.diag[l] = 2 * Delta + delta * B[l];
  for (std::size_t l = 0; l + 1 < M; ++l) m.offdiag[l] = delta * J[l];
  return m;
}

/// Inverse of toric_effective: the (J, B) coefficients that realise `m`.
struct ToricCoefficients {
  std::vector<double> J;
  std::vector<double> B;
};

inline ToricCoefficients toric_coefficients(const SymTridiag &m, double Delta, double delta) {
  m.validate();
  detail::require(delta > 0, "toric_coefficients: delta must be positive");
  ToricCoefficients c;
  for (double d : m.diag) c.B.push_back((d - 2 * Delta) / delta);
  for (double e : m.offdiag) c.J.push_back(e / delta);
  return c;
}

/// Number of retained Ising error configurations, N(N-1) - 2.
inline std::size_t ising_chain_length(int N) {
  detail::require(N >= 3, "Ising chain needs N >= 3");
  return static_cast<std::size_t>(N * (N - 1) - 2);
}

/// The closed form as printed: (N+1) on the diagonal, delta hopping, and
/// -2(N-i) at positions i and M+1-i (1-based) for i = 1..N-1.
inline SymTridiag ising_effective_closed_form(int N, double delta) {
  const std::size_t M = ising_chain_length(N);
  SymTridiag m;
  m.diag.assign(M, N + 1.0);
  m.offdiag.assign(M - 1, delta);
  for (int i = 1; i <= N - 1; ++i) {
    m.diag[static_cast<std::size_t>(i - 1)] -= 2.0 * (N - i);
    m.diag[M - static_cast<std::size_t>(i)] -= 2.0 * (N - i);
  }
  return m;
}

/// Diagonal from broken-bond counting over the retained prefixes, plus
/// delta*J hopping and delta*B on the diagonal.
inline SymTridiag ising_effective_surface(int N, double delta, std::span<const double> J,
                                          std::span<const double> B) {
  const IsingLattice lat(N);
  const auto prefixes = ising_retained_prefixes(lat);
  const std::size_t M = prefixes.size();
  detail::require(J.size() == M - 1, "ising_effective_surface: J must have M-1 entries");
  detail::require(B.size() == M, "ising_effective_surface: B must have M entries");
  SymTridiag m;
  for (std::size_t k = 0; k < M; ++k) {
    Mask flipped(lat.n_qubits());
    for (std::size_t q = 0; q < prefixes[k]; ++q) flipped.set(q);
    m.diag.push_back(ising_excitation_energy(lat, flipped) + delta * B[k]);
  }
  for (std::size_t k = 0; k + 1 < M; ++k) m.offdiag.push_back(delta * J[k]);
  return m;
}

inline SymTridiag ising_effective_surface(int N, double delta) {
  const std::size_t M = ising_chain_length(N);
  const std::vector<double> J(M - 1, 1.0), B(M, 0.0);
  return ising_effective_surface(N, delta, J, B);
}

/// Surface-area diagonal plus bands 1..k. band_coeffs[d-1][i] is entry
/// (i+d, i) and must have M-d entries bounded by delta in magnitude.
inline BandedSym<double> banded_effective(int N, double delta, std::size_t k,
                                          const std::vector<std::vector<double>> &band_coeffs) {
  const SymTridiag surface = ising_effective_surface(N, 0.0);
  const std::size_t M = surface.size();
  detail::require(k >= 1, "banded_effective: k must be >= 1");
  detail::require(k < M, "banded_effective: band width must be < M");
  detail::require(band_coeffs.size() == k, "banded_effective: need one coefficient row per band");
  BandedSym<double> out(M, k);
  out.bands[0] = surface.diag;
  const double bound = delta * (1 + 1e-12);
  for (std::size_t d = 1; d <= k; ++d) {
    const auto &row = band_coeffs[d - 1];
    detail::require(row.size() == M - d, "banded_effective: band d must have M-d entries");
    for (std::size_t i = 0; i < row.size(); ++i) {
      detail::require(std::abs(row[i]) <= bound, "banded_effective: band entry exceeds delta");
      out.bands[d][i] = row[i];
    }
  }
  return out;
}

}  // namespace qmem

#endif
