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

// Toric-code and 2D Ising lattices: Hamiltonians, logical operators, error
// strings and the adversarial propagation perturbations, all as Pauli sums.

#ifndef QMEM_LATTICE_HPP_
#define QMEM_LATTICE_HPP_

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <utility>
#include <vector>

#include "qmem/errors.hpp"
#include "qmem/pauli.hpp"

namespace qmem {

// ---------------------------------------------------------------------------
// Toric code
// ---------------------------------------------------------------------------

/// 2N^2 qubits at (2i, 2j) and (2i+1, 2j+1), periodic with period 2N.
struct ToricLattice {
  int N = 2;
  double gap = 1.0;  ///< stabilizer energy scale Delta

  ToricLattice() = default;
  explicit ToricLattice(int n, double delta_gap = 1.0) : N(n), gap(delta_gap) {
    detail::require(n >= 2, "toric lattice needs N >= 2");
  }

  std::size_t n_qubits() const { return static_cast<std::size_t>(2 * N * N); }

  /// Flat index of the qubit at x-hat * x + z-hat * z. Sites are ordered
  /// lexicographically by (z, x), giving z * N + x / 2 after wrapping.
  std::size_t site(int x, int z) const {
    const int period = 2 * N;
    x = ((x % period) + period) % period;
    z = ((z % period) + period) % period;
    detail::require(((x + z) & 1) == 0, "toric lattice has no qubit at an odd-parity site");
    return static_cast<std::size_t>(z * N + x / 2);
  }

  /// Inverse of site().
  std::pair<int, int> coordinates(std::size_t q) const {
    detail::require(q < n_qubits(), "qubit index out of range");
    const int z = static_cast<int>(q) / N;
    const int x = 2 * (static_cast<int>(q) % N) + (z & 1);
    return {x, z};
  }

  PauliTerm op(char p, std::initializer_list<std::pair<int, int>> sites, Complex c = 1.0) const {
    PauliTerm t(n_qubits(), c);
    for (auto [x, z] : sites) t = multiply(t, PauliTerm::single(n_qubits(), site(x, z), p));
    return t;
  }

  /// Plaquette Z_{2i,2j} Z_{2i+1,2j+1} Z_{2i+2,2j} Z_{2i+1,2j-1}.
  PauliTerm plaquette(int i, int j) const {
    return op('Z', {{2 * i, 2 * j}, {2 * i + 1, 2 * j + 1}, {2 * i + 2, 2 * j}, {2 * i + 1, 2 * j - 1}});
  }

  /// Star X_{2i,2j} X_{2i+1,2j+1} X_{2i-1,2j+1} X_{2i,2j+2}.
  PauliTerm star(int i, int j) const {
    return op('X', {{2 * i, 2 * j}, {2 * i + 1, 2 * j + 1}, {2 * i - 1, 2 * j + 1}, {2 * i, 2 * j + 2}});
  }
};

/// All N^2 plaquettes followed by all N^2 stars, row-major in (i, j).
inline std::vector<PauliTerm> toric_stabilizers(const ToricLattice &lat) {
  std::vector<PauliTerm> out;
  for (int i = 0; i < lat.N; ++i)
    for (int j = 0; j < lat.N; ++j) out.push_back(lat.plaquette(i, j));
  for (int i = 0; i < lat.N; ++i)
    for (int j = 0; j < lat.N; ++j) out.push_back(lat.star(i, j));
  return out;
}

/// H = -(Delta/2) sum_{i,j} (Zbar_{i,j} + Xbar_{i,j}).
inline PauliSum toric_hamiltonian(const ToricLattice &lat) {
  std::vector<PauliTerm> terms;
  for (auto t : toric_stabilizers(lat)) {
    t.coeff = -lat.gap / 2;
    terms.push_back(std::move(t));
  }
  return PauliSum(lat.n_qubits(), std::move(terms));
}

/// Ground energy: every stabilizer at +1.
inline double toric_ground_energy(const ToricLattice &lat) { return -lat.gap * lat.N * lat.N; }

struct ToricLogicals {
  PauliTerm z_loop_1;  ///< prod_i Z_{2i+1, 1}
  PauliTerm z_loop_2;  ///< prod_j Z_{0, 2j}
  PauliTerm x_string;  ///< prod_i X_{2i, 0}
};

inline ToricLogicals toric_logicals(const ToricLattice &lat) {
  ToricLogicals l{PauliTerm(lat.n_qubits()), PauliTerm(lat.n_qubits()), PauliTerm(lat.n_qubits())};
  for (int i = 0; i < lat.N; ++i) {
    l.z_loop_1.set(lat.site(2 * i + 1, 1), 'Z');
    l.z_loop_2.set(lat.site(0, 2 * i), 'Z');
    l.x_string.set(lat.site(2 * i, 0), 'X');
  }
  return l;
}

/// U_l = prod_{i=0}^{l} X_{2i,0}.
inline PauliTerm toric_error_string(const ToricLattice &lat, int l) {
  detail::require(l >= 0 && l <= lat.N - 1, "error string index out of range");
  PauliTerm u(lat.n_qubits());
  for (int i = 0; i <= l; ++i) u.set(lat.site(2 * i, 0), 'X');
  return u;
}

/// Propagation perturbation on row 0:
///   (delta/2) sum_{i=0}^{N-3} J_i X_{2i+2,0} (1 - Zbar_{i,0} Zbar_{i+1,0})
/// + (delta/2) sum_{i=0}^{N-2} B_i (1 - Zbar_{i,0}).
/// On the error-string states U_l|psi> it acts as a tridiagonal matrix with
/// delta*J_l off the diagonal and delta*B_l on it.
inline PauliSum toric_perturbation(const ToricLattice &lat, std::span<const double> J,
                                   std::span<const double> B, double delta) {
  const auto N = static_cast<std::size_t>(lat.N);
  detail::require(N >= 3 || J.empty(), "toric perturbation: J needs N >= 3");
  detail::require(J.size() == (N >= 2 ? N - 2 : 0), "toric perturbation: J must have N-2 entries");
  detail::require(B.size() == N - 1, "toric perturbation: B must have N-1 entries");
  detail::require(delta > 0, "toric perturbation: delta must be positive");
  constexpr double slack = 1e-12;
  for (double v : J) detail::require(std::abs(v) <= 1 + slack, "toric perturbation: |J_i| must be <= 1");
  for (double v : B) detail::require(std::abs(v) <= 1 + slack, "toric perturbation: |B_i| must be <= 1");

  const std::size_t n = lat.n_qubits();
  const auto one = PauliTerm::identity(n);
  PauliSum out(n);
  for (std::size_t i = 0; i < J.size(); ++i) {
    if (J[i] == 0) continue;
    const int ii = static_cast<int>(i);
    PauliTerm hop = PauliTerm::single(n, lat.site(2 * ii + 2, 0), 'X');
    PauliTerm zz = multiply(lat.plaquette(ii, 0), lat.plaquette(ii + 1, 0));
    PauliSum h(n, {hop, Complex(-1.0) * multiply(hop, zz)});
    out += Complex(delta * J[i] / 2) * h;
  }
  for (std::size_t i = 0; i < B.size(); ++i) {
    if (B[i] == 0) continue;
    PauliSum h(n, {one, Complex(-1.0) * lat.plaquette(static_cast<int>(i), 0)});
    out += Complex(delta * B[i] / 2) * h;
  }
  return out;
}

enum class DualityCircuit {
  /// CNOT chain over i = 1..N-1; conjugates delta H exactly onto XX + YY.
  kExtended,
  /// CNOT chain over i = 1..N-2 as commonly printed; leaves a Z on (2N-2, 0).
  kAsPrinted,
};

/// Gates of the duality circuit V in application order: the chain
/// C^{(2i,0)}_{(2i-2,0)} for increasing i, then C^{(2i+1,+-1)}_{(2i,0)}.
inline std::vector<Cnot> duality_circuit(const ToricLattice &lat,
                                         DualityCircuit variant = DualityCircuit::kExtended) {
  std::vector<Cnot> gates;
  const int upper = variant == DualityCircuit::kExtended ? lat.N - 1 : lat.N - 2;
  for (int i = 1; i <= upper; ++i) gates.push_back({lat.site(2 * i, 0), lat.site(2 * i - 2, 0)});
  for (int i = 0; i <= lat.N - 2; ++i) {
    gates.push_back({lat.site(2 * i + 1, -1), lat.site(2 * i, 0)});
    gates.push_back({lat.site(2 * i + 1, 1), lat.site(2 * i, 0)});
  }
  return gates;
}

/// (delta/2) sum_i J_i (X_{2i,0} X_{2i+2,0} + Y_{2i,0} Y_{2i+2,0}).
inline PauliSum dual_chain_hamiltonian(const ToricLattice &lat, std::span<const double> J,
                                       double delta) {
  const std::size_t n = lat.n_qubits();
  PauliSum out(n);
  for (std::size_t i = 0; i < J.size(); ++i) {
    const int ii = static_cast<int>(i);
    const Complex c = delta * J[i] / 2;
    out += lat.op('X', {{2 * ii, 0}, {2 * ii + 2, 0}}, c);
    out += lat.op('Y', {{2 * ii, 0}, {2 * ii + 2, 0}}, c);
  }
  return out;
}

// ---------------------------------------------------------------------------
// 2D Ising model
// ---------------------------------------------------------------------------

/// N x N periodic vertex lattice. Qubit q is the q-th vertex of the
/// boustrophedon ("snake") order: even rows left to right, odd rows right to
/// left, so consecutive qubits are always lattice neighbours.
struct IsingLattice {
  int N = 2;

  IsingLattice() = default;
  explicit IsingLattice(int n) : N(n) { detail::require(n >= 2, "Ising lattice needs N >= 2"); }

  std::size_t n_qubits() const { return static_cast<std::size_t>(N * N); }

  /// (row, column) of snake label q.
  std::pair<int, int> vertex(std::size_t q) const {
    detail::require(q < n_qubits(), "qubit index out of range");
    const int r = static_cast<int>(q) / N;
    const int k = static_cast<int>(q) % N;
    return {r, (r & 1) ? N - 1 - k : k};
  }

  std::size_t qubit(int row, int col) const {
    row = ((row % N) + N) % N;
    col = ((col % N) + N) % N;
    return static_cast<std::size_t>(row * N + ((row & 1) ? N - 1 - col : col));
  }
};

/// Nearest-neighbour bonds, right and down from every vertex: always 2N^2
/// entries. At N = 2 each neighbouring pair appears twice (multigraph).
inline std::vector<std::pair<std::size_t, std::size_t>> ising_bonds(const IsingLattice &lat) {
  std::vector<std::pair<std::size_t, std::size_t>> bonds;
  for (int r = 0; r < lat.N; ++r) {
    for (int c = 0; c < lat.N; ++c) {
      bonds.emplace_back(lat.qubit(r, c), lat.qubit(r, c + 1));
      bonds.emplace_back(lat.qubit(r, c), lat.qubit(r + 1, c));
    }
  }
  return bonds;
}

/// H_I = -1/2 sum_<i,j> Z_i Z_j. Duplicate bonds merge in the canonical sum.
inline PauliSum ising_hamiltonian(const IsingLattice &lat) {
  const std::size_t n = lat.n_qubits();
  std::vector<PauliTerm> terms;
  for (auto [a, b] : ising_bonds(lat)) {
    PauliTerm t(n, -0.5);
    t.z.set(a);
    t.z.set(b);
    terms.push_back(std::move(t));
  }
  return PauliSum(n, std::move(terms));
}

/// Energy above the ground state of the basis state with `flipped` set:
/// the number of broken bonds.
inline int ising_excitation_energy(const IsingLattice &lat, const Mask &flipped) {
  int broken = 0;
  for (auto [a, b] : ising_bonds(lat)) broken += flipped.test(a) != flipped.test(b);
  return broken;
}

/// Product of X on the first `length` qubits in snake order.
inline PauliTerm ising_error_prefix(const IsingLattice &lat, std::size_t length) {
  detail::require(length >= 1 && length <= lat.n_qubits(), "prefix length out of range");
  PauliTerm t(lat.n_qubits());
  for (std::size_t q = 0; q < length; ++q) t.x.set(q);
  return t;
}

/// Prefix lengths of the M = N(N-1) - 2 retained error configurations.
/// Complete rows are skipped (the hop that would complete a row also starts
/// the next one), and the first and last plateau configurations (lengths
/// N+1 and N^2-N-1) are dropped so the plateau has (N-1)(N-2) - 2 members.
inline std::vector<std::size_t> ising_retained_prefixes(const IsingLattice &lat) {
  detail::require(lat.N >= 3, "retained prefix sequence needs N >= 3");
  const auto N = static_cast<std::size_t>(lat.N);
  std::vector<std::size_t> out;
  for (std::size_t l = 1; l < N * N; ++l) {
    if (l % N == 0 || l == N + 1 || l == N * N - N - 1) continue;
    out.push_back(l);
  }
  return out;
}

/// Revised perturbation for the Ising chain of retained prefixes p_0 < ... < p_{M-1}:
///   (delta/2) sum_k J_k X_{p_k .. p_{k+1}-1} (1 - Z_{p_k - 1} Z_{p_{k+1}})
/// + (delta/2) sum_k B_k (1 - Z_{p_k - 1} Z_{p_k})
/// (0-based qubits). When p_{k+1} = p_k + 1 the hop is J X_{i+1}(1 - Z_i Z_{i+2})
/// in 1-based labels.
inline PauliSum ising_perturbation(const IsingLattice &lat, std::span<const double> J,
                                   std::span<const double> B, double delta) {
  const auto prefixes = ising_retained_prefixes(lat);
  const std::size_t M = prefixes.size();
  detail::require(J.size() == M - 1, "Ising perturbation: J must have M-1 entries");
  detail::require(B.size() == M, "Ising perturbation: B must have M entries");
  detail::require(delta > 0, "Ising perturbation: delta must be positive");
  constexpr double slack = 1e-12;
  for (double v : J) detail::require(std::abs(v) <= 1 + slack, "Ising perturbation: |J_i| must be <= 1");
  for (double v : B) detail::require(std::abs(v) <= 1 + slack, "Ising perturbation: |B_i| must be <= 1");

  const std::size_t n = lat.n_qubits();
  const auto one = PauliTerm::identity(n);
  auto zz = [n](std::size_t a, std::size_t b) {
    PauliTerm t(n);
    t.z.set(a);
    t.z.set(b);
    return t;
  };
  PauliSum out(n);
  for (std::size_t k = 0; k + 1 < M; ++k) {
    if (J[k] == 0) continue;
    PauliTerm hop(n);
    for (std::size_t q = prefixes[k]; q < prefixes[k + 1]; ++q) hop.x.set(q);
    PauliSum h(n, {hop, Complex(-1.0) * multiply(hop, zz(prefixes[k] - 1, prefixes[k + 1]))});
    out += Complex(delta * J[k] / 2) * h;
  }
  for (std::size_t k = 0; k < M; ++k) {
    if (B[k] == 0) continue;
    PauliSum h(n, {one, Complex(-1.0) * zz(prefixes[k] - 1, prefixes[k])});
    out += Complex(delta * B[k] / 2) * h;
  }
  return out;
}

}  // namespace qmem

#endif
