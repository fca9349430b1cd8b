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

// Dense statevector checks on small lattices (at most 20 qubits).

#ifndef QMEM_ORACLE_HPP_
#define QMEM_ORACLE_HPP_

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "qmem/errors.hpp"
#include "qmem/lattice.hpp"
#include "qmem/matrix.hpp"
#include "qmem/pauli.hpp"
#include "qmem/spectral.hpp"

namespace qmem {

inline constexpr std::size_t kMaxDenseQubits = 20;

struct DenseState {
  std::size_t n_qubits = 0;
  std::vector<Complex> amplitudes;

  DenseState() = default;
  /// Computational basis state |basis>.
  explicit DenseState(std::size_t n, std::uint64_t basis = 0) : n_qubits(n) {
    detail::require(n <= kMaxDenseQubits, "DenseState: at most 20 qubits");
    amplitudes.assign(std::size_t{1} << n, Complex{});
    detail::require(basis < amplitudes.size(), "DenseState: basis index out of range");
    amplitudes[basis] = 1.0;
  }

  std::size_t dim() const { return amplitudes.size(); }

  double norm() const {
    double s = 0;
    for (const auto &a : amplitudes) s += std::norm(a);
    return std::sqrt(s);
  }

  void normalize() {
    const double n = norm();
    if (n == 0) throw NumericalError("DenseState: cannot normalise the zero vector");
    for (auto &a : amplitudes) a /= n;
  }
};

/// <a|b>.
inline Complex inner(const DenseState &a, const DenseState &b) {
  detail::require(a.n_qubits == b.n_qubits, "inner: qubit count mismatch");
  Complex s = 0;
  for (std::size_t i = 0; i < a.dim(); ++i) s += std::conj(a.amplitudes[i]) * b.amplitudes[i];
  return s;
}

inline DenseState apply_term(const PauliTerm &p, const DenseState &v) {
  detail::require(p.n_qubits == v.n_qubits, "apply_term: qubit count mismatch");
  DenseState out;
  out.n_qubits = v.n_qubits;
  out.amplitudes = apply_to_state(p, v.amplitudes);
  return out;
}

/// h|v>, term by term; the result is not normalised.
inline DenseState apply_hamiltonian(const PauliSum &h, const DenseState &v) {
  detail::require(h.n_qubits() == v.n_qubits, "apply_hamiltonian: qubit count mismatch");
  DenseState out;
  out.n_qubits = v.n_qubits;
  out.amplitudes.assign(v.dim(), Complex{});
  for (const auto &t : h.terms()) {
    const std::uint64_t xm = t.x.low_word();
    const std::uint64_t zm = t.z.low_word();
    const Complex c = detail::times_i_power(t.coeff, std::popcount(xm & zm));
    for (std::uint64_t b = 0; b < v.dim(); ++b) {
      const Complex a = v.amplitudes[b];
      if (a == Complex{}) continue;
      out.amplitudes[b ^ xm] += (std::popcount(zm & b) & 1) ? -c * a : c * a;
    }
  }
  return out;
}

inline double expectation(const PauliSum &h, const DenseState &v) { return inner(v, apply_hamiltonian(h, v)).real(); }

inline double expectation(const PauliTerm &p, const DenseState &v) { return inner(v, apply_term(p, v)).real(); }

/// Applies the CNOT gates in order.
inline DenseState apply_circuit(std::span<const Cnot> gates, DenseState v) {
  for (const auto &g : gates) {
    detail::require(g.control < v.n_qubits && g.target < v.n_qubits && g.control != g.target,
                    "apply_circuit: bad gate");
    const std::uint64_t cb = std::uint64_t{1} << g.control, tb = std::uint64_t{1} << g.target;
    for (std::uint64_t b = 0; b < v.dim(); ++b) {
      if ((b & cb) && !(b & tb)) std::swap(v.amplitudes[b], v.amplitudes[b | tb]);
    }
  }
  return v;
}

/// Dense real matrix of a Hamiltonian whose matrix elements are real.
inline Matrix<double> dense_real_matrix(const PauliSum &h) {
  detail::require(h.n_qubits() <= 12, "dense_real_matrix: at most 12 qubits");
  const std::size_t dim = std::size_t{1} << h.n_qubits();
  Matrix<double> a(dim, dim);
  for (const auto &t : h.terms()) {
    const std::uint64_t xm = t.x.low_word();
    const std::uint64_t zm = t.z.low_word();
    const Complex c = detail::times_i_power(t.coeff, std::popcount(xm & zm));
    detail::require(std::abs(c.imag()) == 0.0, "dense_real_matrix: Hamiltonian has complex matrix elements");
    for (std::uint64_t b = 0; b < dim; ++b) a(b ^ xm, b) += (std::popcount(zm & b) & 1) ? -c.real() : c.real();
  }
  return a;
}

/// Toric ground state with all stabilizers and both logical Z loops at +1:
/// prod (1 + Xbar)/2 applied to |0...0>.
inline DenseState toric_ground_state(const ToricLattice &lat) {
  detail::require(lat.n_qubits() <= kMaxDenseQubits, "toric_ground_state: lattice too large for a dense state");
  DenseState v(lat.n_qubits());
  for (int i = 0; i < lat.N; ++i) {
    for (int j = 0; j < lat.N; ++j) {
      const DenseState xv = apply_term(lat.star(i, j), v);
      for (std::size_t b = 0; b < v.dim(); ++b) v.amplitudes[b] = 0.5 * (v.amplitudes[b] + xv.amplitudes[b]);
    }
  }
  v.normalize();
  return v;
}

/// Lowest eigenvalue by plain Lanczos from a seeded random start.
inline double lanczos_ground_energy(const PauliSum &h, int max_iterations = 300, double tol = 1e-12,
                                    unsigned seed = 7) {
  const std::size_t n = h.n_qubits();
  detail::require(n <= kMaxDenseQubits, "lanczos_ground_energy: too many qubits");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  DenseState q(n);
  for (auto &a : q.amplitudes) a = gauss(rng);
  q.normalize();
  DenseState prev(n);
  std::fill(prev.amplitudes.begin(), prev.amplitudes.end(), Complex{});
  std::vector<double> alpha, beta;
  double last = std::numeric_limits<double>::infinity();
  for (int k = 0; k < max_iterations; ++k) {
    DenseState w = apply_hamiltonian(h, q);
    const double a = inner(q, w).real();
    alpha.push_back(a);
    const double b_prev = beta.empty() ? 0.0 : beta.back();
    for (std::size_t i = 0; i < w.dim(); ++i) w.amplitudes[i] -= a * q.amplitudes[i] + b_prev * prev.amplitudes[i];
    const double b = w.norm();
    SymTridiag t(alpha, beta);
    const double lowest = eigh_tridiag(t).eigenvalues.front();
    if (b < 1e-12 || std::abs(lowest - last) <= tol * std::max(1.0, std::abs(lowest))) return lowest;
    last = lowest;
    beta.push_back(b);
    prev = std::move(q);
    for (auto &x : w.amplitudes) x /= b;
    q = std::move(w);
  }
  throw NumericalError("lanczos_ground_energy: no convergence");
}

struct KrylovStats {
  int steps = 0;
  int matvecs = 0;
  double norm_drift = 0;  ///< largest |1 - norm| removed by renormalisation
};

/// exp(-i h t)|v> by short Lanczos iterates with step splitting. The local
/// error estimate beta_m |[exp(-i T dt) e_1]_m| is kept below tol * dt / t.
inline DenseState krylov_propagate(const PauliSum &h, DenseState v, double t, double tol = 1e-10,
                                   int krylov_dim = 24, KrylovStats *stats = nullptr, int max_steps = 100000) {
  detail::require(t >= 0, "krylov_propagate: t must be non-negative");
  detail::require(tol > 0, "krylov_propagate: tol must be positive");
  detail::require(h.n_qubits() == v.n_qubits, "krylov_propagate: qubit count mismatch");
  KrylovStats local;
  KrylovStats &st = stats ? *stats : local;
  const double scale = std::max(1.0, h.coefficient_norm());
  double done = 0;
  while (done < t) {
    if (st.steps++ >= max_steps) throw NumericalError("krylov_propagate: step cap exceeded");
    const double vn = v.norm();
    std::vector<DenseState> basis;
    basis.push_back(v);
    for (auto &a : basis[0].amplitudes) a /= vn;
    std::vector<double> alpha, beta;
    double residual = 0;
    bool breakdown = false;
    for (int k = 0; k < krylov_dim; ++k) {
      DenseState w = apply_hamiltonian(h, basis[static_cast<std::size_t>(k)]);
      ++st.matvecs;
      for (int pass = 0; pass < 2; ++pass) {
        for (const auto &q : basis) {
          const Complex c = inner(q, w);
          for (std::size_t i = 0; i < w.dim(); ++i) w.amplitudes[i] -= c * q.amplitudes[i];
          if (pass == 0 && &q == &basis.back()) alpha.push_back(c.real());
        }
      }
      const double b = w.norm();
      if (b <= 1e-13 * scale) {
        breakdown = true;
        break;
      }
      if (k + 1 == krylov_dim) {
        residual = b;
        break;
      }
      beta.push_back(b);
      for (auto &a : w.amplitudes) a /= b;
      basis.push_back(std::move(w));
    }
    const std::size_t m = alpha.size();
    const auto es = tridiag_eigensystem(SymTridiag(alpha, std::vector<double>(beta.begin(), beta.begin() + (m - 1))));
    auto small_exp = [&](double dt) {
      std::vector<Complex> y(m, Complex{});
      for (std::size_t j = 0; j < m; ++j) {
        const Complex phase = std::polar(es.vectors(0, j), -es.values[j] * dt);
        for (std::size_t r = 0; r < m; ++r) y[r] += es.vectors(r, j) * phase;
      }
      return y;
    };
    double dt = t - done;
    std::vector<Complex> y = small_exp(dt);
    if (!breakdown) {
      while (residual * std::abs(y[m - 1]) > tol * dt / t) {
        dt /= 2;
        if (dt < 1e-300) throw NumericalError("krylov_propagate: step size underflow");
        y = small_exp(dt);
      }
    }
    DenseState next(v.n_qubits);
    std::fill(next.amplitudes.begin(), next.amplitudes.end(), Complex{});
    for (std::size_t r = 0; r < m; ++r) {
      const Complex c = y[r] * vn;
      for (std::size_t i = 0; i < next.dim(); ++i) next.amplitudes[i] += c * basis[r].amplitudes[i];
    }
    const double nn = next.norm();
    st.norm_drift = std::max(st.norm_drift, std::abs(nn - vn));
    for (auto &a : next.amplitudes) a *= vn / nn;
    v = std::move(next);
    done = (t - done == dt) ? t : done + dt;
  }
  return v;
}

struct Projection {
  std::vector<Complex> coefficients;
  double leakage_norm = 0;
};

/// Overlaps with an orthonormal set and the norm of what lies outside it.
inline Projection subspace_projection(std::span<const DenseState> states, const DenseState &v) {
  for (std::size_t i = 0; i < states.size(); ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      const Complex g = inner(states[i], states[j]);
      const double expect = i == j ? 1.0 : 0.0;
      detail::require(std::abs(g - expect) <= 1e-10, "subspace_projection: basis is not orthonormal");
    }
  }
  Projection p;
  DenseState rest = v;
  for (const auto &s : states) {
    const Complex c = inner(s, v);
    p.coefficients.push_back(c);
    for (std::size_t i = 0; i < rest.dim(); ++i) rest.amplitudes[i] -= c * s.amplitudes[i];
  }
  p.leakage_norm = rest.norm();
  return p;
}

/// U_l|psi> for l = 0..N-2.
inline std::vector<DenseState> toric_string_basis(const ToricLattice &lat, const DenseState &ground) {
  std::vector<DenseState> out;
  for (int l = 0; l <= lat.N - 2; ++l) out.push_back(apply_term(toric_error_string(lat, l), ground));
  return out;
}

/// Re <b_i| h |b_j> - shift * delta_ij.
inline Matrix<double> subspace_matrix(const PauliSum &h, std::span<const DenseState> basis, double shift = 0) {
  Matrix<double> m(basis.size(), basis.size());
  for (std::size_t j = 0; j < basis.size(); ++j) {
    const DenseState hb = apply_hamiltonian(h, basis[j]);
    for (std::size_t i = 0; i < basis.size(); ++i) m(i, j) = inner(basis[i], hb).real() - (i == j ? shift : 0.0);
  }
  return m;
}

/// max_j of the norm of h|b_j> outside span{b}.
inline double subspace_leakage(const PauliSum &h, std::span<const DenseState> basis) {
  double worst = 0;
  for (const auto &b : basis) worst = std::max(worst, subspace_projection(basis, apply_hamiltonian(h, b)).leakage_norm);
  return worst;
}

/// Basis state with the first `length` snake-order qubits flipped.
inline DenseState ising_prefix_state(const IsingLattice &lat, std::size_t length) {
  detail::require(length <= lat.n_qubits() && length < 64, "ising_prefix_state: length out of range");
  return DenseState(lat.n_qubits(), (std::uint64_t{1} << length) - 1);
}

inline std::vector<DenseState> ising_prefix_basis(const IsingLattice &lat) {
  std::vector<DenseState> out;
  for (auto l : ising_retained_prefixes(lat)) out.push_back(ising_prefix_state(lat, l));
  return out;
}

struct DualityReport {
  bool exact = false;
  std::size_t conjugated_terms = 0;
  std::size_t expected_terms = 0;
  double max_coefficient_error = 0;
  std::vector<std::string> mismatches;  ///< "<pauli string>: got c1, expected c2"
};

/// Conjugates a hopping-only toric perturbation by the duality circuit and
/// compares it with the XX + YY chain carrying the same coefficients.
inline DualityReport verify_duality_map(const ToricLattice &lat, const PauliSum &delta_h,
                                        DualityCircuit variant = DualityCircuit::kExtended) {
  const std::size_t n = lat.n_qubits();
  detail::require(delta_h.n_qubits() == n, "verify_duality_map: qubit count mismatch");
  // The B terms are the only source of an identity component.
  for (const auto &t : delta_h.terms())
    detail::require(!t.is_identity(), "verify_duality_map: perturbation has B terms; only hopping is mapped");

  // (delta/2) J_i is the coefficient of the bare X_{2i+2,0}.
  std::vector<double> half_couplings;
  for (int i = 0; i + 2 < lat.N; ++i) {
    const PauliTerm x = PauliTerm::single(n, lat.site(2 * i + 2, 0), 'X');
    double c = 0;
    for (const auto &t : delta_h.terms())
      if (t.same_string(x)) c = t.coeff.real();
    half_couplings.push_back(c);
  }
  PauliSum expected(n);
  for (std::size_t i = 0; i < half_couplings.size(); ++i) {
    const int ii = static_cast<int>(i);
    expected += lat.op('X', {{2 * ii, 0}, {2 * ii + 2, 0}}, half_couplings[i]);
    expected += lat.op('Y', {{2 * ii, 0}, {2 * ii + 2, 0}}, half_couplings[i]);
  }

  const auto gates = duality_circuit(lat, variant);
  std::vector<PauliTerm> mapped;
  for (const auto &t : delta_h.terms()) mapped.push_back(conjugate_by_circuit(t, gates));
  const PauliSum got(n, std::move(mapped));

  DualityReport r;
  r.conjugated_terms = got.size();
  r.expected_terms = expected.size();
  auto describe = [](const PauliTerm &t, Complex a, Complex b) {
    std::ostringstream s;
    s << t.to_string() << ": got " << a << ", expected " << b;
    return s.str();
  };
  for (const auto &t : got.terms()) {
    Complex want = 0;
    for (const auto &e : expected.terms())
      if (e.same_string(t)) want = e.coeff;
    const double err = std::abs(t.coeff - want);
    r.max_coefficient_error = std::max(r.max_coefficient_error, err);
    if (err != 0.0) r.mismatches.push_back(describe(t, t.coeff, want));
  }
  for (const auto &e : expected.terms()) {
    bool found = false;
    for (const auto &t : got.terms()) found = found || t.same_string(e);
    if (!found) {
      r.max_coefficient_error = std::max(r.max_coefficient_error, std::abs(e.coeff));
      r.mismatches.push_back(describe(e, 0.0, e.coeff));
    }
  }
  r.exact = r.mismatches.empty();
  return r;
}

/// <(1 - Z_{2k,0})/2> for k = 0..N-2, the sites of the dual hopping chain.
inline std::vector<double> chain_occupations(const ToricLattice &lat, const DenseState &v) {
  std::vector<double> occ;
  for (int k = 0; k <= lat.N - 2; ++k) {
    const PauliTerm z = PauliTerm::single(lat.n_qubits(), lat.site(2 * k, 0), 'Z');
    occ.push_back((1.0 - expectation(z, v)) / 2);
  }
  return occ;
}

/// |<psi| (U_{N-i-1} U_{N-i-2})^dag exp(-i h t) U_i U_{i-1} |psi>|^2 for the
/// full Hamiltonian h = H + delta H.
inline double two_excitation_transfer(const ToricLattice &lat, const PauliSum &h, const DenseState &ground, int i,
                                      double t, double tol = 1e-10) {
  detail::require(i > 0 && i <= lat.N - 2, "two_excitation_transfer: need 0 < i <= N-2");
  const auto pair = [&](int a) { return multiply(toric_error_string(lat, a), toric_error_string(lat, a - 1)); };
  const DenseState start = apply_term(pair(i), ground);
  const DenseState target = apply_term(pair(lat.N - i - 1), ground);
  const DenseState evolved = krylov_propagate(h, start, t, tol);
  return std::norm(inner(target, evolved));
}

}  // namespace qmem

#endif
