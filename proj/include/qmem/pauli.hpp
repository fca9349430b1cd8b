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

#ifndef QMEM_PAULI_HPP_
#define QMEM_PAULI_HPP_

#include <algorithm>
#include <bit>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include "qmem/errors.hpp"

namespace qmem {

using Complex = std::complex<double>;

/// Fixed-length bit set over n qubits, packed into 64-bit words.
class Mask {
 public:
  Mask() = default;
  explicit Mask(std::size_t n) : n_(n), words_((n + 63) / 64, 0) {}

  std::size_t size() const { return n_; }

  bool test(std::size_t q) const { return (words_[q / 64] >> (q % 64)) & 1u; }
  void set(std::size_t q, bool v = true) {
    std::uint64_t bit = std::uint64_t{1} << (q % 64);
    if (v) {
      words_[q / 64] |= bit;
    } else {
      words_[q / 64] &= ~bit;
    }
  }
  void flip(std::size_t q) { words_[q / 64] ^= std::uint64_t{1} << (q % 64); }

  std::size_t popcount() const {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }
  bool any() const {
    return std::any_of(words_.begin(), words_.end(), [](auto w) { return w != 0; });
  }

  /// Low 64 bits; only meaningful for n <= 64 (dense statevector work).
  std::uint64_t low_word() const { return words_.empty() ? 0 : words_[0]; }

  std::vector<std::size_t> indices() const {
    std::vector<std::size_t> out;
    for (std::size_t q = 0; q < n_; ++q) {
      if (test(q)) out.push_back(q);
    }
    return out;
  }

  Mask &operator^=(const Mask &o) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] ^= o.words_[i];
    return *this;
  }
  Mask &operator&=(const Mask &o) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
    return *this;
  }
  Mask &operator|=(const Mask &o) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
    return *this;
  }
  friend Mask operator^(Mask a, const Mask &b) { return a ^= b; }
  friend Mask operator&(Mask a, const Mask &b) { return a &= b; }
  friend Mask operator|(Mask a, const Mask &b) { return a |= b; }

  friend bool operator==(const Mask &, const Mask &) = default;
  friend auto operator<=>(const Mask &a, const Mask &b) {
    return std::tie(a.n_, a.words_) <=> std::tie(b.n_, b.words_);
  }

 private:
  std::size_t n_ = 0;
  std::vector<std::uint64_t> words_;
};

namespace detail {

// Multiplies by i^k, exactly.
inline Complex times_i_power(Complex c, int k) {
  switch (((k % 4) + 4) % 4) {
    case 0:
      return c;
    case 1:
      return {-c.imag(), c.real()};
    case 2:
      return -c;
    default:
      return {c.imag(), -c.real()};
  }
}

}  // namespace detail

/// coeff * (tensor product of I/X/Y/Z). A qubit with both mask bits set is Y.
struct PauliTerm {
  std::size_t n_qubits = 0;
  Mask x;
  Mask z;
  Complex coeff{1.0, 0.0};

  PauliTerm() = default;
  explicit PauliTerm(std::size_t n, Complex c = 1.0) : n_qubits(n), x(n), z(n), coeff(c) {}

  static PauliTerm identity(std::size_t n) { return PauliTerm(n); }

  /// Single-qubit Pauli ('X', 'Y' or 'Z') on qubit q.
  static PauliTerm single(std::size_t n, std::size_t q, char p, Complex c = 1.0) {
    detail::require(q < n, "qubit index out of range");
    PauliTerm t(n, c);
    t.set(q, p);
    return t;
  }

  /// Character k of `s` is the Pauli on qubit k ('I', 'X', 'Y', 'Z', or '_').
  static PauliTerm from_string(std::string_view s, Complex c = 1.0) {
    PauliTerm t(s.size(), c);
    for (std::size_t q = 0; q < s.size(); ++q) t.set(q, s[q]);
    return t;
  }

  void set(std::size_t q, char p) {
    switch (p) {
      case 'I':
      case '_':
        x.set(q, false);
        z.set(q, false);
        break;
      case 'X':
        x.set(q, true);
        z.set(q, false);
        break;
      case 'Y':
        x.set(q, true);
        z.set(q, true);
        break;
      case 'Z':
        x.set(q, false);
        z.set(q, true);
        break;
      default:
        throw UsageError(std::string("unknown Pauli '") + p + "'");
    }
  }

  char at(std::size_t q) const {
    bool xb = x.test(q), zb = z.test(q);
    return xb ? (zb ? 'Y' : 'X') : (zb ? 'Z' : 'I');
  }

  std::size_t weight() const { return (x | z).popcount(); }
  bool is_identity() const { return !x.any() && !z.any(); }

  std::string to_string() const {
    std::string s(n_qubits, 'I');
    for (std::size_t q = 0; q < n_qubits; ++q) s[q] = at(q);
    return s;
  }

  /// Same Pauli string, ignoring the coefficient.
  bool same_string(const PauliTerm &o) const { return x == o.x && z == o.z; }
};

inline PauliTerm operator*(Complex c, PauliTerm p) {
  p.coeff *= c;
  return p;
}

/// Exact operator product a*b, phase included.
inline PauliTerm multiply(const PauliTerm &a, const PauliTerm &b) {
  detail::require(a.n_qubits == b.n_qubits, "multiply: qubit count mismatch");
  PauliTerm r(a.n_qubits, a.coeff * b.coeff);
  r.x = a.x ^ b.x;
  r.z = a.z ^ b.z;
  // P(x,z) = i^{|x&z|} X^x Z^z and Z^z1 X^x2 = (-1)^{|z1&x2|} X^x2 Z^z1.
  auto k = static_cast<int>((a.x & a.z).popcount() + (b.x & b.z).popcount() +
                            2 * (a.z & b.x).popcount()) -
           static_cast<int>((r.x & r.z).popcount());
  r.coeff = detail::times_i_power(r.coeff, k);
  return r;
}

inline PauliTerm operator*(const PauliTerm &a, const PauliTerm &b) { return multiply(a, b); }

/// True iff ab == ba.
inline bool commutes(const PauliTerm &a, const PauliTerm &b) {
  detail::require(a.n_qubits == b.n_qubits, "commutes: qubit count mismatch");
  return (((a.x & b.z).popcount() + (a.z & b.x).popcount()) & 1u) == 0;
}

/// A controlled-NOT gate as (control, target).
struct Cnot {
  std::size_t control;
  std::size_t target;
  friend bool operator==(const Cnot &, const Cnot &) = default;
};

/// C p C^dagger for C = CNOT(control, target).
inline PauliTerm conjugate_by_cnot(const PauliTerm &p, std::size_t control, std::size_t target) {
  detail::require(control < p.n_qubits && target < p.n_qubits, "cnot: qubit index out of range");
  detail::require(control != target, "cnot: control equals target");
  PauliTerm r = p;
  // In X^x Z^z form the update is phase free: X_c -> X_c X_t, Z_t -> Z_c Z_t.
  if (p.x.test(control)) r.x.flip(target);
  if (p.z.test(target)) r.z.flip(control);
  auto k = static_cast<int>((p.x & p.z).popcount()) - static_cast<int>((r.x & r.z).popcount());
  r.coeff = detail::times_i_power(p.coeff, k);
  return r;
}

/// Conjugates by a circuit whose gates are listed in application order.
inline PauliTerm conjugate_by_circuit(PauliTerm p, std::span<const Cnot> circuit) {
  for (const auto &g : circuit) p = conjugate_by_cnot(p, g.control, g.target);
  return p;
}

/// p * v on a dense statevector; qubit 0 is the least-significant bit.
inline std::vector<Complex> apply_to_state(const PauliTerm &p, std::span<const Complex> v) {
  detail::require(p.n_qubits < 64 && v.size() == (std::size_t{1} << p.n_qubits),
                  "apply_to_state: vector length must be 2^n_qubits");
  const std::uint64_t xm = p.x.low_word();
  const std::uint64_t zm = p.z.low_word();
  const Complex c = detail::times_i_power(p.coeff, std::popcount(xm & zm));
  std::vector<Complex> out(v.size());
  for (std::uint64_t b = 0; b < v.size(); ++b) {
    const double sign = (std::popcount(zm & b) & 1) ? -1.0 : 1.0;
    out[b ^ xm] = sign * c * v[b];
  }
  return out;
}

/// Canonical sum of Pauli terms over a common qubit count.
class PauliSum {
 public:
  PauliSum() = default;
  explicit PauliSum(std::size_t n) : n_(n) {}
  PauliSum(std::size_t n, std::vector<PauliTerm> terms) : n_(n), terms_(std::move(terms)) {
    for (const auto &t : terms_) check(t);
    canonicalize();
  }

  std::size_t n_qubits() const { return n_; }
  const std::vector<PauliTerm> &terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }

  PauliSum &operator+=(const PauliTerm &t) {
    check(t);
    terms_.push_back(t);
    canonicalize();
    return *this;
  }
  PauliSum &operator+=(const PauliSum &o) {
    detail::require(o.n_ == n_, "PauliSum: qubit count mismatch");
    terms_.insert(terms_.end(), o.terms_.begin(), o.terms_.end());
    canonicalize();
    return *this;
  }
  friend PauliSum operator+(PauliSum a, const PauliSum &b) { return a += b; }

  PauliSum &operator*=(Complex c) {
    for (auto &t : terms_) t.coeff *= c;
    canonicalize();
    return *this;
  }
  friend PauliSum operator*(Complex c, PauliSum s) { return s *= c; }

  friend PauliSum operator*(const PauliSum &a, const PauliSum &b) {
    detail::require(a.n_ == b.n_, "PauliSum: qubit count mismatch");
    std::vector<PauliTerm> out;
    out.reserve(a.size() * b.size());
    for (const auto &s : a.terms_) {
      for (const auto &t : b.terms_) out.push_back(multiply(s, t));
    }
    return PauliSum(a.n_, std::move(out));
  }

  /// Sum of |coeff|, an upper bound on the operator norm.
  double coefficient_norm() const {
    double s = 0;
    for (const auto &t : terms_) s += std::abs(t.coeff);
    return s;
  }

 private:
  void check(const PauliTerm &t) const {
    detail::require(t.n_qubits == n_, "PauliSum: qubit count mismatch");
  }

  void canonicalize() {
    std::map<std::pair<Mask, Mask>, Complex> merged;
    for (const auto &t : terms_) merged[{t.x, t.z}] += t.coeff;
    terms_.clear();
    for (auto &[key, c] : merged) {
      if (c == Complex{0.0, 0.0}) continue;
      PauliTerm t(n_, c);
      t.x = key.first;
      t.z = key.second;
      terms_.push_back(std::move(t));
    }
  }

  std::size_t n_ = 0;
  std::vector<PauliTerm> terms_;
};

}  // namespace qmem

#endif
