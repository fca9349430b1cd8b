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


#include <gtest/gtest.h>

#include <array>
#include <complex>
#include <random>
#include <vector>

#include "qmem/lattice.hpp"
#include "qmem/oracle.hpp"
#include "qmem/pauli.hpp"
#include "qmem/spectral.hpp"

namespace qmem {
namespace {

using C = Complex;

std::vector<C> random_state(std::size_t n, std::mt19937_64 &rng) {
  std::normal_distribution<double> g;
  std::vector<C> v(std::size_t{1} << n);
  for (auto &a : v) a = {g(rng), g(rng)};
  return v;
}

PauliTerm random_term(std::size_t n, std::mt19937_64 &rng) {
  static constexpr std::array<char, 4> kOps = {'I', 'X', 'Y', 'Z'};
  PauliTerm p(n);
  for (std::size_t q = 0; q < n; ++q) p.set(q, kOps[rng() % 4]);
  return p;
}

double max_diff(const std::vector<C> &a, const std::vector<C> &b) {
  double d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

TEST(Pauli, XTimesZIsMinusIY) {
  const auto p = PauliTerm::from_string("XI") * PauliTerm::from_string("ZI");
  EXPECT_EQ(p.to_string().substr(p.to_string().size() - 2), "YI");
  EXPECT_TRUE(p.same_string(PauliTerm::from_string("YI")));
  EXPECT_NEAR(std::abs(p.coeff - C(0, -1)), 0, 1e-15);
}

TEST(Pauli, IdentityIsNeutral) {
  std::mt19937_64 rng(3);
  for (int k = 0; k < 20; ++k) {
    const auto p = random_term(5, rng);
    const auto q = multiply(PauliTerm::identity(5), p);
    EXPECT_TRUE(q.same_string(p));
    EXPECT_EQ(q.coeff, p.coeff);
  }
}

TEST(Pauli, SingleQubitCharsRoundTrip) {
  auto p = PauliTerm::from_string("IXYZ");
  EXPECT_EQ(p.at(0), 'I');
  EXPECT_EQ(p.at(1), 'X');
  EXPECT_EQ(p.at(2), 'Y');
  EXPECT_EQ(p.at(3), 'Z');
  EXPECT_EQ(p.weight(), 3u);
}

TEST(Pauli, CommutationExamples) {
  EXPECT_TRUE(commutes(PauliTerm::single(2, 0, 'X'), PauliTerm::single(2, 1, 'Z')));
  EXPECT_FALSE(commutes(PauliTerm::single(2, 0, 'X'), PauliTerm::single(2, 0, 'Z')));
}

TEST(Pauli, ProductSignMatchesSymplecticParity) {
  std::mt19937_64 rng(11);
  for (int k = 0; k < 500; ++k) {
    const auto a = random_term(7, rng), b = random_term(7, rng);
    const auto ab = a * b, ba = b * a;
    ASSERT_TRUE(ab.same_string(ba));
    const double sign = commutes(a, b) ? 1.0 : -1.0;
    EXPECT_NEAR(std::abs(ab.coeff - sign * ba.coeff), 0, 1e-15);
  }
}

TEST(Pauli, SizeMismatchThrows) {
  EXPECT_THROW(multiply(PauliTerm(2), PauliTerm(3)), UsageError);
}

TEST(Pauli, ApplyToStateComposes) {
  std::mt19937_64 rng(5);
  for (std::size_t n : {1u, 4u, 10u}) {
    for (int k = 0; k < 5; ++k) {
      const auto a = random_term(n, rng), b = random_term(n, rng);
      const auto v = random_state(n, rng);
      EXPECT_LE(max_diff(apply_to_state(a * b, v), apply_to_state(a, apply_to_state(b, v))), 1e-13);
    }
  }
}

TEST(Pauli, ApplyToStateBasics) {
  std::vector<C> zero(8, 0.0);
  zero[0] = 1;
  const auto flipped = apply_to_state(PauliTerm::single(3, 0, 'X'), zero);
  EXPECT_EQ(flipped[1], C(1));
  std::mt19937_64 rng(2);
  const auto v = random_state(3, rng);
  EXPECT_EQ(max_diff(apply_to_state(PauliTerm::identity(3), v), v), 0);
  const auto x0 = PauliTerm::single(3, 0, 'X');
  EXPECT_EQ(max_diff(apply_to_state(x0, apply_to_state(x0, v)), v), 0);
}

TEST(Pauli, CnotCliffordRules) {
  const auto xc = conjugate_by_cnot(PauliTerm::from_string("XI"), 0, 1);
  EXPECT_TRUE(xc.same_string(PauliTerm::from_string("XX")));
  EXPECT_EQ(xc.coeff, C(1));
  const auto zc = conjugate_by_cnot(PauliTerm::from_string("ZI"), 0, 1);
  EXPECT_TRUE(zc.same_string(PauliTerm::from_string("ZI")));
  const auto zt = conjugate_by_cnot(PauliTerm::from_string("IZ"), 0, 1);
  EXPECT_TRUE(zt.same_string(PauliTerm::from_string("ZZ")));
}

// C (Y x 1) C^dag against explicit 4x4 matrices, qubit 0 least significant.
TEST(Pauli, CnotOnYMatchesDenseProduct) {
  using M4 = std::array<std::array<C, 4>, 4>;
  auto mul = [](const M4 &a, const M4 &b) {
    M4 r{};
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        for (int k = 0; k < 4; ++k) r[i][j] += a[i][k] * b[k][j];
    return r;
  };
  auto dense = [](const PauliTerm &p) {
    M4 m{};
    for (std::uint64_t col = 0; col < 4; ++col) {
      std::vector<C> e(4, 0.0);
      e[col] = 1;
      const auto out = apply_to_state(p, e);
      for (int row = 0; row < 4; ++row) m[row][col] = out[row];
    }
    return m;
  };
  M4 cnot{};  // control qubit 0, target qubit 1
  for (int b = 0; b < 4; ++b) cnot[(b & 1) ? b ^ 2 : b][b] = 1;
  const auto y = PauliTerm::single(2, 0, 'Y');
  const M4 want = mul(mul(cnot, dense(y)), cnot);
  const M4 got = dense(conjugate_by_cnot(y, 0, 1));
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) EXPECT_NEAR(std::abs(got[i][j] - want[i][j]), 0, 1e-15);
}

TEST(Pauli, CircuitThenReverseIsIdentity) {
  std::mt19937_64 rng(8);
  const std::vector<Cnot> circuit = {{0, 1}, {2, 1}, {3, 0}, {1, 4}};
  std::vector<Cnot> reversed(circuit.rbegin(), circuit.rend());
  for (int k = 0; k < 50; ++k) {
    const auto p = random_term(5, rng);
    const auto q = conjugate_by_circuit(conjugate_by_circuit(p, circuit), reversed);
    EXPECT_TRUE(q.same_string(p));
    EXPECT_EQ(q.coeff, p.coeff);
    EXPECT_TRUE(conjugate_by_circuit(p, {}).same_string(p));
    EXPECT_LE(conjugate_by_cnot(p, 0, 1).weight(), p.weight() + 1);
  }
}

TEST(PauliSum, MergesAndDropsCancelledTerms) {
  PauliSum s(2);
  s += PauliTerm::from_string("XZ", 0.5);
  s += PauliTerm::from_string("XZ", 0.25);
  s += PauliTerm::from_string("ZZ", 1.0);
  s += PauliTerm::from_string("ZZ", -1.0);
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s.terms()[0].coeff, C(0.75));
  EXPECT_DOUBLE_EQ(s.coefficient_norm(), 0.75);
}

class ToricTest : public ::testing::TestWithParam<int> {};

TEST_P(ToricTest, StabilizerStructure) {
  const ToricLattice lat(GetParam());
  const int N = lat.N;
  const auto stabs = toric_stabilizers(lat);
  ASSERT_EQ(stabs.size(), static_cast<std::size_t>(2 * N * N));
  PauliTerm zprod = PauliTerm::identity(lat.n_qubits()), xprod = zprod;
  for (int i = 0; i < N; ++i) {
    for (int j = 0; j < N; ++j) {
      EXPECT_EQ(lat.plaquette(i, j).weight(), 4u);
      EXPECT_EQ(lat.star(i, j).weight(), 4u);
      zprod = zprod * lat.plaquette(i, j);
      xprod = xprod * lat.star(i, j);
    }
  }
  EXPECT_TRUE(zprod.is_identity());
  EXPECT_TRUE(xprod.is_identity());
  EXPECT_EQ(zprod.coeff, C(1));
  for (const auto &a : stabs)
    for (const auto &b : stabs) ASSERT_TRUE(commutes(a, b));
}

TEST_P(ToricTest, LogicalsAndErrorStrings) {
  const ToricLattice lat(GetParam());
  const int N = lat.N;
  const auto L = toric_logicals(lat);
  EXPECT_EQ(L.z_loop_1.weight(), static_cast<std::size_t>(N));
  EXPECT_EQ(L.z_loop_2.weight(), static_cast<std::size_t>(N));
  EXPECT_EQ(L.x_string.weight(), static_cast<std::size_t>(N));
  EXPECT_FALSE(commutes(L.x_string, L.z_loop_2));
  EXPECT_TRUE(commutes(L.x_string, L.z_loop_1));
  const auto stabs = toric_stabilizers(lat);
  for (const auto &s : stabs) {
    EXPECT_TRUE(commutes(L.z_loop_1, s));
    EXPECT_TRUE(commutes(L.z_loop_2, s));
    EXPECT_TRUE(commutes(L.x_string, s));
  }
  EXPECT_TRUE(toric_error_string(lat, 0).same_string(lat.op('X', {{0, 0}})));
  for (int l = 0; l <= N - 1; ++l) {
    int anti = 0;
    for (const auto &s : stabs) anti += !commutes(toric_error_string(lat, l), s);
    EXPECT_EQ(anti, l < N - 1 ? 2 : 0) << "l = " << l;
  }
  EXPECT_TRUE(toric_error_string(lat, N - 1).same_string(L.x_string));
}

TEST_P(ToricTest, PerturbationSupport) {
  const ToricLattice lat(GetParam());
  const int N = lat.N;
  const std::vector<double> J(static_cast<std::size_t>(N - 2), 0.7), B(static_cast<std::size_t>(N - 1), -0.3);
  const PauliSum dh = toric_perturbation(lat, J, B, 0.1);
  for (const auto &t : dh.terms()) EXPECT_LE(t.weight(), 9u);
  const std::vector<double> J0(J.size(), 0.0), B0(B.size(), 0.0);
  EXPECT_TRUE(toric_perturbation(lat, J0, B0, 0.1).empty());
}

INSTANTIATE_TEST_SUITE_P(Sizes, ToricTest, ::testing::Values(3, 4, 5));

TEST(Toric, SiteIndexIsRowMajorInZThenX) {
  const ToricLattice lat(3);
  EXPECT_EQ(lat.site(0, 0), 0u);
  EXPECT_EQ(lat.site(2, 0), 1u);
  EXPECT_EQ(lat.site(4, 0), 2u);
  EXPECT_EQ(lat.site(1, 1), 3u);
  EXPECT_EQ(lat.site(1, -1), lat.site(1, 5));
  EXPECT_EQ(lat.site(6, 0), lat.site(0, 0));
  for (std::size_t q = 0; q < lat.n_qubits(); ++q) {
    const auto [x, z] = lat.coordinates(q);
    EXPECT_EQ(lat.site(x, z), q);
  }
  EXPECT_THROW(lat.site(1, 0), UsageError);
}

TEST(Toric, HamiltonianTermCount) {
  const ToricLattice lat(2);
  const auto h = toric_hamiltonian(lat);
  EXPECT_EQ(h.n_qubits(), 8u);
  EXPECT_EQ(h.size(), 8u);
  for (const auto &t : h.terms()) EXPECT_EQ(t.weight(), 4u);
}

TEST(Toric, GroundSpaceIsFourFoldAtN2) {
  const ToricLattice lat(2);
  const auto ev = eigh_dense_symmetric(dense_real_matrix(toric_hamiltonian(lat))).values;
  const double e0 = toric_ground_energy(lat);
  EXPECT_NEAR(ev[0], e0, 1e-12);
  int degenerate = 0;
  for (double e : ev) degenerate += std::abs(e - e0) < 1e-9;
  EXPECT_EQ(degenerate, 4);
}

TEST(Ising, BondsAndGroundStates) {
  for (int N : {2, 3, 4}) {
    const IsingLattice lat(N);
    EXPECT_EQ(ising_bonds(lat).size(), static_cast<std::size_t>(2 * N * N));
  }
  const IsingLattice lat(3);
  const auto h = ising_hamiltonian(lat);
  DenseState all0(9, 0), all1(9, (1u << 9) - 1);
  const double e0 = expectation(h, all0);
  EXPECT_DOUBLE_EQ(expectation(h, all1), e0);
  Mask one(9);
  one.set(4);
  EXPECT_EQ(ising_excitation_energy(lat, one), 4);
  EXPECT_NEAR(expectation(h, DenseState(9, 1u << 4)) - e0, 4, 1e-12);
}

TEST(Ising, SnakeOrderVisitsEveryVertexOnce) {
  const IsingLattice lat(4);
  std::vector<int> seen(16, 0);
  for (std::size_t q = 0; q < 16; ++q) {
    const auto [r, c] = lat.vertex(q);
    EXPECT_EQ(r, static_cast<int>(q / 4));
    EXPECT_EQ(lat.qubit(r, c), q);
    ++seen[static_cast<std::size_t>(r * 4 + c)];
  }
  for (int s : seen) EXPECT_EQ(s, 1);
}

TEST(Ising, PrefixEnergies) {
  const int N = 5;
  const IsingLattice lat(N);
  EXPECT_EQ(ising_error_prefix(lat, 1).weight(), 1u);
  for (std::size_t l = 1; l < static_cast<std::size_t>(N); ++l)
    EXPECT_EQ(ising_excitation_energy(lat, ising_error_prefix(lat, l).x), static_cast<int>(2 * l + 2));
  EXPECT_EQ(ising_excitation_energy(lat, ising_error_prefix(lat, lat.n_qubits()).x), 0);
}

TEST(Ising, PerturbationWeights) {
  const IsingLattice lat(4);
  const std::size_t M = ising_retained_prefixes(lat).size();
  ASSERT_EQ(M, 10u);
  const std::vector<double> J(M - 1, 1.0), B(M, 0.0);
  const PauliSum dh = ising_perturbation(lat, J, B, 0.1);
  for (const auto &t : dh.terms()) {
    const std::size_t flips = t.x.popcount();
    EXPECT_LE(flips, 3u);
    EXPECT_LE(t.weight(), flips + 2);
  }
  const std::vector<double> J0(M - 1, 0.0);
  EXPECT_TRUE(ising_perturbation(lat, J0, B, 0.1).empty());
}

// At N = 3 the retained prefixes are 1, 2, 7, 8 and the middle hop flips five spins.
TEST(Ising, SmallestLatticeChain) {
  const IsingLattice lat(3);
  EXPECT_EQ(ising_retained_prefixes(lat), (std::vector<std::size_t>{1, 2, 7, 8}));
  const std::vector<double> J = {0.0, 1.0, 0.0}, B(4, 0.0);
  const PauliSum dh = ising_perturbation(lat, J, B, 0.1);
  for (const auto &t : dh.terms()) EXPECT_EQ(t.x.popcount(), 5u);
}

}  // namespace
}  // namespace qmem
