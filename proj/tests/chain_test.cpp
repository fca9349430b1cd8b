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

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "qmem/effham.hpp"
#include "qmem/iep.hpp"
#include "qmem/spectral.hpp"
#include "qmem/transfer.hpp"

namespace qmem {
namespace {

constexpr double kPi = std::numbers::pi;

SymTridiag uniform_chain(std::size_t M, double d, double e) {
  return {std::vector<double>(M, d), std::vector<double>(M - 1, e)};
}

SymTridiag christandl_chain(int N) {
  const auto J = christandl_couplings(N);
  return {std::vector<double>(J.size() + 1, 0.0), J};
}

SymTridiag random_persymmetric(std::size_t M, std::mt19937_64 &rng) {
  std::uniform_real_distribution<double> d(-0.25, 0.25), e(0.75, 1.25);
  SymTridiag m(std::vector<double>(M), std::vector<double>(M - 1));
  for (std::size_t i = 0; i < (M + 1) / 2; ++i) m.diag[i] = m.diag[M - 1 - i] = d(rng);
  for (std::size_t i = 0; i < M / 2; ++i) m.offdiag[i] = m.offdiag[M - 2 - i] = e(rng);
  return m;
}

TEST(Spectral, TwoByTwo) {
  const auto s = eigh_tridiag({{0, 0}, {1}});
  EXPECT_NEAR(s.eigenvalues[0], -1, 1e-15);
  EXPECT_NEAR(s.eigenvalues[1], 1, 1e-15);
}

TEST(Spectral, DiagonalMatrixIsSortedWithUnitComponents) {
  const auto s = eigh_tridiag({{3, -1, 2}, {0, 0}});
  EXPECT_EQ(s.eigenvalues, (std::vector<double>{-1, 2, 3}));
  EXPECT_EQ(s.first_components, (std::vector<double>{0, 0, 1}));
  EXPECT_EQ(s.last_components, (std::vector<double>{0, 1, 0}));
}

TEST(Spectral, UniformChainClosedForm) {
  const auto s = eigh_tridiag(uniform_chain(5, 0, 0.5));
  for (int k = 1; k <= 5; ++k) EXPECT_NEAR(s.eigenvalues[static_cast<std::size_t>(5 - k)], std::cos(k * kPi / 6), 1e-14);
  EXPECT_NEAR(min_gap(s), std::cos(kPi / 6) - std::cos(2 * kPi / 6), 1e-14);
}

TEST(Spectral, MinGap) {
  SpectralData s;
  s.eigenvalues = {0, 1, 3};
  EXPECT_DOUBLE_EQ(min_gap(s), 1);
}

TEST(Spectral, TraceAndFrobeniusArePreserved) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1, 1);
  for (std::size_t M : {2u, 7u, 40u}) {
    SymTridiag m(std::vector<double>(M), std::vector<double>(M - 1));
    for (auto &v : m.diag) v = u(rng);
    for (auto &v : m.offdiag) v = u(rng);
    const auto s = eigh_tridiag(m);
    double tr = 0, fro = 0, ev_tr = 0, ev_sq = 0;
    for (double v : m.diag) tr += v, fro += v * v;
    for (double v : m.offdiag) fro += 2 * v * v;
    for (double l : s.eigenvalues) ev_tr += l, ev_sq += l * l;
    EXPECT_NEAR(tr, ev_tr, 1e-12);
    EXPECT_NEAR(fro, ev_sq, 1e-12);
    for (std::size_t i = 0; i + 1 < M; ++i) EXPECT_LE(s.eigenvalues[i], s.eigenvalues[i + 1]);
  }
}

TEST(Spectral, PersymmetricEndComponentsAlternate) {
  std::mt19937_64 rng(4);
  for (std::size_t M : {3u, 6u, 11u}) {
    const auto s = eigh_tridiag(random_persymmetric(M, rng));
    // Top eigenvector is even under reflection; signs alternate downwards.
    for (std::size_t i = 0; i < M; ++i) {
      const double sign = (M - 1 - i) % 2 == 0 ? 1.0 : -1.0;
      EXPECT_NEAR(s.last_components[i], sign * s.first_components[i], 1e-12) << "M=" << M << " i=" << i;
    }
  }
}

// Strong disorder localises states at both ends; their even/odd pairs are
// degenerate to far below eps and QL alone mixes them.
TEST(Spectral, NearDegeneratePersymmetricPairsKeepParity) {
  std::mt19937_64 rng(40);
  std::uniform_real_distribution<double> d(-3, 3), e(0.2, 1.0);
  SymTridiag m(std::vector<double>(40), std::vector<double>(39));
  for (std::size_t i = 0; i < 20; ++i) m.diag[i] = m.diag[39 - i] = d(rng);
  for (std::size_t i = 0; i < 20; ++i) m.offdiag[i] = m.offdiag[38 - i] = e(rng);
  const auto s = eigh_tridiag(m);
  EXPECT_LT(min_gap(s), 1e-12);
  for (std::size_t i = 0; i < s.size(); ++i)
    EXPECT_NEAR(std::abs(s.last_components[i]), std::abs(s.first_components[i]), 1e-15);
  EXPECT_NEAR(f_max(s), 1, 1e-12);
}

// Tiny first components against the closed form for persymmetric chains.
TEST(Spectral, TinyEndComponentsKeepRelativeAccuracy) {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> d(-0.25, 0.25), e(0.75, 1.25);
  SymTridiag m(std::vector<double>(101), std::vector<double>(100));
  for (auto &v : m.diag) v = d(rng);
  for (auto &v : m.offdiag) v = e(rng);
  const auto s = eigh_tridiag(m);
  double smallest = 1;
  for (double c : s.first_components) smallest = std::min(smallest, c * c);
  EXPECT_LT(smallest, 1e-25);
  std::vector<double> w;
  for (double c : s.first_components) w.push_back(c * c);
  const auto back = reconstruct_jacobi(s.eigenvalues, w);
  for (std::size_t i = 0; i + 1 < m.size(); ++i) EXPECT_NEAR(back.offdiag[i], m.offdiag[i], 1e-9);
}

TEST(Spectral, DenseJacobiAgreesWithTridiagonal) {
  std::mt19937_64 rng(9);
  const auto m = random_persymmetric(12, rng);
  const auto a = eigh_tridiag(m).eigenvalues;
  const auto b = eigh_dense_symmetric(m.to_dense()).values;
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a[i], b[i], 1e-12);
}

TEST(Spectral, DenseSmallExamples) {
  const auto id = eigh_dense_symmetric(Matrix<double>::identity(4)).values;
  for (double v : id) EXPECT_DOUBLE_EQ(v, 1);
  Matrix<double> a(2, 2);
  a(0, 0) = a(1, 1) = 0.3;
  a(0, 1) = a(1, 0) = 1.7;
  const auto ev = eigh_dense_symmetric(a).values;
  EXPECT_NEAR(ev[0], 0.3 - 1.7, 1e-15);
  EXPECT_NEAR(ev[1], 0.3 + 1.7, 1e-15);
}

TEST(Spectral, HouseholderKeepsSpectrum) {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(-1, 1);
  Matrix<double> a(9, 9);
  for (std::size_t i = 0; i < 9; ++i)
    for (std::size_t j = 0; j <= i; ++j) a(i, j) = a(j, i) = u(rng);
  const auto x = eigh_dense_symmetric(a).values;
  const auto y = eigh_tridiag(householder_tridiagonalize(a)).eigenvalues;
  for (std::size_t i = 0; i < 9; ++i) EXPECT_NEAR(x[i], y[i], 1e-12);
}

TEST(Spectral, BisectionMatchesQl) {
  std::mt19937_64 rng(12);
  const auto m = random_persymmetric(15, rng);
  const auto ev = eigh_tridiag(m).eigenvalues;
  const auto b = BandedSym<double>::from_tridiag(m);
  for (std::size_t i = 0; i < ev.size(); ++i) EXPECT_NEAR(bisect_eigenvalue(b, i, 1e-13), ev[i], 1e-12);
}

TEST(Transfer, ChristandlCouplings) {
  const auto J = christandl_couplings(4);
  ASSERT_EQ(J.size(), 2u);
  EXPECT_NEAR(J[0], 2 * std::sqrt(2.0) / 3, 1e-15);
  EXPECT_NEAR(J[1], 2 * std::sqrt(2.0) / 3, 1e-15);
  EXPECT_EQ(christandl_couplings(3), std::vector<double>{1.0});
}

TEST(Transfer, ChristandlSpectrumIsEquallySpaced) {
  const auto s = eigh_tridiag(christandl_chain(12));
  const double gap = min_gap(s);
  for (std::size_t i = 0; i + 1 < s.size(); ++i) EXPECT_NEAR(s.eigenvalues[i + 1] - s.eigenvalues[i], gap, 1e-12);
}

TEST(Transfer, FidelityEdgeCases) {
  const auto s = eigh_tridiag(uniform_chain(4, 0, 1));
  EXPECT_NEAR(fidelity(s, 0), 0, 1e-15);
  const auto one = eigh_tridiag({{0.7}, {}});
  EXPECT_DOUBLE_EQ(fidelity(one, 3.1), 1);
  EXPECT_DOUBLE_EQ(f_max(eigh_tridiag({{1, 2, 3}, {0, 0}})), 0);
}

TEST(Transfer, FMaxIsOneForPersymmetricChains) {
  std::mt19937_64 rng(21);
  for (std::size_t M : {2u, 5u, 30u}) EXPECT_NEAR(f_max(eigh_tridiag(random_persymmetric(M, rng))), 1, 1e-12);
}

TEST(Transfer, ChristandlPerfectAtPiOverGap) {
  for (int N : {4, 9, 20}) {
    const auto s = eigh_tridiag(christandl_chain(N));
    const double tstar = kPi / min_gap(s);
    EXPECT_NEAR(fidelity(s, tstar), 1, 1e-12);
    const auto [t, F] = maximize_fidelity(s, 0.9 * tstar, 1.1 * tstar);
    EXPECT_NEAR(t, tstar, 1e-6 * tstar);
    EXPECT_GE(F, 1 - 1e-12);
  }
}

TEST(Transfer, MeasureTransferTime) {
  const auto s = eigh_tridiag(christandl_chain(10));
  const double tstar = kPi / min_gap(s);
  const auto r = measure_transfer_time(s, 0.999, 2 * tstar);
  ASSERT_TRUE(r.reached());
  EXPECT_LT(*r.transfer_time, tstar);
  EXPECT_NEAR(fidelity(s, *r.transfer_time), 0.999, 1e-9);
  EXPECT_NEAR(r.peak_time, tstar, 1e-6 * tstar);
  EXPECT_EQ(*measure_transfer_time(s, 0, tstar).transfer_time, 0);

  const auto flat = eigh_tridiag(uniform_chain(12, 0, 1));
  const auto miss = measure_transfer_time(flat, 0.999, 5);
  EXPECT_FALSE(miss.reached());
  EXPECT_LT(miss.peak_fidelity, 0.999);
  EXPECT_THROW(measure_transfer_time(s, 1.5, 1), UsageError);
}

TEST(Retune, TwoLevelExampleIsAccepted) {
  SpectralData s;
  s.eigenvalues = {-1, 1};
  s.amplitudes = {0.5, -0.5};
  const auto p = retune_eigenvalues(s, kPi / 2, 0);
  EXPECT_DOUBLE_EQ(p.retuned[0], -1);
  EXPECT_DOUBLE_EQ(p.retuned[1], 1);
  EXPECT_DOUBLE_EQ(p.shifts[1], 0);
}

TEST(Retune, ShiftsStayWithinOneInterval) {
  std::mt19937_64 rng(31);
  for (int k = 0; k < 20; ++k) {
    const auto s = eigh_tridiag(random_persymmetric(9, rng));
    const double t = 10.5 * kPi / min_gap(s) * (1 + k);
    const auto p = retune_eigenvalues(s, t);
    for (double d : p.shifts) EXPECT_LE(std::abs(d), kPi / t + 1e-12);
    for (std::size_t i = 1; i < p.retuned.size(); ++i) EXPECT_GT(p.retuned[i], p.retuned[i - 1]);
    EXPECT_LE(phase_condition_residual(p, s.amplitudes), 1e-9);
  }
}

TEST(Retune, ChristandlIsAFixedPoint) {
  const auto m = christandl_chain(12);
  const auto s = eigh_tridiag(m);
  for (std::size_t i = 0; i < s.size(); ++i) EXPECT_EQ(s.amplitudes[i] > 0, (s.size() - 1 - i) % 2 == 0);
  const double t = 11 * kPi / min_gap(s);
  const auto p = retune_eigenvalues(s, t);
  for (double d : p.shifts) EXPECT_NEAR(d, 0, 1e-12);
  const auto rc = retune_chain(m, t);
  EXPECT_LE(rc.max_coupling_shift, 1e-9);
  EXPECT_LE(rc.max_diagonal_shift, 1e-9);
}

TEST(Retune, RejectsShortTimesAndZeroAmplitudes) {
  const auto s = eigh_tridiag(uniform_chain(5, 0, 1));
  EXPECT_THROW(retune_eigenvalues(s, kPi / min_gap(s)), UsageError);
  auto z = s;
  z.amplitudes[2] = 0;
  EXPECT_THROW(retune_eigenvalues(z, 100 * kPi / min_gap(s)), UsageError);
}

TEST(Retune, UniformToricChainReachesPerfectTransfer) {
  const int N = 20;
  const double delta = 0.1;
  const std::vector<double> J(N - 2, 0.5), B(N - 1, 0.0);
  const auto m = toric_effective(N, 1.0, delta, J, B);
  const double t = 50 * kPi / min_gap(eigh_tridiag(m));
  const auto rc = retune_chain(m, t);
  EXPECT_GE(fidelity(eigh_tridiag(rc.chain), t), 1 - 1e-6);
  EXPECT_TRUE(rc.chain.is_persymmetric(1e-9));
  const auto fwd = eigh_tridiag(rc.chain).eigenvalues;
  for (std::size_t i = 0; i < fwd.size(); ++i) EXPECT_NEAR(fwd[i], rc.plan.retuned[i], 1e-9 * m.norm());
  EXPECT_LE(rc.max_coupling_shift, 10 * kPi / t);
}

TEST(Retune, NonPersymmetricInputIsRejected) {
  EXPECT_THROW(retune_chain({{0, 0.1, 0.2}, {1, 1}}, 1e4), UsageError);
}

TEST(Jacobi, SmallExamples) {
  const auto one = reconstruct_jacobi({2.5}, {1.0});
  EXPECT_EQ(one.diag, std::vector<double>{2.5});
  const auto two = reconstruct_jacobi({-1, 1}, {0.5, 0.5});
  EXPECT_NEAR(two.diag[0], 0, 1e-15);
  EXPECT_NEAR(two.diag[1], 0, 1e-15);
  EXPECT_NEAR(two.offdiag[0], 1, 1e-15);
}

TEST(Jacobi, RoundTrip) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> d(-0.25, 0.25), e(0.75, 1.25);
  for (std::size_t M : {3u, 20u, 100u}) {
    SymTridiag m(std::vector<double>(M), std::vector<double>(M - 1));
    for (auto &v : m.diag) v = d(rng);
    for (auto &v : m.offdiag) v = e(rng);
    const auto s = eigh_tridiag(m);
    std::vector<double> w;
    for (double c : s.first_components) w.push_back(c * c);
    const auto r = reconstruct_jacobi(s.eigenvalues, w);
    for (std::size_t i = 0; i < M; ++i) EXPECT_NEAR(r.diag[i], m.diag[i], 1e-9);
    for (std::size_t i = 0; i + 1 < M; ++i) EXPECT_NEAR(r.offdiag[i], m.offdiag[i], 1e-9);
  }
}

TEST(Jacobi, PersymmetricWeightsGivePersymmetricChains) {
  std::mt19937_64 rng(23);
  const auto m = random_persymmetric(14, rng);
  const auto s = eigh_tridiag(m);
  const auto w = persymmetric_weights(s.eigenvalues);
  for (std::size_t i = 0; i < w.size(); ++i) EXPECT_NEAR(w[i], s.first_components[i] * s.first_components[i], 1e-12);
  EXPECT_TRUE(reconstruct_jacobi(s.eigenvalues, w).is_persymmetric(1e-9));
}

TEST(Jacobi, InvalidInput) {
  EXPECT_THROW(reconstruct_jacobi({1, 0}, {0.5, 0.5}), UsageError);
  EXPECT_THROW(reconstruct_jacobi({0, 1}, {1.0, 0.0}), UsageError);
  EXPECT_THROW(reconstruct_jacobi({0, 1}, {0.2, 0.2}), UsageError);
}

}  // namespace
}  // namespace qmem
