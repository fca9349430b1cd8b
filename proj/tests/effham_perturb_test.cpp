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
#include <vector>

#include "qmem/effham.hpp"
#include "qmem/fit.hpp"
#include "qmem/perturb.hpp"
#include "qmem/transfer.hpp"

namespace qmem {
namespace {

TEST(ToricEffective, Example) {
  const std::vector<double> J = {1}, B = {0, 0};
  const auto m = toric_effective(3, 1.0, 0.1, J, B);
  EXPECT_EQ(m.diag, (std::vector<double>{2, 2}));
  ASSERT_EQ(m.offdiag.size(), 1u);
  EXPECT_NEAR(m.offdiag[0], 0.1, 1e-16);
}

TEST(ToricEffective, ZeroDeltaIsShiftedIdentity) {
  const std::vector<double> J(4, 0.9), B(5, -0.4);
  const auto m = toric_effective(6, 1.5, 0.0, J, B);
  for (double d : m.diag) EXPECT_EQ(d, 3.0);
  for (double e : m.offdiag) EXPECT_EQ(e, 0.0);
}

TEST(ToricEffective, CoefficientsRoundTrip) {
  const std::vector<double> J = {0.2, -0.7, 0.4}, B = {0.1, 0, -0.3, 0.9};
  const auto c = toric_coefficients(toric_effective(5, 1.0, 0.05, J, B), 1.0, 0.05);
  for (std::size_t i = 0; i < J.size(); ++i) EXPECT_NEAR(c.J[i], J[i], 1e-12);
  for (std::size_t i = 0; i < B.size(); ++i) EXPECT_NEAR(c.B[i], B[i], 1e-12);
}

TEST(ToricEffective, ChristandlIsPersymmetric) {
  const int N = 11;
  const auto J = christandl_couplings(N);
  const std::vector<double> B(N - 1, 0.0);
  EXPECT_TRUE(toric_effective(N, 1.0, 0.1, J, B).is_persymmetric(1e-15));
}

TEST(ToricEffective, SizeErrors) {
  const std::vector<double> J = {1}, B = {0};
  EXPECT_THROW(toric_effective(3, 1.0, 0.1, J, B), UsageError);
}

TEST(IsingEffective, PrintedForm) {
  const auto m = ising_effective_closed_form(3, 0.0);
  EXPECT_EQ(m.diag, (std::vector<double>{0, 2, 2, 0}));
  EXPECT_EQ(m.offdiag, (std::vector<double>{0, 0, 0}));
  for (int N = 3; N <= 7; ++N) {
    const auto p = ising_effective_closed_form(N, 0.1);
    const std::size_t M = p.size();
    EXPECT_EQ(M, ising_chain_length(N));
    std::size_t plateau = 0;
    for (std::size_t i = 0; i < M; ++i) {
      EXPECT_EQ(p.diag[i], p.diag[M - 1 - i]);
      plateau += p.diag[i] == N + 1.0;
    }
    EXPECT_EQ(plateau, M - 2 * static_cast<std::size_t>(N - 1));
  }
}

TEST(IsingEffective, SurfaceAreaDiagonal) {
  const auto m3 = ising_effective_surface(3, 0.0);
  EXPECT_EQ(m3.diag, (std::vector<double>{4, 6, 6, 4}));
  for (int N = 4; N <= 7; ++N) {
    const auto m = ising_effective_surface(N, 0.2);
    const std::size_t M = m.size();
    double lo = 1e9, hi = -1e9;
    std::size_t top = 0;
    for (std::size_t i = 0; i < M; ++i) {
      EXPECT_EQ(m.diag[i], m.diag[M - 1 - i]);
      lo = std::min(lo, m.diag[i]);
      hi = std::max(hi, m.diag[i]);
      top += m.diag[i] == 2.0 * (N + 1);
    }
    EXPECT_EQ(lo, 4);
    EXPECT_EQ(hi, 2.0 * (N + 1));
    EXPECT_EQ(top, static_cast<std::size_t>((N - 1) * (N - 2) - 2));
    for (double e : m.offdiag) EXPECT_DOUBLE_EQ(e, 0.2);
  }
  EXPECT_EQ(ising_effective_surface(4, 0.0).diag[1], 6);
}

TEST(Banded, ReducesToTridiagonalAtK1) {
  const int N = 4;
  const std::size_t M = ising_chain_length(N);
  std::vector<std::vector<double>> bands = {std::vector<double>(M - 1, 0.05)};
  const auto b = banded_effective(N, 0.05, 1, bands);
  const auto t = ising_effective_surface(N, 0.05);
  for (std::size_t i = 0; i < M; ++i) EXPECT_EQ(b.at(i, i), t.diag[i]);
  for (std::size_t i = 0; i + 1 < M; ++i) EXPECT_EQ(b.at(i + 1, i), t.offdiag[i]);
}

TEST(Banded, ZeroBandsDoNotSplit) {
  const int N = 4;
  const std::size_t M = ising_chain_length(N);
  const std::vector<std::vector<double>> bands = {std::vector<double>(M - 1, 0.0), std::vector<double>(M - 2, 0.0)};
  const auto ev = banded_eigenvalues(banded_effective(N, 0.1, 2, bands));
  EXPECT_EQ(ev[1] - ev[0], 0.0);
}

TEST(Banded, Errors) {
  const std::size_t M = ising_chain_length(4);
  EXPECT_THROW(banded_effective(4, 0.1, 1, {std::vector<double>(M - 1, 0.2)}), UsageError);
  EXPECT_THROW(banded_effective(4, 0.1, M, {}), UsageError);
  EXPECT_THROW(banded_effective(4, 0.1, 0, {}), UsageError);
}

TEST(Plateau, Formula) {
  const auto E = plateau_spectrum(4, 0.1);
  ASSERT_EQ(E.size(), 4u);
  for (int i = 1; i <= 4; ++i)
    EXPECT_DOUBLE_EQ(E[static_cast<std::size_t>(i - 1)], 10 + 0.2 * std::cos(i * std::numbers::pi / 5));
  for (double e : plateau_spectrum(5, 0.0)) EXPECT_EQ(e, 12.0);
  EXPECT_THROW(plateau_spectrum(3, 0.1), UsageError);
}

TEST(Plateau, ResidualIsSecondOrder) {
  for (int N : {4, 5}) {
    const auto deltas = logspace(1e-3, 1e-2, 6);
    std::vector<double> res;
    for (double d : deltas) res.push_back(plateau_residual(N, d));
    EXPECT_GE(fit_loglog(deltas, res).slope, 1.8) << "N=" << N;
  }
}

TEST(Order, Predictions) {
  EXPECT_EQ(predicted_order(4, 1, 1), 3);
  EXPECT_EQ(predicted_order(10, 1, 3), 3);
  EXPECT_EQ(predicted_order(10, 2, 7), 1);
  EXPECT_EQ(predicted_order(10, 1, 20), 1);
  EXPECT_THROW(predicted_order(4, 3, 1), UsageError);
}

TEST(Splitting, IsingN3IsThirdOrder) {
  const auto f = measure_splitting(ising_surface_family(3), 0, 1, logspace(1e-3, 1e-2, 6));
  EXPECT_NEAR(f.fitted_order, 3, 0.1);
  EXPECT_FALSE(f.any_below_floor());
}

TEST(Splitting, FlatChainIsFirstOrder) {
  const auto f = measure_splitting(flat_chain_family(4), 0, 3, logspace(1e-3, 1e-2, 6));
  EXPECT_NEAR(f.fitted_order, 1, 0.05);
}

TEST(Splitting, IsingN4NeedsExtendedPrecision) {
  SplittingOptions opt;
  opt.precision = Precision::kDouble;
  const auto deltas = logspace(1e-3, 1e-2, 6);
  const auto coarse = measure_splitting(ising_surface_family(4), 0, 1, deltas, opt);
  EXPECT_FALSE(std::abs(coarse.fitted_order - 9) < 0.3);
  opt.precision = Precision::kAuto;
  const auto fine = measure_splitting(ising_surface_family(4), 0, 1, deltas, opt);
  EXPECT_NEAR(fine.fitted_order, 9, 0.3);
  EXPECT_TRUE(fine.extended.front());
}

TEST(Splitting, Preconditions) {
  const auto fam = ising_surface_family(3);
  EXPECT_THROW(measure_splitting(fam, 0, 1, {1e-3, 2e-3}), UsageError);
  EXPECT_THROW(measure_splitting(fam, 0, 2, logspace(1e-3, 1e-2, 6)), UsageError);
  EXPECT_THROW(measure_splitting(fam, 0, 1, logspace(1e-2, 1.0, 6)), UsageError);
}

TEST(Splitting, BelowFloorIsReported) {
  SplittingOptions opt;
  opt.precision = Precision::kExtended;
  opt.digits = 20;
  const auto f = measure_splitting(ising_surface_family(5), 0, 1, logspace(1e-3, 2e-3, 5), opt);
  EXPECT_TRUE(f.any_below_floor());
}

TEST(Fit, LineAndLogspace) {
  const std::vector<double> x = {1, 2, 3, 4}, y = {3, 5, 7, 9};
  const auto f = fit_line(x, y);
  EXPECT_NEAR(f.slope, 2, 1e-14);
  EXPECT_NEAR(f.intercept, 1, 1e-14);
  const auto ls = logspace(1e-3, 1e-1, 3);
  EXPECT_NEAR(ls[1], 1e-2, 1e-16);
  std::vector<double> p;
  for (double v : ls) p.push_back(5 * v * v * v);
  EXPECT_NEAR(fit_loglog(ls, p).slope, 3, 1e-12);
}

}  // namespace
}  // namespace qmem
