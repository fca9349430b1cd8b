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

// Splitting of degenerate levels under a small perturbation: plateau
// spectrum at first order, and the order at which a degenerate pair splits.

#ifndef QMEM_PERTURB_HPP_
#define QMEM_PERTURB_HPP_

#include <algorithm>
#include <boost/multiprecision/mpfr.hpp>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <numbers>
#include <vector>

#include "qmem/effham.hpp"
#include "qmem/errors.hpp"
#include "qmem/fit.hpp"
#include "qmem/matrix.hpp"
#include "qmem/spectral.hpp"

namespace qmem {

using Extended = boost::multiprecision::mpfr_float;

/// Sets the default Extended precision for the current thread and restores
/// the previous value on exit.
class ExtendedPrecision {
 public:
  explicit ExtendedPrecision(unsigned digits10) : saved_(Extended::default_precision()) {
    Extended::default_precision(digits10);
  }
  ~ExtendedPrecision() { Extended::default_precision(saved_); }
  ExtendedPrecision(const ExtendedPrecision &) = delete;
  ExtendedPrecision &operator=(const ExtendedPrecision &) = delete;

 private:
  unsigned saved_;
};

/// Size of the Ising plateau, (N-1)(N-2) - 2.
inline std::size_t plateau_size(int N) {
  detail::require(N >= 4, "plateau needs N >= 4");
  return static_cast<std::size_t>((N - 1) * (N - 2) - 2);
}

/// E_i = 2(N+1) + 2 delta cos(i pi / ((N-1)(N-2) - 1)), i = 1..(N-1)(N-2)-2.
inline std::vector<double> plateau_spectrum(int N, double delta) {
  const std::size_t P = plateau_size(N);
  std::vector<double> E(P);
  for (std::size_t i = 1; i <= P; ++i)
    E[i - 1] = 2.0 * (N + 1) + 2 * delta * std::cos(static_cast<double>(i) * std::numbers::pi / static_cast<double>(P + 1));
  return E;
}

/// The top (N-1)(N-2)-2 eigenvalues of the surface-area chain, ascending.
inline std::vector<double> numerical_plateau(int N, double delta) {
  const std::size_t P = plateau_size(N);
  const auto ev = eigh_tridiag(ising_effective_surface(N, delta)).eigenvalues;
  return {ev.end() - static_cast<std::ptrdiff_t>(P), ev.end()};
}

/// max_i |numerical - formula| over the sorted plateau.
inline double plateau_residual(int N, double delta) {
  auto formula = plateau_spectrum(N, delta);
  std::sort(formula.begin(), formula.end());
  const auto numeric = numerical_plateau(N, delta);
  double worst = 0;
  for (std::size_t i = 0; i < formula.size(); ++i) worst = std::max(worst, std::abs(formula[i] - numeric[i]));
  return worst;
}

/// ceil((M + 1 - 2i) / k): hops of reach k between the i-th degenerate pair.
inline int predicted_order(int M, int i, int k) {
  detail::require(i >= 1, "predicted_order: i must be >= 1");
  detail::require(M >= 2 * i, "predicted_order: need M >= 2i");
  detail::require(k >= 1, "predicted_order: k must be >= 1");
  const int hops = M + 1 - 2 * i;
  return (hops + k - 1) / k;
}

template <class Real>
Real banded_norm(const BandedSym<Real> &a) {
  using std::abs;
  Real best(0);
  for (std::size_t i = 0; i < a.n; ++i) {
    Real row(0);
    const std::size_t lo = i >= a.k ? i - a.k : 0;
    const std::size_t hi = std::min(a.n - 1, i + a.k);
    for (std::size_t j = lo; j <= hi; ++j) row += abs(a.at(i, j));
    best = std::max<Real>(best, row);
  }
  return best;
}

/// All eigenvalues of a banded matrix in double precision, ascending.
inline std::vector<double> banded_eigenvalues(const BandedSym<double> &a) {
  if (a.k <= 1) {
    SymTridiag t;
    t.diag = a.bands[0];
    t.offdiag = a.k == 1 ? a.bands[1] : std::vector<double>(a.n - 1, 0.0);
    return eigh_tridiag(t).eigenvalues;
  }
  return eigh_dense_symmetric(a.to_dense()).values;
}

enum class Precision { kAuto, kDouble, kExtended };

struct SplittingOptions {
  Precision precision = Precision::kAuto;
  unsigned digits = 50;
  double extended_below = 1e-12;  ///< kAuto switches when splitting < this * norm
  double validity_factor = 10;    ///< deltas must satisfy delta <= gap / factor
  int predicted_order = 0;        ///< 0 when there is no prediction
};

struct SplittingFit {
  std::vector<double> deltas;
  std::vector<double> splittings;
  std::vector<bool> extended;     ///< per point: computed in extended precision
  std::vector<bool> below_floor;  ///< per point: unresolved even in extended precision
  double fitted_order = std::numeric_limits<double>::quiet_NaN();
  double order_stderr = std::numeric_limits<double>::quiet_NaN();
  int predicted_order = 0;

  bool any_below_floor() const { return std::find(below_floor.begin(), below_floor.end(), true) != below_floor.end(); }
};

using MatrixFamily = std::function<BandedSym<double>(double)>;

/// Difference of eigenvalues hi_index and lo_index (ascending order) of
/// family(delta), at each delta, and its log-log slope against delta.
inline SplittingFit measure_splitting(const MatrixFamily &family, std::size_t lo_index, std::size_t hi_index,
                                      const std::vector<double> &deltas, const SplittingOptions &opt = {}) {
  detail::require(lo_index < hi_index, "measure_splitting: need lo_index < hi_index");
  detail::require(deltas.size() >= 5, "measure_splitting: need at least 5 delta values");
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    detail::require(deltas[i] > 0, "measure_splitting: deltas must be positive");
    if (i) detail::require(deltas[i] > deltas[i - 1], "measure_splitting: deltas must be strictly ascending");
  }

  const BandedSym<double> base = family(0.0);
  detail::require(hi_index < base.n, "measure_splitting: pair index out of range");
  const auto ev0 = banded_eigenvalues(base);
  const double norm0 = std::max(1.0, banded_norm(base));
  detail::require(std::abs(ev0[hi_index] - ev0[lo_index]) <= 1e-12 * norm0,
                  "measure_splitting: selected pair is not degenerate at delta = 0");
  double gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < ev0.size(); ++i) {
    const double d = ev0[i + 1] - ev0[i];
    if (d > 1e-12 * norm0) gap = std::min(gap, d);
  }
  if (std::isfinite(gap)) {
    detail::require(deltas.back() <= gap / opt.validity_factor,
                    "measure_splitting: delta exceeds the perturbative validity bound gap / " +
                        std::to_string(opt.validity_factor));
  }

  SplittingFit fit;
  fit.predicted_order = opt.predicted_order;
  for (double delta : deltas) {
    const BandedSym<double> a = family(delta);
    const double norm = std::max(1.0, banded_norm(a));
    double split = 0;
    bool use_extended = opt.precision == Precision::kExtended;
    if (opt.precision != Precision::kExtended) {
      const auto ev = banded_eigenvalues(a);
      split = ev[hi_index] - ev[lo_index];
      if (opt.precision == Precision::kAuto && split < opt.extended_below * norm) use_extended = true;
    }
    bool below = false;
    if (use_extended) {
      ExtendedPrecision guard(opt.digits);
      const BandedSym<Extended> ax = a.cast<Extended>();
      const Extended scale(norm);
      const Extended tol = scale * boost::multiprecision::pow(Extended(10), -static_cast<int>(opt.digits) + 5);
      const Extended lo = bisect_eigenvalue(ax, lo_index, tol);
      const Extended hi = bisect_eigenvalue(ax, hi_index, tol);
      const Extended diff = hi - lo;
      below = diff <= Extended(100) * tol;
      split = static_cast<double>(diff);
    } else {
      below = !(split > 0);
    }
    fit.deltas.push_back(delta);
    fit.splittings.push_back(split);
    fit.extended.push_back(use_extended);
    fit.below_floor.push_back(below);
  }

  std::vector<double> x, y;
  for (std::size_t i = 0; i < fit.deltas.size(); ++i) {
    if (fit.below_floor[i]) continue;
    x.push_back(fit.deltas[i]);
    y.push_back(fit.splittings[i]);
  }
  if (x.size() >= 2) {
    const LineFit f = fit_loglog(x, y);
    fit.fitted_order = f.slope;
    fit.order_stderr = f.slope_stderr;
  }
  return fit;
}

/// The Ising surface-area chain as a banded family (k = 1, unit hopping).
inline MatrixFamily ising_surface_family(int N) {
  return [N](double delta) { return BandedSym<double>::from_tridiag(ising_effective_surface(N, delta)); };
}

/// Flat-diagonal chain 2 Delta + delta J of length M with uniform J.
inline MatrixFamily flat_chain_family(std::size_t M, double J = 0.5, double Delta = 1.0) {
  return [=](double delta) {
    SymTridiag t(std::vector<double>(M, 2 * Delta), std::vector<double>(M - 1, delta * J));
    return BandedSym<double>::from_tridiag(t);
  };
}

}  // namespace qmem

#endif
