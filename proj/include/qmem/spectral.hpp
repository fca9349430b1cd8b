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

// Symmetric eigensolvers.
//
//  * eigh_tridiag: implicit QL with Wilkinson shifts on each unreduced block,
//    accumulating eigenvectors. Used for every effective Hamiltonian.
//  * eigh_dense_symmetric: cyclic Jacobi rotations, independent of the QL
//    path so the two can check each other.
//  * householder_tridiagonalize: dense -> tridiagonal by reflections.
//  * count_eigenvalues_below / bisect_eigenvalue: inertia counting through a
//    banded LDL^T factorisation, templated on the real type so it also runs
//    in extended precision.

#ifndef QMEM_SPECTRAL_HPP_
#define QMEM_SPECTRAL_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <sstream>
#include <utility>
#include <vector>

#include "qmem/errors.hpp"
#include "qmem/matrix.hpp"

namespace qmem {

/// Spectrum of a SymTridiag plus the eigenvector entries at both ends.
/// Eigenvalues ascend; each eigenvector has its first nonzero entry positive.
struct SpectralData {
  std::vector<double> eigenvalues;
  std::vector<double> first_components;  ///< <lambda_i|1>
  std::vector<double> last_components;   ///< <M|lambda_i>
  std::vector<double> amplitudes;        ///< a_i = <M|lambda_i><lambda_i|1>

  std::size_t size() const { return eigenvalues.size(); }
};

/// Full eigen-decomposition: vectors(r, i) is component r of eigenvector i.
template <class Real>
struct EigenSystem {
  std::vector<Real> values;
  Matrix<Real> vectors;
};

inline constexpr int kQlMaxIterations = 60;

namespace detail {

// Implicit QL on d[lo..hi], e[lo..hi] (e[i] couples i and i+1, e[hi] = 0),
// rotating columns lo..hi of z.
inline void ql_block(std::vector<double> &d, std::vector<double> &e, Matrix<double> &z,
                     std::size_t lo, std::size_t hi) {
  const double eps = std::numeric_limits<double>::epsilon();
  for (std::size_t l = lo; l <= hi; ++l) {
    int iter = 0;
    std::size_t m;
    do {
      for (m = l; m < hi; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= eps * dd) break;
      }
      if (m != l) {
        if (iter++ == kQlMaxIterations) {
          std::ostringstream msg;
          msg << "eigh_tridiag: no convergence after " << kQlMaxIterations
              << " QL iterations for eigenvalue " << l << " (block " << lo << ".." << hi
              << ", residual off-diagonal " << e[l] << ")";
          throw NumericalError(msg.str());
        }
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
        double s = 1.0, c = 1.0, p = 0.0;
        bool underflow = false;
        for (std::size_t i = m; i-- > l;) {
          double f = s * e[i];
          const double b = c * e[i];
          r = std::hypot(f, g);
          e[i + 1] = r;
          if (r == 0.0) {
            d[i + 1] -= p;
            e[m] = 0.0;
            underflow = true;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
          for (std::size_t k = 0; k < z.rows; ++k) {
            f = z(k, i + 1);
            z(k, i + 1) = s * z(k, i) + c * f;
            z(k, i) = c * z(k, i) - s * f;
          }
        }
        if (underflow) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }
}

template <class Real>
void sort_and_fix_signs(EigenSystem<Real> &es) {
  const std::size_t n = es.values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return es.values[a] < es.values[b]; });
  EigenSystem<Real> out{std::vector<Real>(n), Matrix<Real>(es.vectors.rows, n)};
  for (std::size_t c = 0; c < n; ++c) {
    const std::size_t src = order[c];
    out.values[c] = es.values[src];
    int sign = 0;
    for (std::size_t r = 0; r < es.vectors.rows && sign == 0; ++r) {
      if (es.vectors(r, src) > Real(0)) sign = 1;
      if (es.vectors(r, src) < Real(0)) sign = -1;
    }
    if (sign == 0) sign = 1;
    for (std::size_t r = 0; r < es.vectors.rows; ++r) out.vectors(r, c) = Real(sign) * es.vectors(r, src);
  }
  es = std::move(out);
}

}  // namespace detail

/// Eigenvalues and orthonormal eigenvectors of a symmetric tridiagonal matrix.
/// The matrix is first split into unreduced blocks at exactly-zero couplings.
inline EigenSystem<double> tridiag_eigensystem(const SymTridiag &m) {
  m.validate();
  const std::size_t n = m.size();
  std::vector<double> d = m.diag;
  std::vector<double> e(n, 0.0);
  std::copy(m.offdiag.begin(), m.offdiag.end(), e.begin());
  Matrix<double> z = Matrix<double>::identity(n);
  std::size_t lo = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (i + 1 == n || e[i] == 0.0) {
      e[i] = 0.0;
      detail::ql_block(d, e, z, lo, i);
      lo = i + 1;
    }
  }
  EigenSystem<double> es{std::move(d), std::move(z)};
  detail::sort_and_fix_signs(es);
  return es;
}

inline SpectralData spectral_data(const EigenSystem<double> &es) {
  const std::size_t n = es.values.size();
  SpectralData s;
  s.eigenvalues = es.values;
  s.first_components.resize(n);
  s.last_components.resize(n);
  s.amplitudes.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    s.first_components[i] = es.vectors(0, i);
    s.last_components[i] = es.vectors(n - 1, i);
    s.amplitudes[i] = s.first_components[i] * s.last_components[i];
  }
  return s;
}

namespace detail {

// End components (first, last) of the unit eigenvector for eigenvalue
// lambda of an unreduced chain, from the twisted factorisation of
// T - lambda I. Each is a product of ratios taken in the growing direction,
// so components far below eps keep their relative accuracy.
inline std::pair<double, double> twisted_end_components(const SymTridiag &m, double lambda) {
  const std::size_t n = m.size();
  const double tiny = std::numeric_limits<double>::min() / std::numeric_limits<double>::epsilon();
  auto nonzero = [&](double v) { return v == 0.0 ? tiny : v; };
  std::vector<double> dp(n), dm(n), z(n);
  dp[0] = nonzero(m.diag[0] - lambda);
  for (std::size_t j = 0; j + 1 < n; ++j)
    dp[j + 1] = nonzero(m.diag[j + 1] - lambda - m.offdiag[j] * m.offdiag[j] / dp[j]);
  dm[n - 1] = nonzero(m.diag[n - 1] - lambda);
  for (std::size_t j = n - 1; j-- > 0;) dm[j] = nonzero(m.diag[j] - lambda - m.offdiag[j] * m.offdiag[j] / dm[j + 1]);
  std::size_t k = 0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < n; ++j) {
    const double gamma = std::abs(dp[j] + dm[j] - (m.diag[j] - lambda));
    if (gamma < best) best = gamma, k = j;
  }
  z[k] = 1;
  for (std::size_t j = k; j-- > 0;) z[j] = -m.offdiag[j] / dp[j] * z[j + 1];
  for (std::size_t j = k + 1; j < n; ++j) z[j] = -m.offdiag[j - 1] / dm[j] * z[j - 1];
  double norm = 0;
  for (double v : z) norm += v * v;
  norm = std::sqrt(norm);
  const double sign = z[0] < 0 ? -1.0 : 1.0;
  return {sign * z[0] / norm, sign * z[n - 1] / norm};
}

}  // namespace detail

namespace detail {

// QL end components below this are replaced by the twisted-factorisation
// value. Larger ones are kept: QL stays orthonormal inside tight clusters,
// where twisted vectors lose accuracy.
inline constexpr double kTwistedComponentCut = 1e-4;

inline SpectralData chain_spectrum(const SymTridiag &m) {
  SpectralData s = spectral_data(tridiag_eigensystem(m));
  const std::size_t n = m.size();
  if (n < 2 || std::find(m.offdiag.begin(), m.offdiag.end(), 0.0) != m.offdiag.end()) return s;
  for (std::size_t i = 0; i < n; ++i) {
    const bool small_first = std::abs(s.first_components[i]) < kTwistedComponentCut;
    const bool small_last = std::abs(s.last_components[i]) < kTwistedComponentCut;
    if (!small_first && !small_last) continue;
    const auto [first, last] = twisted_end_components(m, s.eigenvalues[i]);
    if (!std::isfinite(first) || !std::isfinite(last)) continue;
    // Both conventions make the first component positive, so signs agree.
    if (small_first) s.first_components[i] = first;
    if (small_last) s.last_components[i] = last;
    s.amplitudes[i] = s.first_components[i] * s.last_components[i];
  }
  return s;
}

// A persymmetric chain splits into reflection-even and reflection-odd
// chains. Solving them separately keeps near-degenerate even/odd pairs
// apart, so |last| = |first| holds for every eigenvector.
inline SpectralData persymmetric_spectrum(const SymTridiag &m) {
  const std::size_t n = m.size(), p = n / 2;
  const bool odd = n % 2 == 1;
  SymTridiag even, oddc;
  for (std::size_t i = 0; i < p; ++i) even.diag.push_back((m.diag[i] + m.diag[n - 1 - i]) / 2);
  oddc.diag = even.diag;
  for (std::size_t i = 0; i + 1 < p; ++i) even.offdiag.push_back((m.offdiag[i] + m.offdiag[n - 2 - i]) / 2);
  oddc.offdiag = even.offdiag;
  if (odd) {
    even.diag.push_back(m.diag[p]);
    even.offdiag.push_back(std::sqrt(2.0) * (m.offdiag[p - 1] + m.offdiag[p]) / 2);
  } else {
    const double mid = m.offdiag[p - 1];
    even.diag.back() += mid;
    oddc.diag.back() -= mid;
  }
  const SpectralData se = chain_spectrum(even), so = chain_spectrum(oddc);
  struct Level {
    double value, first, last;
  };
  std::vector<Level> levels;
  const double r = 1 / std::sqrt(2.0);
  for (std::size_t i = 0; i < se.size(); ++i) levels.push_back({se.eigenvalues[i], r * se.first_components[i], r * se.first_components[i]});
  for (std::size_t i = 0; i < so.size(); ++i) levels.push_back({so.eigenvalues[i], r * so.first_components[i], -r * so.first_components[i]});
  std::stable_sort(levels.begin(), levels.end(), [](const Level &a, const Level &b) { return a.value < b.value; });
  SpectralData s;
  for (const auto &l : levels) {
    s.eigenvalues.push_back(l.value);
    s.first_components.push_back(l.first);
    s.last_components.push_back(l.last);
    s.amplitudes.push_back(l.first * l.last);
  }
  return s;
}

}  // namespace detail

/// Spectral data of a chain. Small end components are recomputed to high
/// relative accuracy, and persymmetric chains (to a few ulps) are solved
/// sector by sector.
inline SpectralData eigh_tridiag(const SymTridiag &m) {
  m.validate();
  const double tol = 16 * std::numeric_limits<double>::epsilon() * std::max(1.0, m.norm());
  if (m.size() >= 2 && m.is_persymmetric(tol)) return detail::persymmetric_spectrum(m);
  return detail::chain_spectrum(m);
}

/// min_{i != j} |lambda_i - lambda_j| over the (sorted) spectrum.
inline double min_gap(const SpectralData &s) {
  detail::require(s.size() >= 2, "min_gap needs at least two eigenvalues");
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < s.size(); ++i)
    best = std::min(best, s.eigenvalues[i + 1] - s.eigenvalues[i]);
  return best;
}

inline constexpr std::size_t kDenseEigenMaxDim = 4096;

/// Cyclic Jacobi eigensolver for a dense symmetric matrix.
template <class Real>
EigenSystem<Real> eigh_dense_symmetric(const Matrix<Real> &input, int max_sweeps = 100) {
  using std::abs;
  using std::sqrt;
  const std::size_t n = input.rows;
  detail::require(n == input.cols && n >= 1, "eigh_dense_symmetric: matrix must be square");
  detail::require(n <= kDenseEigenMaxDim, "eigh_dense_symmetric: dimension over cap");
  Real scale(0);
  for (const auto &v : input.data) scale = std::max<Real>(scale, abs(v));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j)
      detail::require(abs(input(i, j) - input(j, i)) <= Real(1e-13) * std::max<Real>(Real(1), scale),
                      "eigh_dense_symmetric: matrix is not symmetric");

  Matrix<Real> a = input;
  Matrix<Real> v = Matrix<Real>::identity(n);
  const Real eps = std::numeric_limits<Real>::epsilon();
  for (int sweep = 0;; ++sweep) {
    if (sweep == max_sweeps) throw NumericalError("eigh_dense_symmetric: Jacobi sweeps did not converge");
    std::size_t rotations = 0;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const Real apq = a(p, q);
        // Negligible next to the larger diagonal entry (or to the matrix scale).
        if (abs(apq) <= eps * eps * scale || abs(apq) <= Real(0.01) * eps * std::max<Real>(abs(a(p, p)), abs(a(q, q))))
          continue;
        ++rotations;
        const Real theta = (a(q, q) - a(p, p)) / (Real(2) * apq);
        const Real t = (theta >= Real(0) ? Real(1) : Real(-1)) / (abs(theta) + sqrt(theta * theta + Real(1)));
        const Real c = Real(1) / sqrt(t * t + Real(1));
        const Real s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const Real akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const Real apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const Real vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
        a(p, q) = a(q, p) = Real(0);
      }
    }
    if (rotations == 0) break;
  }
  EigenSystem<Real> es{std::vector<Real>(n), std::move(v)};
  for (std::size_t i = 0; i < n; ++i) es.values[i] = a(i, i);
  detail::sort_and_fix_signs(es);
  return es;
}

/// Householder reduction of a dense symmetric matrix to tridiagonal form
/// with the same spectrum (first basis vector is kept fixed).
inline SymTridiag householder_tridiagonalize(const Matrix<double> &input) {
  const std::size_t n = input.rows;
  detail::require(n == input.cols && n >= 1, "householder_tridiagonalize: matrix must be square");
  Matrix<double> a = input;
  std::vector<double> w(n);
  for (std::size_t k = 0; k + 2 < n; ++k) {
    double alpha = 0;
    for (std::size_t i = k + 1; i < n; ++i) alpha += a(i, k) * a(i, k);
    alpha = std::sqrt(alpha);
    if (alpha == 0.0) continue;
    if (a(k + 1, k) > 0) alpha = -alpha;
    std::fill(w.begin(), w.end(), 0.0);
    w[k + 1] = a(k + 1, k) - alpha;
    for (std::size_t i = k + 2; i < n; ++i) w[i] = a(i, k);
    double wn = 0;
    for (std::size_t i = k + 1; i < n; ++i) wn += w[i] * w[i];
    if (wn == 0.0) continue;
    // A <- H A H with H = I - 2 w w^T / (w^T w).
    std::vector<double> p(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) p[i] += a(i, j) * w[j];
    for (auto &x : p) x *= 2.0 / wn;
    double wp = 0;
    for (std::size_t i = k + 1; i < n; ++i) wp += w[i] * p[i];
    const double kk = wp / wn;
    std::vector<double> q(n);
    for (std::size_t i = 0; i < n; ++i) q[i] = p[i] - kk * w[i];
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) a(i, j) -= w[i] * q[j] + q[i] * w[j];
  }
  SymTridiag t;
  t.diag.resize(n);
  t.offdiag.resize(n - 1);
  for (std::size_t i = 0; i < n; ++i) t.diag[i] = a(i, i);
  for (std::size_t i = 0; i + 1 < n; ++i) t.offdiag[i] = a(i + 1, i);
  return t;
}

/// Number of eigenvalues strictly below x, by Sylvester inertia of the
/// LDL^T factorisation of (A - x I) restricted to the band.
template <class Real>
std::size_t count_eigenvalues_below(const BandedSym<Real> &a, const Real &x) {
  using std::abs;
  const std::size_t n = a.n, k = a.k;
  Real scale(0);
  for (const auto &band : a.bands)
    for (const auto &v : band) scale = std::max<Real>(scale, abs(v));
  const Real tiny = std::numeric_limits<Real>::epsilon() * std::max<Real>(scale, Real(1)) *
                    std::numeric_limits<Real>::epsilon();
  // l(i, d): multiplier L(i, i - d) for d = 1..k; dvals[i] the pivots.
  std::vector<Real> dvals(n);
  std::vector<std::vector<Real>> l(n, std::vector<Real>(k + 1, Real(0)));
  std::size_t negatives = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t jlo = i >= k ? i - k : 0;
    for (std::size_t j = jlo; j < i; ++j) {
      // L(i, j) = (A(i, j) - sum_{m < j} L(i, m) L(j, m) d_m) / d_j
      Real s = a.at(i, j);
      const std::size_t mlo = std::max(jlo, j >= k ? j - k : 0);
      for (std::size_t m = mlo; m < j; ++m) s -= l[i][i - m] * l[j][j - m] * dvals[m];
      l[i][i - j] = s / dvals[j];
    }
    Real s = a.at(i, i) - x;
    for (std::size_t m = jlo; m < i; ++m) s -= l[i][i - m] * l[i][i - m] * dvals[m];
    if (abs(s) < tiny) s = tiny;
    dvals[i] = s;
    if (s < Real(0)) ++negatives;
  }
  return negatives;
}

/// Gershgorin interval containing the spectrum.
template <class Real>
std::pair<Real, Real> gershgorin_bounds(const BandedSym<Real> &a) {
  using std::abs;
  Real lo = a.at(0, 0), hi = a.at(0, 0);
  for (std::size_t i = 0; i < a.n; ++i) {
    Real r(0);
    const std::size_t jlo = i >= a.k ? i - a.k : 0;
    const std::size_t jhi = std::min(a.n - 1, i + a.k);
    for (std::size_t j = jlo; j <= jhi; ++j)
      if (j != i) r += abs(a.at(i, j));
    lo = std::min<Real>(lo, a.at(i, i) - r);
    hi = std::max<Real>(hi, a.at(i, i) + r);
  }
  return {lo, hi};
}

/// The index-th smallest eigenvalue (0-based) by bisection to absolute tolerance tol.
template <class Real>
Real bisect_eigenvalue(const BandedSym<Real> &a, std::size_t index, const Real &tol) {
  detail::require(index < a.n, "bisect_eigenvalue: index out of range");
  auto [lo, hi] = gershgorin_bounds(a);
  const Real pad = (hi - lo) * Real(1e-3) + Real(1e-30);
  lo -= pad;
  hi += pad;
  for (int iter = 0; iter < 100000 && hi - lo > tol; ++iter) {
    const Real mid = (lo + hi) / Real(2);
    if (mid <= lo || mid >= hi) break;
    if (count_eigenvalues_below(a, mid) > index) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return (lo + hi) / Real(2);
}

}  // namespace qmem

#endif
