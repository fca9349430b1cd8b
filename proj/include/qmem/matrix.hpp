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

#ifndef QMEM_MATRIX_HPP_
#define QMEM_MATRIX_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "qmem/errors.hpp"

namespace qmem {

/// Row-major dense matrix.
template <class Real>
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<Real> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, Real(0)) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = Real(1);
    return m;
  }

  Real &operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  const Real &operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
};

/// Real symmetric tridiagonal matrix. offdiag[i] couples i and i+1.
struct SymTridiag {
  std::vector<double> diag;
  std::vector<double> offdiag;

  SymTridiag() = default;
  SymTridiag(std::vector<double> d, std::vector<double> e) : diag(std::move(d)), offdiag(std::move(e)) {
    validate();
  }

  std::size_t size() const { return diag.size(); }

  void validate() const {
    detail::require(!diag.empty(), "tridiagonal matrix must have M >= 1");
    detail::require(offdiag.size() + 1 == diag.size(), "tridiagonal matrix needs M-1 off-diagonal entries");
  }

  /// Infinity norm (max absolute row sum).
  double norm() const {
    double best = 0;
    for (std::size_t i = 0; i < size(); ++i) {
      double row = std::abs(diag[i]);
      if (i > 0) row += std::abs(offdiag[i - 1]);
      if (i + 1 < size()) row += std::abs(offdiag[i]);
      best = std::max(best, row);
    }
    return best;
  }

  /// Invariant under simultaneous reversal of rows and columns.
  bool is_persymmetric(double tol) const {
    const std::size_t m = size();
    for (std::size_t i = 0; i < m; ++i) {
      if (std::abs(diag[i] - diag[m - 1 - i]) > tol) return false;
    }
    for (std::size_t i = 0; i + 1 < m; ++i) {
      if (std::abs(offdiag[i] - offdiag[m - 2 - i]) > tol) return false;
    }
    return true;
  }

  Matrix<double> to_dense() const {
    Matrix<double> a(size(), size());
    for (std::size_t i = 0; i < size(); ++i) {
      a(i, i) = diag[i];
      if (i + 1 < size()) a(i, i + 1) = a(i + 1, i) = offdiag[i];
    }
    return a;
  }
};

/// Symmetric band matrix: bands[d][i] holds entry (i + d, i), d = 0..k.
template <class Real>
struct BandedSym {
  std::size_t n = 0;
  std::size_t k = 0;
  std::vector<std::vector<Real>> bands;

  BandedSym() = default;
  BandedSym(std::size_t size, std::size_t bandwidth) : n(size), k(bandwidth) {
    detail::require(size >= 1, "banded matrix must be non-empty");
    detail::require(bandwidth < size || (size == 1 && bandwidth == 0), "band width must be < M");
    for (std::size_t d = 0; d <= bandwidth; ++d) bands.emplace_back(size - d, Real(0));
  }

  static BandedSym from_tridiag(const SymTridiag &t) {
    BandedSym b(t.size(), t.size() > 1 ? 1 : 0);
    for (std::size_t i = 0; i < t.size(); ++i) b.bands[0][i] = Real(t.diag[i]);
    for (std::size_t i = 0; i + 1 < t.size(); ++i) b.bands[1][i] = Real(t.offdiag[i]);
    return b;
  }

  Real at(std::size_t i, std::size_t j) const {
    if (i < j) std::swap(i, j);
    const std::size_t d = i - j;
    return d <= k ? bands[d][j] : Real(0);
  }

  /// Converts entries to another real type.
  template <class Other>
  BandedSym<Other> cast() const {
    BandedSym<Other> out(n, k);
    for (std::size_t d = 0; d <= k; ++d)
      for (std::size_t i = 0; i < bands[d].size(); ++i) out.bands[d][i] = Other(bands[d][i]);
    return out;
  }

  Matrix<Real> to_dense() const {
    Matrix<Real> a(n, n);
    for (std::size_t d = 0; d <= k; ++d) {
      for (std::size_t i = 0; i + d < n; ++i) a(i + d, i) = a(i, i + d) = bands[d][i];
    }
    return a;
  }
};

}  // namespace qmem

#endif
