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

#ifndef QMEM_FIT_HPP_
#define QMEM_FIT_HPP_

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "qmem/errors.hpp"

namespace qmem {

struct LineFit {
  double slope = 0;
  double intercept = 0;
  double slope_stderr = 0;  ///< NaN with only two points
};

/// Ordinary least squares y = slope * x + intercept.
inline LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  detail::require(x.size() == y.size(), "fit_line: x and y differ in length");
  detail::require(x.size() >= 2, "fit_line: need at least two points");
  const auto n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) mx += x[i], my += y[i];
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  detail::require(sxx > 0, "fit_line: x values are all equal");
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  if (x.size() > 2) {
    double ss = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double r = y[i] - f.slope * x[i] - f.intercept;
      ss += r * r;
    }
    f.slope_stderr = std::sqrt(ss / (n - 2) / sxx);
  } else {
    f.slope_stderr = std::numeric_limits<double>::quiet_NaN();
  }
  return f;
}

/// Fit of log y against log x; all values must be positive.
inline LineFit fit_loglog(std::span<const double> x, std::span<const double> y) {
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size() && i < y.size(); ++i) {
    detail::require(x[i] > 0 && y[i] > 0, "fit_loglog: values must be positive");
    lx.push_back(std::log(x[i]));
    ly.push_back(std::log(y[i]));
  }
  detail::require(x.size() == y.size(), "fit_loglog: x and y differ in length");
  return fit_line(lx, ly);
}

/// n points from lo to hi, evenly spaced in log.
inline std::vector<double> logspace(double lo, double hi, std::size_t n) {
  detail::require(lo > 0 && hi > lo && n >= 2, "logspace: need 0 < lo < hi and n >= 2");
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i)
    out[i] = std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * static_cast<double>(i) / static_cast<double>(n - 1));
  out.front() = lo;
  out.back() = hi;
  return out;
}

}  // namespace qmem

#endif
