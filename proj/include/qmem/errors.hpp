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

#ifndef QMEM_ERRORS_HPP_
#define QMEM_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace qmem {

/// Caller violated a precondition (bad sizes, indices, parameters).
struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// An iterative or reconstruction routine failed numerically.
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

inline void require(bool ok, const std::string &what) {
  if (!ok) {
    throw UsageError(what);
  }
}

}  // namespace detail

}  // namespace qmem

#endif
