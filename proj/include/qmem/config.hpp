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

// Experiment configuration: "key = value" lines, '#' starts a comment.
//
//   experiment   = toric-scaling
//   N_range      = 16, 32, 64       # or 16..64, or 16..64:8
//   delta        = 0.1
//   Delta        = 1.0
//   t_factor     = 50               # designed time = t_factor * pi / min_gap
//   threshold    = 0.999
//   delta_min    = 0.01             # splitting / plateau sweeps
//   delta_points = 6
//   band         = 2
//   precision    = auto             # auto | double | extended
//   digits       = 50
//   seed         = 1
//   output_dir   = results

#ifndef QMEM_CONFIG_HPP_
#define QMEM_CONFIG_HPP_

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "qmem/errors.hpp"

namespace qmem {

/// Invalid configuration; field() names the offending key.
class ConfigError : public UsageError {
 public:
  ConfigError(std::string field, const std::string &what)
      : UsageError("config field '" + field + "': " + what), field_(std::move(field)) {}
  const std::string &field() const { return field_; }

 private:
  std::string field_;
};

inline constexpr std::array<std::string_view, 9> kExperimentNames = {
    "toric-scaling", "toric-retune",     "toric-transfer", "ising-splitting", "ising-plateau",
    "banded-splitting", "oracle-verify", "duality-verify", "two-excitation",
};

inline bool is_experiment(std::string_view name) {
  return std::find(kExperimentNames.begin(), kExperimentNames.end(), name) != kExperimentNames.end();
}

struct ExperimentConfig {
  std::string experiment;
  std::vector<int> N_range;
  double delta = 0.1;
  double Delta = 1.0;
  double t_factor = 50;
  double threshold = 0.999;
  std::optional<double> delta_min;
  int delta_points = 6;
  int band = 2;
  std::string precision = "auto";
  int digits = 50;
  std::uint64_t seed = 1;
  std::string output_dir = "results";
};

using ConfigMap = std::map<std::string, std::string>;

namespace detail {

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

inline double parse_double(const std::string &field, const std::string &v) {
  std::size_t used = 0;
  double x = 0;
  try {
    x = std::stod(v, &used);
  } catch (const std::exception &) {
    throw ConfigError(field, "expected a number, got '" + v + "'");
  }
  if (used != v.size()) throw ConfigError(field, "expected a number, got '" + v + "'");
  return x;
}

inline long long parse_int(const std::string &field, const std::string &v) {
  std::size_t used = 0;
  long long x = 0;
  try {
    x = std::stoll(v, &used);
  } catch (const std::exception &) {
    throw ConfigError(field, "expected an integer, got '" + v + "'");
  }
  if (used != v.size()) throw ConfigError(field, "expected an integer, got '" + v + "'");
  return x;
}

}  // namespace detail

/// "a, b, c", "a..b" or "a..b:step" (inclusive).
inline std::vector<int> parse_int_range(const std::string &field, const std::string &text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = detail::trim(item);
    if (item.empty()) throw ConfigError(field, "empty list entry");
    const auto dots = item.find("..");
    if (dots == std::string::npos) {
      out.push_back(static_cast<int>(detail::parse_int(field, item)));
      continue;
    }
    const auto colon = item.find(':', dots);
    const long long lo = detail::parse_int(field, detail::trim(item.substr(0, dots)));
    const long long hi = detail::parse_int(
        field, detail::trim(item.substr(dots + 2, colon == std::string::npos ? std::string::npos : colon - dots - 2)));
    const long long step = colon == std::string::npos ? 1 : detail::parse_int(field, detail::trim(item.substr(colon + 1)));
    if (step <= 0) throw ConfigError(field, "range step must be positive");
    if (hi < lo) throw ConfigError(field, "range end below range start");
    if ((hi - lo) / step > 100000) throw ConfigError(field, "range too long");
    for (long long v = lo; v <= hi; v += step) out.push_back(static_cast<int>(v));
  }
  if (out.empty()) throw ConfigError(field, "empty list");
  return out;
}

/// Parses "key = value" lines. Later keys override earlier ones.
inline ConfigMap parse_config_text(const std::string &text) {
  ConfigMap m;
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno), "expected 'key = value', got '" + line + "'");
    const std::string key = detail::trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError("line " + std::to_string(lineno), "missing key");
    m[key] = detail::trim(line.substr(eq + 1));
  }
  return m;
}

inline ConfigMap read_config_file(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

/// Default N values for each experiment.
inline std::vector<int> default_N_range(const std::string &experiment) {
  if (experiment == "toric-scaling") return {16, 32, 64, 128, 256};
  if (experiment == "toric-retune") return {8, 16, 32, 64};
  if (experiment == "toric-transfer") return {20};
  if (experiment == "ising-splitting") return {3, 4};
  if (experiment == "ising-plateau") return {4, 5};
  if (experiment == "banded-splitting") return {4};
  if (experiment == "duality-verify") return {3, 4, 5};
  return {3};
}

/// Lower end of the delta sweep when delta_min is not given.
inline double default_delta_min(const ExperimentConfig &c) {
  return c.experiment == "ising-plateau" ? c.delta / 100 : c.delta / 10;
}

inline double effective_delta_min(const ExperimentConfig &c) { return c.delta_min.value_or(default_delta_min(c)); }

/// Builds and validates a config. Every field is checked before returning.
inline ExperimentConfig make_config(const ConfigMap &m) {
  ExperimentConfig c;
  static const std::vector<std::string> known = {"experiment", "N_range",   "delta",     "Delta",  "t_factor",
                                                 "threshold",  "delta_min", "delta_points", "band", "precision",
                                                 "digits",     "seed",      "output_dir"};
  for (const auto &[k, v] : m) {
    if (std::find(known.begin(), known.end(), k) == known.end()) throw ConfigError(k, "unknown key");
  }
  auto get = [&](const std::string &k) -> const std::string * {
    auto it = m.find(k);
    return it == m.end() ? nullptr : &it->second;
  };

  const std::string *exp = get("experiment");
  if (!exp || exp->empty()) throw ConfigError("experiment", "missing");
  if (!is_experiment(*exp)) throw ConfigError("experiment", "unknown experiment '" + *exp + "'");
  c.experiment = *exp;

  c.N_range = get("N_range") ? parse_int_range("N_range", *get("N_range")) : default_N_range(c.experiment);
  if (auto v = get("delta")) c.delta = detail::parse_double("delta", *v);
  if (auto v = get("Delta")) c.Delta = detail::parse_double("Delta", *v);
  if (auto v = get("t_factor")) c.t_factor = detail::parse_double("t_factor", *v);
  if (auto v = get("threshold")) c.threshold = detail::parse_double("threshold", *v);
  if (auto v = get("delta_min")) c.delta_min = detail::parse_double("delta_min", *v);
  if (auto v = get("delta_points")) c.delta_points = static_cast<int>(detail::parse_int("delta_points", *v));
  if (auto v = get("band")) c.band = static_cast<int>(detail::parse_int("band", *v));
  if (auto v = get("precision")) c.precision = *v;
  if (auto v = get("digits")) c.digits = static_cast<int>(detail::parse_int("digits", *v));
  if (auto v = get("seed")) {
    const long long s = detail::parse_int("seed", *v);
    if (s < 0) throw ConfigError("seed", "must be non-negative");
    c.seed = static_cast<std::uint64_t>(s);
  }
  if (auto v = get("output_dir")) c.output_dir = *v;

  if (!(c.delta > 0)) throw ConfigError("delta", "must be positive");
  if (!(c.Delta > 0)) throw ConfigError("Delta", "must be positive");
  if (!(c.t_factor >= 10)) throw ConfigError("t_factor", "must be >= 10 (retuning needs t >= 10 pi / min_gap)");
  if (!(c.threshold > 0 && c.threshold <= 1)) throw ConfigError("threshold", "must lie in (0, 1]");
  if (c.delta_min && !(*c.delta_min > 0 && *c.delta_min < c.delta))
    throw ConfigError("delta_min", "must satisfy 0 < delta_min < delta");
  if (c.delta_points < 5) throw ConfigError("delta_points", "need at least 5 points for a fit");
  if (c.band < 1) throw ConfigError("band", "must be >= 1");
  if (c.precision != "auto" && c.precision != "double" && c.precision != "extended")
    throw ConfigError("precision", "must be auto, double or extended");
  if (c.digits < 20 || c.digits > 1000) throw ConfigError("digits", "must lie in [20, 1000]");
  if (c.output_dir.empty()) throw ConfigError("output_dir", "must not be empty");

  int n_min = 2, n_max = 4096;
  const auto &e = c.experiment;
  if (e == "toric-scaling" || e == "toric-retune" || e == "toric-transfer") n_min = 4;
  if (e == "ising-splitting") n_min = 3, n_max = 6;
  if (e == "ising-plateau" || e == "banded-splitting") n_min = 4, n_max = 6;
  if (e == "oracle-verify" || e == "two-excitation") n_min = 3, n_max = 3;
  if (e == "duality-verify") n_min = 3, n_max = 32;
  for (int N : c.N_range) {
    if (N < n_min || N > n_max)
      throw ConfigError("N_range", "N = " + std::to_string(N) + " outside [" + std::to_string(n_min) + ", " +
                                       std::to_string(n_max) + "] for " + e);
  }
  if ((e == "toric-scaling" || e == "toric-retune") && c.N_range.size() < 2)
    throw ConfigError("N_range", "a scaling fit needs at least two sizes");
  if (e == "banded-splitting") {
    for (int N : c.N_range)
      if (static_cast<std::size_t>(c.band) >= static_cast<std::size_t>(N * (N - 1) - 2))
        throw ConfigError("band", "band width must be below the chain length");
  }
  return c;
}

/// Config echo used in summaries, in key order.
inline ConfigMap config_echo(const ExperimentConfig &c) {
  std::ostringstream range;
  for (std::size_t i = 0; i < c.N_range.size(); ++i) range << (i ? "," : "") << c.N_range[i];
  auto num = [](double x) {
    std::ostringstream s;
    s.precision(17);
    s << x;
    return s.str();
  };
  return {{"experiment", c.experiment},
          {"N_range", range.str()},
          {"delta", num(c.delta)},
          {"Delta", num(c.Delta)},
          {"t_factor", num(c.t_factor)},
          {"threshold", num(c.threshold)},
          {"delta_min", num(effective_delta_min(c))},
          {"delta_points", std::to_string(c.delta_points)},
          {"band", std::to_string(c.band)},
          {"precision", c.precision},
          {"digits", std::to_string(c.digits)},
          {"seed", std::to_string(c.seed)},
          {"output_dir", c.output_dir}};
}

}  // namespace qmem

#endif
