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

// qmem run --config FILE [--experiment NAME] [--out DIR] [--seed K] [--svg]
// qmem list
//
// Exit status: 0 all checks passed, 1 config error, 2 a check failed,
// 3 numerical failure.

#include <chrono>
#include <cstdint>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "qmem/config.hpp"
#include "qmem/errors.hpp"
#include "qmem/experiments.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitCheckFailed = 2;
constexpr int kExitNumerical = 3;

int list_experiments() {
  for (const auto &e : qmem::kExperimentInfo) {
    std::cout << e.name << "\n  " << e.description << "\n  keys:    " << e.keys << "\n  outputs: " << e.outputs
              << "\n";
  }
  std::cout << "\ncommon keys: experiment N_range delta Delta t_factor threshold delta_min delta_points band\n"
               "             precision digits seed output_dir\n";
  return kExitOk;
}

int run(const std::string &config_path, const std::optional<std::string> &experiment,
        const std::optional<std::string> &out, const std::optional<std::uint64_t> &seed, bool svg) {
  qmem::ExperimentConfig config;
  try {
    qmem::ConfigMap m = config_path.empty() ? qmem::ConfigMap{} : qmem::read_config_file(config_path);
    if (experiment) m["experiment"] = *experiment;
    if (out) m["output_dir"] = *out;
    if (seed) m["seed"] = std::to_string(*seed);
    config = qmem::make_config(m);
  } catch (const qmem::UsageError &e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  }

  const auto start = std::chrono::steady_clock::now();
  qmem::ExperimentResult result;
  try {
    result = qmem::run_experiment(config);
  } catch (const qmem::NumericalError &e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const qmem::UsageError &e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  try {
    qmem::write_outputs(result, config, config.output_dir, svg, seconds);
  } catch (const std::exception &e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kExitConfig;
  }

  for (const auto &c : result.checks) {
    std::cout << (c.passed ? "ok   " : "FAIL ") << c.name << " = " << qmem::format_double(c.value) << "\n";
  }
  std::cout << config.experiment << ": " << (result.passed() ? "all checks passed" : "check failed") << " ("
            << seconds << " s) -> " << config.output_dir << "\n";
  return result.passed() ? kExitOk : kExitCheckFailed;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Error-string effective Hamiltonians, engineered transfer and splitting experiments"};
  app.require_subcommand(1);

  auto *run_cmd = app.add_subcommand("run", "Run one experiment");
  std::string config_path;
  std::optional<std::string> experiment, out;
  std::optional<std::uint64_t> seed;
  bool svg = false;
  run_cmd->add_option("--config", config_path, "Config file (key = value lines)");
  run_cmd->add_option("--experiment", experiment, "Experiment name, overrides the config file");
  run_cmd->add_option("--out", out, "Output directory, overrides the config file");
  run_cmd->add_option("--seed", seed, "Random seed, overrides the config file");
  run_cmd->add_flag("--svg", svg, "Also write SVG plots");

  app.add_subcommand("list", "List experiments and their parameters");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (app.got_subcommand("list")) return list_experiments();
    return run(config_path, experiment, out, seed, svg);
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
}
