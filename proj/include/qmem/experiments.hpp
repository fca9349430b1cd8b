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

// Named experiments. Each returns tables, checks and a JSON summary; the
// output is a pure function of the config (and seed).

#ifndef QMEM_EXPERIMENTS_HPP_
#define QMEM_EXPERIMENTS_HPP_

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <ctime>
#include <filesystem>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "qmem/config.hpp"
#include "qmem/effham.hpp"
#include "qmem/fit.hpp"
#include "qmem/iep.hpp"
#include "qmem/io.hpp"
#include "qmem/lattice.hpp"
#include "qmem/oracle.hpp"
#include "qmem/perturb.hpp"
#include "qmem/spectral.hpp"
#include "qmem/transfer.hpp"

namespace qmem {

inline constexpr std::string_view kVersion = "0.1.0";

struct Check {
  std::string name;
  double value = 0;
  double lower = -std::numeric_limits<double>::infinity();
  double upper = std::numeric_limits<double>::infinity();
  bool passed = false;

  static Check within(std::string name, double value, double lower, double upper) {
    return {std::move(name), value, lower, upper, value >= lower && value <= upper};
  }
  static Check at_most(std::string name, double value, double upper) {
    return within(std::move(name), value, -std::numeric_limits<double>::infinity(), upper);
  }
  static Check at_least(std::string name, double value, double lower) {
    return within(std::move(name), value, lower, std::numeric_limits<double>::infinity());
  }
};

struct ExperimentResult {
  std::string experiment;
  std::vector<Table> tables;
  std::vector<Check> checks;
  std::vector<Plot> plots;
  nlohmann::ordered_json results = nlohmann::ordered_json::object();

  bool passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check &c) { return c.passed; });
  }
};

/// Schema of `list`: experiment name, config keys it reads, and CSV files.
struct ExperimentInfo {
  std::string_view name;
  std::string_view description;
  std::string_view keys;
  std::string_view outputs;
};

inline constexpr std::array<ExperimentInfo, 9> kExperimentInfo = {{
    {"toric-scaling", "min gap of the uniform chain and Christandl transfer time against N",
     "N_range delta Delta threshold", "scaling.csv(N,M,uniform_min_gap,christandl_min_gap,christandl_transfer_time,"
                                      "christandl_peak_fidelity)"},
    {"toric-retune", "retuned uniform chains at t0*{1,2,4}: fidelity and coupling shifts",
     "N_range delta Delta t_factor",
     "retune.csv(N,t_multiplier,t,fidelity,max_coupling_shift,max_diagonal_shift,max_abs_J,max_abs_B,"
     "persymmetry_error,phase_condition_error,phase_condition_floor,band_mean_coupling_shift)"},
    {"toric-transfer", "fidelity trace of a retuned uniform chain", "N_range delta Delta t_factor threshold",
     "transfer.csv(N,designed_t,transfer_time,relative_deviation,fidelity_at_designed_t,peak_fidelity,f_max,min_gap) "
     "trace_N<N>.csv(t,fidelity)"},
    {"ising-splitting", "splitting order of the lowest Ising pair, with the flat-chain contrast",
     "N_range delta delta_min delta_points precision digits",
     "splitting.csv(model,N,M,delta,splitting,precision,below_floor) fits.csv(model,N,M,predicted_order,"
     "fitted_order,order_stderr)"},
    {"ising-plateau", "first-order plateau spectrum against the exact chain spectrum",
     "N_range delta delta_min delta_points",
     "plateau.csv(N,delta,index,formula,numerical) residual.csv(N,delta,max_residual) fits.csv(N,residual_slope)"},
    {"banded-splitting", "splitting order with random mirror-symmetric bands of width k",
     "N_range band delta delta_min delta_points precision digits seed",
     "bands.csv(N,d,i,value) splitting.csv(N,k,delta,splitting,precision,below_floor) fits.csv(N,k,M,"
     "predicted_order,fitted_order,order_stderr)"},
    {"oracle-verify", "exact statevector checks on the N=3 toric code and Ising model",
     "delta Delta t_factor seed", "report.csv(check,value,lower,upper,passed)"},
    {"duality-verify", "symbolic conjugation of the hopping perturbation by the CNOT duality circuit",
     "N_range delta seed", "duality.csv(N,variant,conjugated_terms,expected_terms,mismatches,max_coefficient_error,"
                           "exact) mismatches.csv(N,variant,detail) occupations.csv(state,site,occupation)"},
    {"two-excitation", "two-string transfer under a retuned perturbation", "delta Delta t_factor",
     "two_excitation.csv(N,i,t,fidelity)"},
}};

namespace detail {

// 53 random bits mapped to [-1, 1); independent of the standard library's
// distribution implementations.
inline double signed_unit(std::mt19937_64 &rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-52 - 1.0;
}

inline SymTridiag uniform_toric_chain(int N, const ExperimentConfig &c) {
  const auto M = static_cast<std::size_t>(N - 1);
  const std::vector<double> J(M - 1, 0.5), B(M, 0.0);
  return toric_effective(N, c.Delta, c.delta, J, B);
}

inline SplittingOptions splitting_options(const ExperimentConfig &c) {
  SplittingOptions o;
  o.precision = c.precision == "double" ? Precision::kDouble
                : c.precision == "extended" ? Precision::kExtended
                                            : Precision::kAuto;
  o.digits = static_cast<unsigned>(c.digits);
  return o;
}

inline std::vector<double> delta_sweep(const ExperimentConfig &c) {
  return logspace(effective_delta_min(c), c.delta, static_cast<std::size_t>(c.delta_points));
}

inline nlohmann::ordered_json json_number(double x) {
  if (std::isfinite(x)) return x;
  return format_double(x);
}

inline void add_splitting_rows(Table &t, const std::vector<Cell> &prefix, const SplittingFit &f) {
  for (std::size_t i = 0; i < f.deltas.size(); ++i) {
    std::vector<Cell> row = prefix;
    row.emplace_back(f.deltas[i]);
    row.emplace_back(f.splittings[i]);
    row.emplace_back(std::string(f.extended[i] ? "extended" : "double"));
    row.emplace_back(std::int64_t{f.below_floor[i] ? 1 : 0});
    t.add(std::move(row));
  }
}

/// Retuned uniform chain at t = t_factor * pi / min_gap, with the
/// perturbation coefficients that realise it on the toric lattice.
struct DesignedChain {
  SymTridiag chain;
  double t = 0;
  ToricCoefficients coefficients;
};

inline DesignedChain designed_toric_chain(int N, const ExperimentConfig &c) {
  const SymTridiag m = uniform_toric_chain(N, c);
  const double t = c.t_factor * std::numbers::pi / min_gap(eigh_tridiag(m));
  RetunedChain rc = retune_chain(m, t);
  DesignedChain d{rc.chain, t, toric_coefficients(rc.chain, c.Delta, c.delta)};
  return d;
}

}  // namespace detail

inline ExperimentResult run_toric_scaling(const ExperimentConfig &c) {
  ExperimentResult r;
  Table t{"scaling",
          {"N", "M", "uniform_min_gap", "christandl_min_gap", "christandl_transfer_time", "christandl_peak_fidelity"}};
  std::vector<double> Ns, gaps, times;
  double worst_peak = 1;
  int unreached = 0;
  for (int N : c.N_range) {
    const double gap = min_gap(eigh_tridiag(detail::uniform_toric_chain(N, c)));
    const std::vector<double> J = christandl_couplings(N), B(static_cast<std::size_t>(N - 1), 0.0);
    const SpectralData s = eigh_tridiag(toric_effective(N, c.Delta, c.delta, J, B));
    const double cgap = min_gap(s);
    const TransferResult tr = measure_transfer_time(s, c.threshold, 1.5 * std::numbers::pi / cgap);
    const double tt = tr.transfer_time.value_or(std::numeric_limits<double>::quiet_NaN());
    if (!tr.reached()) ++unreached;
    worst_peak = std::min(worst_peak, tr.peak_fidelity);
    t.add({std::int64_t{N}, std::int64_t{N - 1}, gap, cgap, tt, tr.peak_fidelity});
    Ns.push_back(N);
    gaps.push_back(gap);
    if (tr.reached()) times.push_back(tt);
  }
  const LineFit gap_fit = fit_loglog(Ns, gaps);
  r.results["gap_exponent"] = gap_fit.slope;
  r.results["gap_exponent_stderr"] = detail::json_number(gap_fit.slope_stderr);
  r.checks.push_back(Check::within("gap_exponent", gap_fit.slope, -2.1, -1.9));
  r.checks.push_back(Check::at_most("christandl_transfer_not_reached", unreached, 0));
  r.checks.push_back(Check::at_least("christandl_min_peak_fidelity", worst_peak, 1 - 1e-9));
  if (unreached == 0) {
    const LineFit time_fit = fit_loglog(Ns, times);
    r.results["transfer_time_exponent"] = time_fit.slope;
    r.results["transfer_time_exponent_stderr"] = detail::json_number(time_fit.slope_stderr);
    r.checks.push_back(Check::within("transfer_time_exponent", time_fit.slope, 0.95, 1.05));
  }
  r.plots.push_back({"scaling", "Uniform-chain gap and Christandl transfer time", "N", "value", true, true,
                     {{"uniform min gap", Ns, gaps}, {"Christandl transfer time", Ns, times}}});
  r.tables.push_back(std::move(t));
  return r;
}

inline constexpr int kShiftBand = 16;

inline ExperimentResult run_toric_retune(const ExperimentConfig &c) {
  ExperimentResult r;
  Table t{"retune",
          {"N", "t_multiplier", "t", "fidelity", "max_coupling_shift", "max_diagonal_shift", "max_abs_J", "max_abs_B",
           "persymmetry_error", "phase_condition_error", "phase_condition_floor", "band_mean_coupling_shift"}};
  const std::vector<double> multipliers = {1, 2, 4};
  std::vector<double> mean_shift(multipliers.size(), 0.0);
  double worst_f = 1, worst_budget = 0, worst_persym = 0, worst_phase_excess = 0, worst_phase = 0;
  for (int N : c.N_range) {
    const SymTridiag m = detail::uniform_toric_chain(N, c);
    const SpectralData s = eigh_tridiag(m);
    const double t0 = c.t_factor * std::numbers::pi / min_gap(s);
    for (std::size_t k = 0; k < multipliers.size(); ++k) {
      const double tk = t0 * multipliers[k];
      const RetunedChain rc = retune_chain(m, tk);
      const double F = fidelity(eigh_tridiag(rc.chain), tk);
      const ToricCoefficients co = toric_coefficients(rc.chain, c.Delta, c.delta);
      double maxJ = 0, maxB = 0, persym = 0;
      for (double v : co.J) maxJ = std::max(maxJ, std::abs(v));
      for (double v : co.B) maxB = std::max(maxB, std::abs(v));
      const std::size_t M = rc.chain.size();
      for (std::size_t i = 0; i < M; ++i) persym = std::max(persym, std::abs(rc.chain.diag[i] - rc.chain.diag[M - 1 - i]));
      for (std::size_t i = 0; i + 1 < M; ++i)
        persym = std::max(persym, std::abs(rc.chain.offdiag[i] - rc.chain.offdiag[M - 2 - i]));
      const double phase = phase_condition_residual(rc.plan, s.amplitudes);
      // Rounding of the stored eigenvalues alone gives an error of order ulp(lambda) * t.
      double lmax = 0;
      for (double l : rc.plan.retuned) lmax = std::max(lmax, std::abs(l));
      const double floor = std::max(1e-10, 4 * std::numeric_limits<double>::epsilon() * lmax * tk);
      // The per-level rounding is erratic in t, so the shift is averaged over
      // a band of times just above tk and scaled back to tk.
      double band = 0;
      for (int j = 0; j < kShiftBand; ++j) {
        const double tj = tk * (1 + 0.25 * j / kShiftBand);
        band += retune_chain(m, tj).max_coupling_shift * (tj / tk) / kShiftBand;
      }
      t.add({std::int64_t{N}, multipliers[k], tk, F, rc.max_coupling_shift, rc.max_diagonal_shift, maxJ, maxB, persym,
             phase, floor, band});
      mean_shift[k] += band / static_cast<double>(c.N_range.size());
      worst_phase_excess = std::max(worst_phase_excess, phase / floor);
      worst_f = std::min(worst_f, F);
      worst_budget = std::max({worst_budget, maxJ, maxB});
      worst_persym = std::max(worst_persym, persym);
      worst_phase = std::max(worst_phase, phase);
    }
  }
  const LineFit shift_fit = fit_loglog(multipliers, mean_shift);
  r.results["shift_exponent"] = shift_fit.slope;
  r.results["shift_exponent_stderr"] = detail::json_number(shift_fit.slope_stderr);
  r.results["mean_max_coupling_shift"] = mean_shift;
  r.checks.push_back(Check::at_least("min_fidelity_at_designed_t", worst_f, 1 - 1e-6));
  r.checks.push_back(Check::within("shift_exponent", shift_fit.slope, -1.2, -0.8));
  r.checks.push_back(Check::at_most("max_coefficient_magnitude", worst_budget, 1.0));
  r.checks.push_back(Check::at_most("max_persymmetry_error", worst_persym, 1e-9));
  r.results["max_phase_condition_error"] = worst_phase;
  r.checks.push_back(Check::at_most("phase_condition_error_over_floor", worst_phase_excess, 1.0));
  r.plots.push_back({"retune", "Mean max coupling shift against designed time", "t / t0", "shift", true, true,
                     {{"mean max coupling shift", multipliers, mean_shift}}});
  r.tables.push_back(std::move(t));
  return r;
}

inline ExperimentResult run_toric_transfer(const ExperimentConfig &c) {
  ExperimentResult r;
  Table summary{"transfer",
                {"N", "designed_t", "transfer_time", "relative_deviation", "fidelity_at_designed_t", "peak_fidelity",
                 "f_max", "min_gap"}};
  double worst_dev = 0, worst_f = 1, worst_excess = 0, worst_bound = 0;
  int unreached = 0;
  for (int N : c.N_range) {
    const auto d = detail::designed_toric_chain(N, c);
    const SpectralData s = eigh_tridiag(d.chain);
    const TransferResult tr = measure_transfer_time(s, c.threshold, 1.25 * d.t);
    const double tt = tr.transfer_time.value_or(std::numeric_limits<double>::quiet_NaN());
    const double dev = tr.reached() ? std::abs(tt - d.t) / d.t : std::numeric_limits<double>::infinity();
    const double Ft = fidelity(s, d.t);
    summary.add({std::int64_t{N}, d.t, tt, dev, Ft, tr.peak_fidelity, tr.f_max, tr.min_gap});
    Table trace{"trace_N" + std::to_string(N), {"t", "fidelity"}};
    double fmax_seen = 0;
    for (std::size_t i = 0; i < tr.times.size(); ++i) {
      trace.add({tr.times[i], tr.fidelities[i]});
      fmax_seen = std::max(fmax_seen, tr.fidelities[i]);
      worst_excess = std::max(worst_excess, tr.fidelities[i] - 1);
    }
    worst_bound = std::max(worst_bound, fmax_seen - tr.f_max);
    if (!tr.reached()) ++unreached;
    worst_dev = std::max(worst_dev, dev);
    worst_f = std::min(worst_f, Ft);
    r.plots.push_back({"trace_N" + std::to_string(N), "Transfer fidelity, N = " + std::to_string(N), "t", "F", false,
                       false, {{"F(t)", tr.times, tr.fidelities}}});
    r.tables.push_back(std::move(trace));
  }
  r.checks.push_back(Check::at_most("transfer_not_reached", unreached, 0));
  r.checks.push_back(Check::at_most("max_relative_deviation_from_designed_t", worst_dev, 0.05));
  r.checks.push_back(Check::at_least("min_fidelity_at_designed_t", worst_f, 1 - 1e-6));
  r.checks.push_back(Check::at_most("max_fidelity_above_one", worst_excess, 1e-12));
  r.checks.push_back(Check::at_most("max_fidelity_above_f_max", worst_bound, 1e-10));
  r.tables.insert(r.tables.begin(), std::move(summary));
  return r;
}

inline ExperimentResult run_ising_splitting(const ExperimentConfig &c) {
  ExperimentResult r;
  Table rows{"splitting", {"model", "N", "M", "delta", "splitting", "precision", "below_floor"}};
  Table fits{"fits", {"model", "N", "M", "predicted_order", "fitted_order", "order_stderr"}};
  const auto deltas = detail::delta_sweep(c);
  auto opts = detail::splitting_options(c);
  std::vector<SplittingFit> ising;
  for (int N : c.N_range) {
    const auto M = static_cast<int>(ising_chain_length(N));
    opts.predicted_order = predicted_order(M, 1, 1);
    const SplittingFit f = measure_splitting(ising_surface_family(N), 0, 1, deltas, opts);
    detail::add_splitting_rows(rows, {std::string("ising-surface"), std::int64_t{N}, std::int64_t{M}}, f);
    fits.add({std::string("ising-surface"), std::int64_t{N}, std::int64_t{M}, std::int64_t{f.predicted_order},
              f.fitted_order, f.order_stderr});
    const double tol = N == 3 ? 0.1 : 0.3;
    r.checks.push_back(Check::within("ising_order_N" + std::to_string(N), f.fitted_order, f.predicted_order - tol,
                                     f.predicted_order + tol));
    r.results["ising_order_N" + std::to_string(N)] = detail::json_number(f.fitted_order);
    r.plots.push_back({"splitting_N" + std::to_string(N), "Lowest-pair splitting, N = " + std::to_string(N), "delta",
                       "splitting", true, true, {{"Ising surface chain", f.deltas, f.splittings}}});

    auto flat_opts = opts;
    flat_opts.predicted_order = 1;
    const SplittingFit g = measure_splitting(flat_chain_family(static_cast<std::size_t>(M)), 0, 1, deltas, flat_opts);
    detail::add_splitting_rows(rows, {std::string("flat"), std::int64_t{N}, std::int64_t{M}}, g);
    fits.add({std::string("flat"), std::int64_t{N}, std::int64_t{M}, std::int64_t{1}, g.fitted_order, g.order_stderr});
    r.checks.push_back(Check::within("flat_order_M" + std::to_string(M), g.fitted_order, 0.95, 1.05));
    r.results["flat_order_M" + std::to_string(M)] = detail::json_number(g.fitted_order);
    r.plots.back().series.push_back({"flat chain", g.deltas, g.splittings});
    ising.push_back(f);
  }
  // Larger lattices split less at every delta.
  for (std::size_t k = 0; k + 1 < ising.size(); ++k) {
    if (c.N_range[k + 1] <= c.N_range[k]) continue;
    int violations = 0;
    for (std::size_t i = 0; i < deltas.size(); ++i)
      violations += !(ising[k + 1].splittings[i] < ising[k].splittings[i]);
    r.checks.push_back(Check::at_most(
        "monotone_in_N_" + std::to_string(c.N_range[k]) + "_" + std::to_string(c.N_range[k + 1]), violations, 0));
  }
  r.tables.push_back(std::move(rows));
  r.tables.push_back(std::move(fits));
  return r;
}

inline ExperimentResult run_ising_plateau(const ExperimentConfig &c) {
  ExperimentResult r;
  Table plateau{"plateau", {"N", "delta", "index", "formula", "numerical"}};
  Table residual{"residual", {"N", "delta", "max_residual"}};
  Table fits{"fits", {"N", "residual_slope"}};
  const auto deltas = detail::delta_sweep(c);
  Plot plot{"plateau_residual", "Plateau formula residual", "delta", "max residual", true, true, {}};
  for (int N : c.N_range) {
    std::vector<double> res;
    for (double d : deltas) {
      auto formula = plateau_spectrum(N, d);
      std::sort(formula.begin(), formula.end());
      const auto numeric = numerical_plateau(N, d);
      double worst = 0;
      for (std::size_t i = 0; i < formula.size(); ++i) {
        plateau.add({std::int64_t{N}, d, static_cast<std::int64_t>(i), formula[i], numeric[i]});
        worst = std::max(worst, std::abs(formula[i] - numeric[i]));
      }
      residual.add({std::int64_t{N}, d, worst});
      res.push_back(worst);
    }
    const LineFit f = fit_loglog(deltas, res);
    fits.add({std::int64_t{N}, f.slope});
    r.results["residual_slope_N" + std::to_string(N)] = f.slope;
    r.checks.push_back(Check::at_least("residual_slope_N" + std::to_string(N), f.slope, 1.8));
    plot.series.push_back({"N = " + std::to_string(N), deltas, res});
  }
  r.plots.push_back(std::move(plot));
  r.tables.push_back(std::move(plateau));
  r.tables.push_back(std::move(residual));
  r.tables.push_back(std::move(fits));
  return r;
}

inline ExperimentResult run_banded_splitting(const ExperimentConfig &c) {
  ExperimentResult r;
  Table bands{"bands", {"N", "d", "i", "value"}};
  Table rows{"splitting", {"N", "k", "delta", "splitting", "precision", "below_floor"}};
  Table fits{"fits", {"N", "k", "M", "predicted_order", "fitted_order", "order_stderr"}};
  const auto deltas = detail::delta_sweep(c);
  auto opts = detail::splitting_options(c);
  const auto k = static_cast<std::size_t>(c.band);
  std::mt19937_64 rng(c.seed);
  for (int N : c.N_range) {
    const std::size_t M = ising_chain_length(N);
    // Mirror-symmetric unit bands, so both ends of the chain see the same
    // perturbation and the pair can only split by tunnelling.
    std::vector<std::vector<double>> unit(k);
    for (std::size_t d = 1; d <= k; ++d) {
      auto &row = unit[d - 1];
      row.assign(M - d, 0.0);
      for (std::size_t i = 0; i < row.size(); ++i) {
        if (i <= row.size() - 1 - i) row[i] = detail::signed_unit(rng);
        else row[i] = row[row.size() - 1 - i];
        bands.add({std::int64_t{N}, static_cast<std::int64_t>(d), static_cast<std::int64_t>(i), row[i]});
      }
    }
    const MatrixFamily family = [N, k, unit](double delta) {
      auto scaled = unit;
      for (auto &row : scaled)
        for (auto &v : row) v *= delta;
      return banded_effective(N, delta, k, scaled);
    };
    opts.predicted_order = predicted_order(static_cast<int>(M), 1, static_cast<int>(k));
    const SplittingFit f = measure_splitting(family, 0, 1, deltas, opts);
    detail::add_splitting_rows(rows, {std::int64_t{N}, static_cast<std::int64_t>(k)}, f);
    fits.add({std::int64_t{N}, static_cast<std::int64_t>(k), static_cast<std::int64_t>(M),
              std::int64_t{f.predicted_order}, f.fitted_order, f.order_stderr});
    r.results["order_N" + std::to_string(N)] = detail::json_number(f.fitted_order);
    r.checks.push_back(Check::at_least("order_N" + std::to_string(N), f.fitted_order, f.predicted_order - 0.1));
    r.plots.push_back({"banded_N" + std::to_string(N), "Banded splitting, N = " + std::to_string(N), "delta",
                       "splitting", true, true, {{"k = " + std::to_string(k), f.deltas, f.splittings}}});
  }
  r.tables.push_back(std::move(bands));
  r.tables.push_back(std::move(rows));
  r.tables.push_back(std::move(fits));
  return r;
}

inline ExperimentResult run_oracle_verify(const ExperimentConfig &c) {
  ExperimentResult r;
  const int N = c.N_range.front();
  const ToricLattice lat(N, c.Delta);
  const DenseState ground = toric_ground_state(lat);
  const PauliSum H = toric_hamiltonian(lat);
  const double E0 = toric_ground_energy(lat);

  double stab = 0;
  for (const auto &s : toric_stabilizers(lat)) stab = std::max(stab, std::abs(expectation(s, ground) - 1));
  r.checks.push_back(Check::at_most("stabilizer_expectation_error", stab, 1e-12));
  const auto logicals = toric_logicals(lat);
  const double logical = std::max(std::abs(expectation(logicals.z_loop_1, ground) - 1),
                                  std::abs(expectation(logicals.z_loop_2, ground) - 1));
  r.checks.push_back(Check::at_most("logical_z_expectation_error", logical, 1e-12));
  r.checks.push_back(Check::at_most("ground_energy_error", std::abs(expectation(H, ground) - E0), 1e-10));
  {
    const ToricLattice small(2, c.Delta);
    const double lz = lanczos_ground_energy(toric_hamiltonian(small));
    r.checks.push_back(Check::at_most("lanczos_ground_energy_error_N2", std::abs(lz - toric_ground_energy(small)), 1e-8));
  }

  // Random coefficients for the matrix-element checks.
  std::mt19937_64 rng(c.seed);
  std::vector<double> J(static_cast<std::size_t>(N - 2)), B(static_cast<std::size_t>(N - 1));
  for (auto &v : J) v = detail::signed_unit(rng);
  for (auto &v : B) v = detail::signed_unit(rng);
  const PauliSum full = H + toric_perturbation(lat, J, B, c.delta);
  const auto basis = toric_string_basis(lat, ground);
  double ortho = 0;
  for (std::size_t i = 0; i < basis.size(); ++i)
    for (std::size_t j = 0; j < basis.size(); ++j)
      ortho = std::max(ortho, std::abs(inner(basis[i], basis[j]) - (i == j ? 1.0 : 0.0)));
  r.checks.push_back(Check::at_most("string_basis_orthonormality_error", ortho, 1e-12));
  const Matrix<double> exact = subspace_matrix(full, basis, E0);
  const Matrix<double> model = toric_effective(N, c.Delta, c.delta, J, B).to_dense();
  double elem = 0;
  for (std::size_t i = 0; i < exact.data.size(); ++i) elem = std::max(elem, std::abs(exact.data[i] - model.data[i]));
  r.checks.push_back(Check::at_most("toric_matrix_element_error", elem, 1e-12));
  r.checks.push_back(Check::at_most("toric_subspace_closure", subspace_leakage(full, basis), 1e-12));

  {
    const IsingLattice ilat(N);
    const std::size_t M = ising_chain_length(N);
    std::vector<double> iJ(M - 1), iB(M);
    for (auto &v : iJ) v = detail::signed_unit(rng);
    for (auto &v : iB) v = detail::signed_unit(rng);
    const PauliSum ih = ising_hamiltonian(ilat) + ising_perturbation(ilat, iJ, iB, c.delta);
    const auto ibasis = ising_prefix_basis(ilat);
    const double iE0 = expectation(ising_hamiltonian(ilat), DenseState(ilat.n_qubits()));
    const Matrix<double> iexact = subspace_matrix(ih, ibasis, iE0);
    const Matrix<double> imodel = ising_effective_surface(N, c.delta, iJ, iB).to_dense();
    double ielem = 0;
    for (std::size_t i = 0; i < iexact.data.size(); ++i)
      ielem = std::max(ielem, std::abs(iexact.data[i] - imodel.data[i]));
    r.checks.push_back(Check::at_most("ising_matrix_element_error", ielem, 1e-12));
    r.checks.push_back(Check::at_most("ising_subspace_closure", subspace_leakage(ih, ibasis), 1e-12));
  }

  // The engineered perturbation carries U_0|psi> to U_{N-2}|psi>.
  const auto d = detail::designed_toric_chain(N, c);
  const PauliSum designed = H + toric_perturbation(lat, d.coefficients.J, d.coefficients.B, c.delta);
  const double tol = 1e-10;
  const int checkpoints = 8;
  DenseState v = basis.front();
  const double energy0 = expectation(designed, v);
  double leak = 0, drift = 0;
  for (int k = 0; k < checkpoints; ++k) {
    v = krylov_propagate(designed, v, d.t / checkpoints, tol);
    leak = std::max(leak, subspace_projection(basis, v).leakage_norm);
    drift = std::max(drift, std::abs(expectation(designed, v) - energy0));
  }
  const double overlap = std::norm(inner(basis.back(), v));
  r.checks.push_back(Check::at_most("propagation_leakage", leak, 1e-10));
  r.checks.push_back(Check::at_most("energy_drift", drift, 10 * tol * designed.coefficient_norm()));
  r.checks.push_back(Check::at_least("logical_flip_overlap", overlap, 0.99));
  r.results["designed_t"] = d.t;
  r.results["logical_flip_overlap"] = overlap;

  Table report{"report", {"check", "value", "lower", "upper", "passed"}};
  for (const auto &ch : r.checks)
    report.add({ch.name, ch.value, ch.lower, ch.upper, std::int64_t{ch.passed ? 1 : 0}});
  r.tables.push_back(std::move(report));
  return r;
}

inline ExperimentResult run_duality_verify(const ExperimentConfig &c) {
  ExperimentResult r;
  Table t{"duality",
          {"N", "variant", "conjugated_terms", "expected_terms", "mismatches", "max_coefficient_error", "exact"}};
  Table mism{"mismatches", {"N", "variant", "detail"}};
  Table occ{"occupations", {"state", "site", "occupation"}};
  std::mt19937_64 rng(c.seed);
  int inexact = 0;
  for (int N : c.N_range) {
    const ToricLattice lat(N, c.Delta);
    std::vector<double> J(static_cast<std::size_t>(N - 2)), B(static_cast<std::size_t>(N - 1), 0.0);
    for (auto &v : J) v = detail::signed_unit(rng);
    const PauliSum dh = toric_perturbation(lat, J, B, c.delta);
    for (auto variant : {DualityCircuit::kExtended, DualityCircuit::kAsPrinted}) {
      const std::string name = variant == DualityCircuit::kExtended ? "extended" : "as-printed";
      const DualityReport rep = verify_duality_map(lat, dh, variant);
      t.add({std::int64_t{N}, name, static_cast<std::int64_t>(rep.conjugated_terms),
             static_cast<std::int64_t>(rep.expected_terms), static_cast<std::int64_t>(rep.mismatches.size()),
             rep.max_coefficient_error, std::int64_t{rep.exact ? 1 : 0}});
      for (const auto &m : rep.mismatches) mism.add({std::int64_t{N}, name, m});
      if (variant == DualityCircuit::kExtended && !rep.exact) ++inexact;
    }
  }
  r.checks.push_back(Check::at_most("extended_circuit_inexact_sizes", inexact, 0));

  // Statevector side at the smallest lattice that fits: V maps string
  // states to sharp occupation patterns on the chain sites.
  if (std::find(c.N_range.begin(), c.N_range.end(), 3) != c.N_range.end()) {
    const ToricLattice lat(3, c.Delta);
    const DenseState ground = toric_ground_state(lat);
    const auto gates = duality_circuit(lat);
    struct Labeled {
      std::string name;
      PauliTerm op;
      double excitations;
    };
    const std::vector<Labeled> states = {
        {"psi", PauliTerm::identity(lat.n_qubits()), 0},
        {"U0 psi", toric_error_string(lat, 0), 1},
        {"U1 psi", toric_error_string(lat, 1), 1},
        {"U1 U0 psi", multiply(toric_error_string(lat, 1), toric_error_string(lat, 0)), 2},
    };
    double sharp = 0, count = 0;
    for (const auto &s : states) {
      const auto o = chain_occupations(lat, apply_circuit(gates, apply_term(s.op, ground)));
      double total = 0;
      for (std::size_t k = 0; k < o.size(); ++k) {
        occ.add({s.name, static_cast<std::int64_t>(k), o[k]});
        sharp = std::max(sharp, std::min(std::abs(o[k]), std::abs(o[k] - 1)));
        total += o[k];
      }
      count = std::max(count, std::abs(total - s.excitations));
    }
    r.checks.push_back(Check::at_most("occupation_sharpness_N3", sharp, 1e-12));
    r.checks.push_back(Check::at_most("excitation_count_error_N3", count, 1e-12));
  }
  r.tables.push_back(std::move(t));
  r.tables.push_back(std::move(mism));
  r.tables.push_back(std::move(occ));
  return r;
}

inline ExperimentResult run_two_excitation(const ExperimentConfig &c) {
  ExperimentResult r;
  Table t{"two_excitation", {"N", "i", "t", "fidelity"}};
  for (int N : c.N_range) {
    const ToricLattice lat(N, c.Delta);
    const DenseState ground = toric_ground_state(lat);
    const auto d = detail::designed_toric_chain(N, c);
    const PauliSum h = toric_hamiltonian(lat) + toric_perturbation(lat, d.coefficients.J, d.coefficients.B, c.delta);
    for (int i = 1; i <= N - 2; ++i) {
      const double f0 = two_excitation_transfer(lat, h, ground, i, 0.0);
      const double ft = two_excitation_transfer(lat, h, ground, i, d.t);
      t.add({std::int64_t{N}, std::int64_t{i}, 0.0, f0});
      t.add({std::int64_t{N}, std::int64_t{i}, d.t, ft});
      r.checks.push_back(
          Check::at_least("fidelity_N" + std::to_string(N) + "_i" + std::to_string(i), ft, 0.99));
    }
  }
  r.tables.push_back(std::move(t));
  return r;
}

inline ExperimentResult run_experiment(const ExperimentConfig &c) {
  using Runner = ExperimentResult (*)(const ExperimentConfig &);
  static const std::vector<std::pair<std::string_view, Runner>> runners = {
      {"toric-scaling", run_toric_scaling},       {"toric-retune", run_toric_retune},
      {"toric-transfer", run_toric_transfer},     {"ising-splitting", run_ising_splitting},
      {"ising-plateau", run_ising_plateau},       {"banded-splitting", run_banded_splitting},
      {"oracle-verify", run_oracle_verify},       {"duality-verify", run_duality_verify},
      {"two-excitation", run_two_excitation},
  };
  for (const auto &[name, fn] : runners) {
    if (name == c.experiment) {
      ExperimentResult r = fn(c);
      r.experiment = c.experiment;
      return r;
    }
  }
  throw ConfigError("experiment", "unknown experiment '" + c.experiment + "'");
}

/// Everything in the summary except the "metadata" block is deterministic.
inline nlohmann::ordered_json summary_json(const ExperimentResult &r, const ExperimentConfig &c) {
  nlohmann::ordered_json j;
  j["experiment"] = r.experiment;
  j["library_version"] = std::string(kVersion);
  nlohmann::ordered_json cfg = nlohmann::ordered_json::object();
  for (const auto &[k, v] : config_echo(c)) cfg[k] = v;
  j["config"] = cfg;
  j["results"] = r.results;
  j["checks"] = nlohmann::ordered_json::array();
  for (const auto &ch : r.checks) {
    j["checks"].push_back({{"name", ch.name},
                           {"value", detail::json_number(ch.value)},
                           {"lower", detail::json_number(ch.lower)},
                           {"upper", detail::json_number(ch.upper)},
                           {"passed", ch.passed}});
  }
  j["passed"] = r.passed();
  return j;
}

/// Writes <table>.csv for every table, checks.csv, summary.json and,
/// optionally, <plot>.svg into dir.
inline void write_outputs(const ExperimentResult &r, const ExperimentConfig &c, const std::filesystem::path &dir,
                          bool svg, double wall_seconds) {
  std::filesystem::create_directories(dir);
  for (const auto &t : r.tables) write_text_file(dir / (t.name + ".csv"), to_csv(t));
  Table checks{"checks", {"check", "value", "lower", "upper", "passed"}};
  for (const auto &ch : r.checks) checks.add({ch.name, ch.value, ch.lower, ch.upper, std::int64_t{ch.passed ? 1 : 0}});
  write_text_file(dir / "checks.csv", to_csv(checks));

  nlohmann::ordered_json j = summary_json(r, c);
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char stamp[32];
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  j["metadata"] = {{"wall_clock_seconds", wall_seconds}, {"finished_at", stamp}};
  write_text_file(dir / "summary.json", j.dump(2) + "\n");
  if (svg) {
    for (const auto &p : r.plots) write_text_file(dir / (p.name + ".svg"), render_svg(p));
  }
}

}  // namespace qmem

#endif
