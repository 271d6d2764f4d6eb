// SPDX-License-Identifier: Apache-2.0
//
// Monte-Carlo experiment driver. Every (sweep value, trial) pair draws its own
// channels from a seed derived from the base seed, runs the requested methods
// and emits one record per method. Output order depends only on the spec.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "afrelay/channel.hpp"
#include "afrelay/potdc.hpp"
#include "afrelay/problem.hpp"

namespace afrelay {

enum class Experiment { snr_sweep, distance_sweep, antenna_sweep, diagonal_compare };
enum class Method { potdc, rages2d, rages1d, dft, upper_bound };

std::string to_string(Experiment e);
std::string to_string(Method m);
/// Throws InvalidInput on unknown names.
Experiment parse_experiment(const std::string& name);
Method parse_method(const std::string& name);
/// Comma-separated list, e.g. "potdc,dft".
std::vector<Method> parse_methods(const std::string& list);

struct ExperimentSpec {
  Experiment experiment = Experiment::snr_sweep;
  /// snr_sweep / diagonal_compare: 1/sigma^2 applied to all three noise powers;
  /// distance_sweep: d2; antenna_sweep: m_r.
  std::vector<double> sweep;
  int trials = 100;
  SystemConfig base_config{};
  std::vector<Method> methods;
  std::uint64_t seed = 1;
  int segments_n = 30;
  std::string output_path;  ///< empty: caller handles output
  int workers = 0;          ///< 0: hardware concurrency
  bool timing = false;      ///< wall_ms stays 0 unless set, keeping output reproducible
  PotdcOptions potdc{};

  /// Throws InvalidInput if trials < 1, the sweep is empty or no method is given.
  void validate() const;
};

/// Paper setup for each experiment: sweep grid, trial count, base config, all methods.
ExperimentSpec default_spec(Experiment e);

/// base with the swept field set to value.
SystemConfig apply_sweep(Experiment e, const SystemConfig& base, double value);

/// Channel seed for one (sweep value, trial) pair.
std::uint64_t trial_seed(std::uint64_t seed, double sweep_value, int trial);

struct TrialRecord {
  std::string experiment;
  double sweep = 0.0;
  int trial = 0;
  std::string method;  ///< "_diag" suffix marks the diagonal restriction
  double sum_rate = 0.0;   ///< bits per channel use; NaN on error
  double objective = 0.0;  ///< ratio product, exp of the bound for upper_bound rows
  int iters = 0;           ///< POTDC iterations, RAGES evaluations, bound segments
  double wall_ms = 0.0;
  std::string error;       ///< empty on success
};

/// Scaled unitary DFT matrix, vectorized and scaled onto the power surface.
ComplexVector dft_baseline(const SystemConfig& config, const ChannelSet& ch,
                           const ProblemMatrices& pm);

/// Records ordered by sweep value, trial, then method. Writes CSV to
/// spec.output_path when it is set.
std::vector<TrialRecord> run_experiment(const ExperimentSpec& spec);

void write_csv(std::ostream& out, const std::vector<TrialRecord>& records);

/// Methods whose every record carries an error.
std::vector<std::string> methods_failing_everywhere(const std::vector<TrialRecord>& records);

}  // namespace afrelay
