// SPDX-License-Identifier: Apache-2.0
//
// afrelay <experiment> [--config file] [--seed n] [--trials n] [--methods list]
//                      [--segments n] [--out path]
// afrelay solve [--config file] [--seed n] [--methods list] [--segments n]
#include <cmath>
#include <cstdio>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "afrelay/error.hpp"
#include "afrelay/harness.hpp"
#include "afrelay/rages.hpp"
#include "afrelay/upper_bound.hpp"

using namespace afrelay;

namespace {

struct Options {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<int> trials;
  std::string methods;
  std::optional<int> segments;
  std::string out;
  std::vector<double> sweep;
  int threads = 0;
  bool timing = false;
};

void add_common(CLI::App* sub, Options& o) {
  sub->add_option("--config", o.config, "key=value system configuration file")
      ->check(CLI::ExistingFile);
  sub->add_option("--seed", o.seed, "base seed");
  sub->add_option("--methods", o.methods,
                  "comma-separated subset of potdc,rages2d,rages1d,dft,upper_bound");
  sub->add_option("--segments", o.segments, "upper-bound segments")->check(CLI::PositiveNumber);
}

int run_sweep(Experiment e, const Options& o) {
  ExperimentSpec spec = default_spec(e);
  if (!o.config.empty()) spec.base_config = load_config(o.config);
  if (o.seed) spec.seed = *o.seed;
  if (o.trials) spec.trials = *o.trials;
  if (!o.methods.empty()) spec.methods = parse_methods(o.methods);
  if (o.segments) spec.segments_n = *o.segments;
  if (!o.sweep.empty()) spec.sweep = o.sweep;
  spec.output_path = o.out;
  spec.workers = o.threads;
  spec.timing = o.timing;

  const auto records = run_experiment(spec);
  if (o.out.empty()) write_csv(std::cout, records);
  const auto dead = methods_failing_everywhere(records);
  for (const auto& m : dead) std::cerr << "afrelay: " << m << " failed in every trial\n";
  return dead.empty() ? 0 : 1;
}

void print_matrix(const ComplexMatrix& g) {
  for (Eigen::Index r = 0; r < g.rows(); ++r) {
    for (Eigen::Index c = 0; c < g.cols(); ++c)
      std::printf("  %+.6e%+.6ei", g(r, c).real(), g(r, c).imag());
    std::printf("\n");
  }
}

int run_solve(const Options& o) {
  const SystemConfig config = o.config.empty() ? SystemConfig{} : load_config(o.config);
  config.validate();
  const std::uint64_t seed = o.seed.value_or(1);
  const auto methods = o.methods.empty() ? default_spec(Experiment::snr_sweep).methods
                                         : parse_methods(o.methods);
  const ChannelSet ch = draw_channels(config, seed);
  const ProblemMatrices pm = build_problem(config, ch);

  std::printf("# config\n%s", to_string(config).c_str());
  std::printf("# seed %llu\n", static_cast<unsigned long long>(seed));

  std::optional<PotdcResult> potdc;
  int failures = 0;
  for (Method m : methods) {
    try {
      switch (m) {
        case Method::potdc: {
          potdc = run_potdc(pm);
          const auto& p = *potdc;
          std::printf("potdc: sum_rate %.9f  iterations %d  rank_gap %.3e  kkt %.3e%s\n",
                      sum_rate(p.g, pm), p.iterations, p.rank_gap, p.kkt_residual,
                      p.certified ? "" : "  (randomized extraction)");
          std::printf("relay matrix G:\n");
          print_matrix(unvec(p.g, config.m_r));
          break;
        }
        case Method::rages2d:
        case Method::rages1d: {
          const auto b = compute_rho_bounds(config, ch);
          const auto r = m == Method::rages2d ? rages_2d(pm, b) : rages_1d(pm, b);
          std::printf("%s: sum_rate %.9f  rho_sig %.6g  rho_noi %.6g  evaluations %d\n",
                      to_string(m).c_str(), sum_rate(r.g, pm), r.rho_sig, r.rho_noi,
                      r.evaluations);
          break;
        }
        case Method::dft:
          std::printf("dft: sum_rate %.9f\n", sum_rate(dft_baseline(config, ch, pm), pm));
          break;
        case Method::upper_bound: {
          if (!potdc) potdc = run_potdc(pm);
          UpperBoundOptions opt;
          if (o.segments) opt.segments = *o.segments;
          const auto ub = compute_upper_bound(pm, potdc->relaxed_value, opt);
          std::printf("upper_bound: sum_rate %.9f  gap %.3e  beta [%.6g, %.6g]  segments %d\n",
                      ub.bound / (2.0 * std::numbers::ln2), ub.bound - potdc->relaxed_value,
                      ub.beta_min, ub.beta_max, ub.segments);
          break;
        }
      }
    } catch (const Error& e) {
      std::fprintf(stderr, "%s: %s\n", to_string(m).c_str(), e.what());
      ++failures;
    }
  }
  return failures == static_cast<int>(methods.size()) ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sum-rate optimal two-way amplify-and-forward MIMO relaying"};
  app.require_subcommand(1);
  Options o;

  std::vector<std::pair<CLI::App*, Experiment>> sweeps;
  for (Experiment e : {Experiment::snr_sweep, Experiment::distance_sweep,
                       Experiment::antenna_sweep, Experiment::diagonal_compare}) {
    auto* sub = app.add_subcommand(to_string(e), "Monte-Carlo sweep, CSV output");
    add_common(sub, o);
    sub->add_option("--trials", o.trials, "trials per sweep value")->check(CLI::PositiveNumber);
    sub->add_option("--out", o.out, "CSV path (default: stdout)");
    sub->add_option("--sweep", o.sweep, "override the sweep values")->delimiter(',');
    sub->add_option("--threads", o.threads, "worker threads (default: all cores)");
    sub->add_flag("--timing", o.timing, "fill wall_ms (output no longer reproducible)");
    sweeps.emplace_back(sub, e);
  }
  auto* solve = app.add_subcommand("solve", "Solve one channel realization");
  add_common(solve, o);

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve->parsed()) return run_solve(o);
    for (const auto& [sub, e] : sweeps)
      if (sub->parsed()) return run_sweep(e, o);
  } catch (const Error& e) {
    std::cerr << "afrelay: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
