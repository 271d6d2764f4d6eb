// SPDX-License-Identifier: Apache-2.0
#include "afrelay/harness.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <limits>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>
#include <thread>

#include "afrelay/error.hpp"
#include "afrelay/rages.hpp"
#include "afrelay/rng.hpp"
#include "afrelay/upper_bound.hpp"

namespace afrelay {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

const std::vector<std::pair<Experiment, const char*>> kExperiments = {
    {Experiment::snr_sweep, "snr_sweep"},
    {Experiment::distance_sweep, "distance_sweep"},
    {Experiment::antenna_sweep, "antenna_sweep"},
    {Experiment::diagonal_compare, "diagonal_compare"},
};

const std::vector<std::pair<Method, const char*>> kMethods = {
    {Method::potdc, "potdc"},   {Method::rages2d, "rages2d"},
    {Method::rages1d, "rages1d"}, {Method::dft, "dft"},
    {Method::upper_bound, "upper_bound"},
};

std::string error_tag(const std::exception_ptr& ep) {
  try {
    std::rethrow_exception(ep);
  } catch (const ConvergenceFailure&) {
    return "convergence";
  } catch (const SingularPencil&) {
    return "singular_pencil";
  } catch (const Infeasible&) {
    return "infeasible";
  } catch (const DegenerateRange&) {
    return "degenerate_range";
  } catch (const InvalidInput&) {
    return "invalid_input";
  } catch (const Error&) {
    return "error";
  } catch (const std::exception&) {
    return "exception";
  }
}

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

// One problem instance (full or diagonal) and the methods run on it.
class TrialRunner {
public:
  TrialRunner(const ExperimentSpec& spec, const SystemConfig& config, const ChannelSet& ch,
              const ProblemMatrices& pm, std::string suffix)
      : spec_(spec), config_(config), ch_(ch), pm_(pm), suffix_(std::move(suffix)) {}

  void run(const TrialRecord& base, std::vector<TrialRecord>& out) {
    for (Method m : spec_.methods) {
      if (m == Method::dft && pm_.diagonal) continue;  // the DFT matrix is not diagonal
      TrialRecord r = base;
      r.method = to_string(m) + suffix_;
      const auto t0 = std::chrono::steady_clock::now();
      try {
        measure(m, r);
      } catch (...) {
        r.sum_rate = kNaN;
        r.objective = kNaN;
        r.iters = 0;
        r.error = error_tag(std::current_exception());
      }
      if (spec_.timing)
        r.wall_ms = std::chrono::duration<double, std::milli>(
                        std::chrono::steady_clock::now() - t0)
                        .count();
      out.push_back(std::move(r));
    }
  }

private:
  void record_g(const ComplexVector& g, TrialRecord& r) const {
    r.sum_rate = sum_rate(g, pm_);
    r.objective = objective(g, pm_);
  }

  const PotdcResult& potdc() {
    if (potdc_error_) std::rethrow_exception(potdc_error_);
    if (!potdc_) {
      try {
        potdc_ = run_potdc(pm_, spec_.potdc);
      } catch (...) {
        potdc_error_ = std::current_exception();
        throw;
      }
    }
    return *potdc_;
  }

  // A feasible log objective for the bound: POTDC if it ran, DFT otherwise.
  double p_star() {
    try {
      return potdc().relaxed_value;
    } catch (const Error&) {
    }
    ComplexVector g = pm_.diagonal ? ComplexVector::Ones(pm_.n)
                                   : dft_baseline(config_, ch_, pm_);
    return std::log(objective(g, pm_));
  }

  void measure(Method m, TrialRecord& r) {
    switch (m) {
      case Method::potdc: {
        const auto& p = potdc();
        record_g(p.g, r);
        r.iters = p.iterations;
        break;
      }
      case Method::rages2d:
      case Method::rages1d: {
        const auto bounds = compute_rho_bounds(config_, ch_);
        const auto res = m == Method::rages2d ? rages_2d(pm_, bounds) : rages_1d(pm_, bounds);
        record_g(res.g, r);
        r.iters = res.evaluations;
        break;
      }
      case Method::dft:
        record_g(dft_baseline(config_, ch_, pm_), r);
        break;
      case Method::upper_bound: {
        UpperBoundOptions opt;
        opt.segments = spec_.segments_n;
        opt.barrier = spec_.potdc.barrier;
        const auto ub = compute_upper_bound(pm_, p_star(), opt);
        r.sum_rate = ub.bound / (2.0 * std::numbers::ln2);
        r.objective = std::exp(ub.bound);
        r.iters = ub.segments;
        break;
      }
    }
  }

  const ExperimentSpec& spec_;
  const SystemConfig& config_;
  const ChannelSet& ch_;
  const ProblemMatrices& pm_;
  std::string suffix_;
  std::optional<PotdcResult> potdc_;
  std::exception_ptr potdc_error_;
};

std::vector<TrialRecord> run_trial(const ExperimentSpec& spec, const SystemConfig& config,
                                   double value, int trial) {
  const ChannelSet ch = draw_channels(config, trial_seed(spec.seed, value, trial));
  TrialRecord base;
  base.experiment = to_string(spec.experiment);
  base.sweep = value;
  base.trial = trial;

  std::vector<TrialRecord> out;
  const ProblemMatrices pm = build_problem(config, ch);
  TrialRunner(spec, config, ch, pm, "").run(base, out);
  if (spec.experiment == Experiment::diagonal_compare) {
    const ProblemMatrices pmd = restrict_diagonal(pm);
    TrialRunner(spec, config, ch, pmd, "_diag").run(base, out);
  }
  return out;
}

}  // namespace

std::string to_string(Experiment e) {
  for (const auto& [k, name] : kExperiments)
    if (k == e) return name;
  return "unknown";
}

std::string to_string(Method m) {
  for (const auto& [k, name] : kMethods)
    if (k == m) return name;
  return "unknown";
}

Experiment parse_experiment(const std::string& name) {
  for (const auto& [k, n] : kExperiments)
    if (name == n) return k;
  throw InvalidInput("unknown experiment '" + name + "'");
}

Method parse_method(const std::string& name) {
  for (const auto& [k, n] : kMethods)
    if (name == n) return k;
  throw InvalidInput("unknown method '" + name + "'");
}

std::vector<Method> parse_methods(const std::string& list) {
  std::vector<Method> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(parse_method(item));
  if (out.empty()) throw InvalidInput("method list is empty");
  return out;
}

void ExperimentSpec::validate() const {
  if (trials < 1) throw InvalidInput("experiment: trials must be at least 1");
  if (sweep.empty()) throw InvalidInput("experiment: sweep is empty");
  if (methods.empty()) throw InvalidInput("experiment: no methods");
  if (segments_n < 1) throw InvalidInput("experiment: segments must be at least 1");
  for (double v : sweep) apply_sweep(experiment, base_config, v).validate();
}

ExperimentSpec default_spec(Experiment e) {
  ExperimentSpec s;
  s.experiment = e;
  s.methods = {Method::potdc, Method::rages2d, Method::rages1d, Method::dft,
               Method::upper_bound};
  switch (e) {
    case Experiment::snr_sweep:
    case Experiment::diagonal_compare:
      s.sweep = {0.1, 0.2, 0.5, 1.0, 2.0, 5.0, 10.0};
      break;
    case Experiment::distance_sweep:
      s.sweep = {0.1, 0.2, 0.3, 0.4, 0.5};
      break;
    case Experiment::antenna_sweep:
      s.sweep = {2, 3, 4, 5};
      s.trials = 200;
      s.base_config.d2 = 0.25;
      break;
  }
  return s;
}

SystemConfig apply_sweep(Experiment e, const SystemConfig& base, double value) {
  SystemConfig c = base;
  switch (e) {
    case Experiment::snr_sweep:
    case Experiment::diagonal_compare:
      if (!(value > 0.0)) throw InvalidInput("sweep: 1/sigma^2 must be positive");
      c.p_n1 = c.p_n2 = c.p_nr = 1.0 / value;
      break;
    case Experiment::distance_sweep:
      c.d2 = value;
      break;
    case Experiment::antenna_sweep:
      if (value != std::round(value) || value < 1.0)
        throw InvalidInput("sweep: antenna counts must be positive integers");
      c.m_r = static_cast<int>(value);
      if (c.relay_noise_cov && c.relay_noise_cov->dim() != c.m_r)
        throw InvalidInput("sweep: relay noise covariance size does not follow m_r");
      break;
  }
  return c;
}

std::uint64_t trial_seed(std::uint64_t seed, double sweep_value, int trial) {
  return seed ^ hash_combine(std::bit_cast<std::uint64_t>(sweep_value),
                             static_cast<std::uint64_t>(trial));
}

ComplexVector dft_baseline(const SystemConfig& config, const ChannelSet&,
                           const ProblemMatrices& pm) {
  const int m = config.m_r;
  ComplexMatrix f(m, m);
  for (int r = 0; r < m; ++r)
    for (int c = 0; c < m; ++c)
      f(r, c) = std::polar(1.0 / std::sqrt(static_cast<double>(m)),
                           -2.0 * std::numbers::pi * r * c / m);
  return scale_to_power(vec(f), pm);
}

std::vector<TrialRecord> run_experiment(const ExperimentSpec& spec) {
  spec.validate();
  std::vector<SystemConfig> configs;
  for (double v : spec.sweep) configs.push_back(apply_sweep(spec.experiment, spec.base_config, v));

  const std::size_t jobs = spec.sweep.size() * static_cast<std::size_t>(spec.trials);
  std::vector<std::vector<TrialRecord>> slots(jobs);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};

  auto worker = [&] {
    for (std::size_t j = next++; j < jobs && !failed; j = next++) {
      const std::size_t k = j / spec.trials;
      try {
        slots[j] = run_trial(spec, configs[k], spec.sweep[k], static_cast<int>(j % spec.trials));
      } catch (...) {
        if (!failed.exchange(true)) failure = std::current_exception();
      }
    }
  };
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t n_workers =
      std::min<std::size_t>(jobs, spec.workers > 0 ? spec.workers : hw);
  std::vector<std::thread> pool;
  for (std::size_t i = 1; i < n_workers; ++i) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);

  std::vector<TrialRecord> records;
  for (auto& s : slots)
    for (auto& r : s) records.push_back(std::move(r));

  if (!spec.output_path.empty()) {
    std::ofstream f(spec.output_path);
    if (!f) throw InvalidInput("cannot open output file " + spec.output_path);
    write_csv(f, records);
  }
  return records;
}

void write_csv(std::ostream& out, const std::vector<TrialRecord>& records) {
  out << "experiment,sweep,trial,method,sum_rate,objective,iters,wall_ms,error\n";
  for (const auto& r : records)
    out << r.experiment << ',' << fmt(r.sweep) << ',' << r.trial << ',' << r.method << ','
        << fmt(r.sum_rate) << ',' << fmt(r.objective) << ',' << r.iters << ','
        << fmt(r.wall_ms) << ',' << r.error << '\n';
}

std::vector<std::string> methods_failing_everywhere(const std::vector<TrialRecord>& records) {
  std::map<std::string, bool> all_failed;
  for (const auto& r : records) {
    auto [it, inserted] = all_failed.try_emplace(r.method, true);
    it->second = it->second && !r.error.empty();
  }
  std::vector<std::string> out;
  for (const auto& [m, f] : all_failed)
    if (f) out.push_back(m);
  return out;
}

}  // namespace afrelay
