// SPDX-License-Identifier: Apache-2.0
#include "afrelay/upper_bound.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "afrelay/error.hpp"

namespace afrelay {

namespace {

// Relative width below which the beta range counts as a single point.
constexpr double kPointRange = 1e-12;

}  // namespace

std::pair<double, double> log_chord(double lo, double hi) {
  const double s = (std::log(hi) - std::log(lo)) / (hi - lo);
  return {s, std::log(lo) - s * lo};
}

double compute_q_star(const ProblemMatrices& pm, const BarrierOptions& barrier) {
  const SubproblemSpec spec{pm.a1, pm.a2, pm.b1, pm.b2, 0.0, std::nullopt, true};
  return solve_subproblem(spec, barrier).value;
}

UpperBoundResult compute_upper_bound(const ProblemMatrices& pm, double p_star,
                                     const UpperBoundOptions& opt) {
  if (opt.segments < 1) throw InvalidInput("compute_upper_bound: segments must be >= 1");
  UpperBoundResult res;
  res.segments = opt.segments;
  res.q_star = compute_q_star(pm, opt.barrier);
  const auto iv = tau_beta_intervals(pm);
  res.beta_min = iv.beta_min;

  const double cap = res.q_star - std::log(iv.beta_min);
  if (p_star > cap + 1e-9 * std::max(1.0, std::abs(cap)))
    throw DegenerateRange("compute_upper_bound: p* = " + std::to_string(p_star) +
                          " exceeds q* - log beta_min = " + std::to_string(cap));

  res.beta_max = std::min(std::exp(res.q_star - p_star), iv.beta_max);
  res.beta_max = std::max(res.beta_max, res.beta_min);
  if (res.beta_max - res.beta_min <= kPointRange * res.beta_max) {
    res.bound = cap;
    res.per_segment_values.assign(1, cap);
    return res;
  }

  const int n = opt.segments;
  std::vector<double> edges(n + 1);
  for (int i = 0; i <= n; ++i) {
    const double f = static_cast<double>(i) / n;
    edges[i] = opt.spacing == SegmentSpacing::linear
                   ? res.beta_min + f * (res.beta_max - res.beta_min)
                   : res.beta_min * std::pow(res.beta_max / res.beta_min, f);
  }
  edges[n] = res.beta_max;

  SubproblemSpec spec{pm.a1, pm.a2, pm.b1, pm.b2, 0.0, std::nullopt, true};
  res.per_segment_values.reserve(n);
  for (int i = 0; i < n; ++i) {
    const auto [s, c] = log_chord(edges[i], edges[i + 1]);
    spec.linear_slope = s;
    spec.beta_box = std::make_pair(edges[i], edges[i + 1]);
    const auto sol = solve_subproblem(spec, opt.barrier);
    // value + gap bounds the segment optimum from above
    res.per_segment_values.push_back(sol.value + std::max(sol.dual.duality_gap, 0.0) - c);
  }
  res.bound = *std::max_element(res.per_segment_values.begin(), res.per_segment_values.end());
  return res;
}

}  // namespace afrelay
