// SPDX-License-Identifier: Apache-2.0
//
// Certified upper bound on the relaxed optimum. With q* the optimum of the
// problem without the -log beta term and p* any achievable value, every optimal
// point has beta <= exp(q* - p*). On [beta_min, beta_max] the concave -log beta
// is bounded above by minus its chord on each of N segments, which turns every
// segment into a concave subproblem with a box on beta.
#pragma once

#include <vector>

#include "afrelay/convex_kernel.hpp"
#include "afrelay/problem.hpp"

namespace afrelay {

enum class SegmentSpacing { linear, logarithmic };

struct UpperBoundOptions {
  int segments = 30;
  SegmentSpacing spacing = SegmentSpacing::linear;
  BarrierOptions barrier{};
};

struct UpperBoundResult {
  double q_star = 0.0;
  double beta_min = 0.0;
  double beta_max = 0.0;
  int segments = 0;
  double bound = 0.0;                      ///< same units as PotdcResult::relaxed_value
  std::vector<double> per_segment_values;  ///< bound == max of these
};

/// max log tr(A1 X) + log tr(A2 X) over tr(B1 X) = 1, X >= 0.
double compute_q_star(const ProblemMatrices& pm, const BarrierOptions& barrier = {});

/// Throws DegenerateRange if p_star > q* - log beta_min.
UpperBoundResult compute_upper_bound(const ProblemMatrices& pm, double p_star,
                                     const UpperBoundOptions& opt = {});

/// Chord of log through (lo, log lo) and (hi, log hi): returns {slope, intercept}.
std::pair<double, double> log_chord(double lo, double hi);

}  // namespace afrelay
