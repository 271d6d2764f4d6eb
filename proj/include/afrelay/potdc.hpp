// SPDX-License-Identifier: Apache-2.0
//
// Polynomial-time DC iteration. After relaxing g g^H to X, the problem
//
//   maximize  log tr(A1 X) + log tr(A2 X) - log tr(B2 X)   s.t. tr(B1 X) = 1, X >= 0
//
// is a difference of concave functions in X. Each iteration replaces log beta by
// its tangent at the previous beta_c, solves the resulting concave problem and
// moves beta_c to the new tr(B2 X). The relaxation is tight, so a rank-one X
// is extracted at the end and turned back into a relay vector.
#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "afrelay/convex_kernel.hpp"
#include "afrelay/problem.hpp"

namespace afrelay {

struct PotdcOptions {
  double epsilon = 1e-6;                 ///< stop when the true value moves less than this
  int max_iter = 50;
  std::optional<double> beta_c_init;     ///< default: geometric mean of the beta interval
  BarrierOptions barrier{};
};

struct PotdcResult {
  ComplexVector g;                     ///< meets the relay power constraint
  double relaxed_value = 0.0;          ///< log tr(A1 X) + log tau - log beta at x_final
  std::vector<double> value_history;   ///< true value after every iteration
  int iterations = 0;
  HermitianMatrix x_final;
  double tau = 0.0, beta = 0.0;
  double rank_gap = 0.0;               ///< lambda_2 / lambda_1 of x_final
  bool certified = true;               ///< false if the randomized extraction was needed
  double kkt_residual = 0.0;           ///< stationarity of the relaxed problem at x_final
};

struct RankOneExtraction {
  ComplexVector g;  ///< g^H B1 g = 1
  bool certified = true;
  double rank_gap = 0.0;
};

/// Principal eigenvector of x when lambda_2 / lambda_1 <= 1e-6, otherwise the best
/// of 200 Gaussian draws g = x^{1/2} w. Throws InvalidInput if x is numerically zero.
RankOneExtraction extract_rank_one(const HermitianMatrix& x, const ProblemMatrices& pm,
                                   std::uint64_t seed = 0x5eed);

/// KKT residual of the relaxed problem at a feasible x:
/// lambda_max(grad h, B1) - <grad h, x>, plus the trace-constraint violation.
/// Zero exactly at stationary points.
double relaxed_kkt_residual(const HermitianMatrix& x, const ProblemMatrices& pm);

PotdcResult run_potdc(const ProblemMatrices& pm, const PotdcOptions& opt = {});

}  // namespace afrelay
