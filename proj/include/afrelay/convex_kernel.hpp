// SPDX-License-Identifier: Apache-2.0
//
// Concave subproblem shared by the DC iteration, the q* bound and the
// segment-wise upper bound:
//
//   maximize    log tr(A1 X) + log tr(A2 X) - s * tr(B2 X)
//   subject to  tr(B1 X) = 1,  lo <= tr(B2 X) <= hi  (optional),  X >= 0
//
// Solved by a log-barrier path-following method with equality-constrained
// Newton steps in X. The Hessian of the barrier objective is mu X^-1 (.) X^-1
// plus a rank-three correction, so each Newton system collapses to a 4x4
// linear system and the step costs a handful of n x n products.
#pragma once

#include <optional>
#include <utility>

#include "afrelay/linalg.hpp"

namespace afrelay {

struct SubproblemSpec {
  HermitianMatrix a1, a2, b1, b2;
  double linear_slope = 0.0;                           ///< s >= 0
  std::optional<std::pair<double, double>> beta_box;   ///< (lo, hi) on tr(B2 X)
  bool include_log_tau = true;
};

struct BarrierOptions {
  double mu_start = 1.0;
  double mu_final = 1e-9;
  double mu_factor = 10.0;
  double centering_tol = 1e-14;  ///< predicted Newton gain at which centering stops
  int max_newton = 500;          ///< total over all barrier stages
};

/// Dual certificate: for every feasible X', objective(X') <= value + duality_gap.
struct DualCertificate {
  HermitianMatrix z;       ///< multiplier of X >= 0, positive semidefinite
  double nu = 0.0;         ///< multiplier of tr(B1 X) = 1
  double box_lo = 0.0;     ///< multipliers of the two box sides, >= 0
  double box_hi = 0.0;
  double complementarity = 0.0;  ///< <Z, X> + box slack products
  double stationarity = 0.0;     ///< norm of grad f - nu B1 - (l_lo - l_hi) B2 + Z
  double psd_shift = 0.0;        ///< distance between the Newton multiplier and nu
  double duality_gap = 0.0;
};

struct SubproblemSolution {
  HermitianMatrix x;
  double tau = 0.0;   ///< tr(A2 X)
  double beta = 0.0;  ///< tr(B2 X)
  double value = 0.0;
  double kkt_residual = 0.0;
  int newton_steps = 0;
  bool box_active = false;  ///< false if the box was absent or did not cut the pencil range
  DualCertificate dual;
};

/// Objective of the subproblem at any X (no feasibility check).
double subproblem_objective(const SubproblemSpec& spec, const HermitianMatrix& x);

/// Throws Infeasible if the box misses the reachable range of tr(B2 X), and
/// ConvergenceFailure if the Newton budget is exhausted.
SubproblemSolution solve_subproblem(const SubproblemSpec& spec, const BarrierOptions& opt = {});

}  // namespace afrelay
