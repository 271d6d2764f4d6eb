// SPDX-License-Identifier: Apache-2.0
//
// Setting the gradient of the log objective to zero gives
//
//   (A1 + rho_sig A2) g = lambda (B1 + rho_noi B2) g,
//   rho_sig = g^H A1 g / g^H A2 g,   rho_noi = g^H B1 g / g^H B2 g,
//
// so every stationary g is a generalized eigenvector of a pencil indexed by two
// positive scalars. The searches here scan (rho_sig, rho_noi) instead of g.
#pragma once

#include "afrelay/channel.hpp"
#include "afrelay/problem.hpp"

namespace afrelay {

struct RhoBounds {
  double rho_noi_lo = 0.0, rho_noi_hi = 0.0;
  double rho_sig_lo = 0.0, rho_sig_hi = 0.0;
  double gamma_sq = 0.0;  ///< surrogate for ||g||^2 at the optimum
};

struct RagesResult {
  ComplexVector g;  ///< meets the relay power constraint
  double value = 0.0;
  double rho_sig = 0.0, rho_noi = 0.0;
  int evaluations = 0;
  bool bracketed = true;  ///< rages_1d only: false if the golden-section fallback ran
};

/// Dominant generalized eigenvector of (A1 + rho_sig A2, B1 + rho_noi B2), power-scaled.
ComplexVector candidate_g(double rho_sig, double rho_noi, const ProblemMatrices& pm);

/// Closed-form parameter ranges built from the channel norms and powers.
RhoBounds compute_rho_bounds(const SystemConfig& config, const ChannelSet& ch);

/// rho_sig(candidate_g(rho_sig, rho_noi)) - rho_sig.
double a_sig(double rho_sig, double rho_noi, const ProblemMatrices& pm);

/// Relative residual of the pencil equation with rho_sig, rho_noi taken from g itself.
double fixed_point_residual(const ComplexVector& g, const ProblemMatrices& pm);

/// Log-spaced grid x grid scan, a 3x finer pass around the best cell, a simplex
/// ascent along the objective ridge, then Newton on rho(g(rho)) = rho.
RagesResult rages_2d(const ProblemMatrices& pm, const RhoBounds& bounds, int grid = 32);

/// rho_noi fixed at sqrt(lo * hi); bisection on a_sig in log rho_sig down to
/// relative width tol, or golden-section search on the objective if a_sig does
/// not change sign over the range.
RagesResult rages_1d(const ProblemMatrices& pm, const RhoBounds& bounds, double tol = 1e-6);

}  // namespace afrelay
