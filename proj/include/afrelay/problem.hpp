// SPDX-License-Identifier: Apache-2.0
//
// Quadratic-form model of the two-way relay sum-rate problem. With g = vec(G):
//
//   relay power      g^H Q g
//   desired signal   P_{R,1} = g^H K21 g * p_t2,  P_{R,2} = g^H K12 g * p_t1
//   effective noise  g^H J_i g + p_ni
//
// On the power surface g^H Q g = p_tr the noise constant is absorbed into
// B_i = J_i + (p_ni / p_tr) Q, which makes the product of rate terms
//
//   (g^H A1 g / g^H B1 g) * (g^H A2 g / g^H B2 g)
//
// homogeneous of degree zero in g. Every solver maximizes this ratio product.
#pragma once

#include "afrelay/channel.hpp"
#include "afrelay/linalg.hpp"

namespace afrelay {

struct ProblemMatrices {
  Eigen::Index n = 0;  ///< length of g: m_r^2, or m_r for the diagonal restriction
  int m_r = 0;
  bool diagonal = false;
  HermitianMatrix q, k21, k12, j1, j2, b1, b2, a1, a2;
  double p_tr = 1.0, p_n1 = 1.0, p_n2 = 1.0, p_t1 = 1.0, p_t2 = 1.0;
};

ProblemMatrices build_problem(const SystemConfig& config, const ChannelSet& ch);

/// Product of the two Rayleigh quotients. Throws InvalidInput for g == 0.
double objective(const ComplexVector& g, const ProblemMatrices& pm);

/// r1 + r2 in bits per channel use, evaluated with the physical (non-homogenized)
/// noise powers. g is expected to satisfy the relay power constraint.
double sum_rate(const ComplexVector& g, const ProblemMatrices& pm);
/// Same as above, built straight from the channels; g must have length m_r^2.
double sum_rate(const ComplexVector& g, const SystemConfig& config, const ChannelSet& ch);

/// c * g with c > 0 chosen so that g^H Q g = p_tr.
ComplexVector scale_to_power(const ComplexVector& g, const ProblemMatrices& pm);

struct FeasibleIntervals {
  double tau_min, tau_max;  ///< extreme eigenvalues of the pencil (A2, B1)
  double beta_min, beta_max;  ///< extreme eigenvalues of the pencil (B2, B1)
};

/// Ranges of g^H A2 g and g^H B2 g over the set g^H B1 g = 1.
FeasibleIntervals tau_beta_intervals(const ProblemMatrices& pm);

/// Restriction to diagonal relay matrices G = diag(g): keeps rows and columns
/// k * (m_r + 1) of every matrix.
ProblemMatrices restrict_diagonal(const ProblemMatrices& full);

/// vec(diag(g)) for g of length m_r.
ComplexVector embed_diagonal(const ComplexVector& g_diag);

}  // namespace afrelay
