// SPDX-License-Identifier: Apache-2.0
#include "afrelay/problem.hpp"

#include <cmath>

#include "afrelay/error.hpp"

namespace afrelay {

namespace {

void require_nonzero(const ComplexVector& g, const char* who) {
  if (g.size() == 0 || g.squaredNorm() == 0.0)
    throw InvalidInput(std::string(who) + ": zero relay vector");
}

void require_dim(const ComplexVector& g, const ProblemMatrices& pm, const char* who) {
  if (g.size() != pm.n)
    throw InvalidInput(std::string(who) + ": vector length does not match problem");
}

HermitianMatrix transposed_kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  return HermitianMatrix(ComplexMatrix(kron(a, b).transpose()));
}

HermitianMatrix pick_diagonal(const HermitianMatrix& h, int m_r) {
  ComplexMatrix out(m_r, m_r);
  for (int r = 0; r < m_r; ++r)
    for (int c = 0; c < m_r; ++c) out(r, c) = h(r * (m_r + 1), c * (m_r + 1));
  return HermitianMatrix(out);
}

}  // namespace

ProblemMatrices build_problem(const SystemConfig& config, const ChannelSet& ch) {
  config.validate();
  const int m = config.m_r;
  if (ch.h1f.size() != m || ch.h2f.size() != m || ch.h1b.size() != m || ch.h2b.size() != m)
    throw InvalidInput("build_problem: channel length does not match m_r");

  const HermitianMatrix rnr = relay_noise_covariance(config);
  const HermitianMatrix rr = relay_rx_covariance(config, ch);
  const ComplexMatrix eye = ComplexMatrix::Identity(m, m);
  const ComplexMatrix h1f = ch.h1f * ch.h1f.adjoint();
  const ComplexMatrix h2f = ch.h2f * ch.h2f.adjoint();
  const ComplexMatrix h1b = ch.h1b * ch.h1b.adjoint();
  const ComplexMatrix h2b = ch.h2b * ch.h2b.adjoint();

  ProblemMatrices pm;
  pm.n = static_cast<Eigen::Index>(m) * m;
  pm.m_r = m;
  pm.p_tr = config.p_tr;
  pm.p_n1 = config.p_n1;
  pm.p_n2 = config.p_n2;
  pm.p_t1 = config.p_t1;
  pm.p_t2 = config.p_t2;

  pm.q = HermitianMatrix(kron(rr.matrix().transpose(), eye));
  pm.k21 = transposed_kron(h2f, h1b);
  pm.k12 = transposed_kron(h1f, h2b);
  pm.j1 = transposed_kron(rnr.matrix(), h1b);
  pm.j2 = transposed_kron(rnr.matrix(), h2b);
  pm.b1 = pm.j1 + pm.q * (config.p_n1 / config.p_tr);
  pm.b2 = pm.j2 + pm.q * (config.p_n2 / config.p_tr);
  pm.a1 = pm.k21 * config.p_t2 + pm.b1;
  pm.a2 = pm.k12 * config.p_t1 + pm.b2;
  return pm;
}

double objective(const ComplexVector& g, const ProblemMatrices& pm) {
  require_nonzero(g, "objective");
  require_dim(g, pm, "objective");
  return (pm.a1.quad(g) / pm.b1.quad(g)) * (pm.a2.quad(g) / pm.b2.quad(g));
}

double sum_rate(const ComplexVector& g, const ProblemMatrices& pm) {
  require_dim(g, pm, "sum_rate");
  const double pr1 = pm.k21.quad(g) * pm.p_t2;
  const double pr2 = pm.k12.quad(g) * pm.p_t1;
  const double pn1 = pm.j1.quad(g) + pm.p_n1;
  const double pn2 = pm.j2.quad(g) + pm.p_n2;
  return 0.5 * std::log2(1.0 + pr1 / pn1) + 0.5 * std::log2(1.0 + pr2 / pn2);
}

double sum_rate(const ComplexVector& g, const SystemConfig& config, const ChannelSet& ch) {
  return sum_rate(g, build_problem(config, ch));
}

ComplexVector scale_to_power(const ComplexVector& g, const ProblemMatrices& pm) {
  require_nonzero(g, "scale_to_power");
  require_dim(g, pm, "scale_to_power");
  return g * std::sqrt(pm.p_tr / pm.q.quad(g));
}

FeasibleIntervals tau_beta_intervals(const ProblemMatrices& pm) {
  const auto tau = gen_eig_extremes(pm.a2, pm.b1);
  const auto beta = gen_eig_extremes(pm.b2, pm.b1);
  return {tau.lambda_min, tau.lambda_max, beta.lambda_min, beta.lambda_max};
}

ProblemMatrices restrict_diagonal(const ProblemMatrices& full) {
  if (full.diagonal || full.n != static_cast<Eigen::Index>(full.m_r) * full.m_r)
    throw InvalidInput("restrict_diagonal: expects a full m_r^2 problem");
  const int m = full.m_r;
  ProblemMatrices r = full;
  r.n = m;
  r.diagonal = true;
  r.q = pick_diagonal(full.q, m);
  r.k21 = pick_diagonal(full.k21, m);
  r.k12 = pick_diagonal(full.k12, m);
  r.j1 = pick_diagonal(full.j1, m);
  r.j2 = pick_diagonal(full.j2, m);
  r.b1 = pick_diagonal(full.b1, m);
  r.b2 = pick_diagonal(full.b2, m);
  r.a1 = pick_diagonal(full.a1, m);
  r.a2 = pick_diagonal(full.a2, m);
  return r;
}

ComplexVector embed_diagonal(const ComplexVector& g_diag) {
  const Eigen::Index m = g_diag.size();
  ComplexVector g = ComplexVector::Zero(m * m);
  for (Eigen::Index k = 0; k < m; ++k) g(k * (m + 1)) = g_diag(k);
  return g;
}

}  // namespace afrelay
