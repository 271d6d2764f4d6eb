// SPDX-License-Identifier: Apache-2.0
#include "afrelay/potdc.hpp"

#include <cmath>
#include <string>

#include "afrelay/error.hpp"
#include "afrelay/rng.hpp"

namespace afrelay {

namespace {

constexpr double kRankOneRatio = 1e-6;
constexpr int kRandomDraws = 200;

double true_value(const SubproblemSolution& s, const ProblemMatrices& pm) {
  return std::log(pm.a1.trace_with(s.x)) + std::log(s.tau) - std::log(s.beta);
}

}  // namespace

RankOneExtraction extract_rank_one(const HermitianMatrix& x, const ProblemMatrices& pm,
                                   std::uint64_t seed) {
  if (x.dim() != pm.n) throw InvalidInput("extract_rank_one: dimension mismatch");
  const auto eig = hermitian_eig(x);
  const Eigen::Index n = eig.values.size();
  const double l1 = eig.values(n - 1);
  if (!(l1 > 0.0) || l1 <= 1e-300)
    throw InvalidInput("extract_rank_one: x is numerically zero");
  const double l2 = n > 1 ? std::max(eig.values(n - 2), 0.0) : 0.0;

  RankOneExtraction out;
  out.rank_gap = l2 / l1;
  if (out.rank_gap <= kRankOneRatio) {
    ComplexVector v = eig.vectors.col(n - 1);
    out.g = v / std::sqrt(pm.b1.quad(v));
    return out;
  }

  out.certified = false;
  RealVector sq = eig.values.cwiseMax(0.0).cwiseSqrt();
  const ComplexMatrix root = eig.vectors * sq.cast<cplx>().asDiagonal();
  Xoshiro256 rng(seed);
  double best = -1.0;
  for (int k = 0; k < kRandomDraws; ++k) {
    ComplexVector w(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double re = rng.normal();
      const double im = rng.normal();
      w(i) = cplx(re, im) * std::sqrt(0.5);
    }
    ComplexVector g = root * w;
    const double b = pm.b1.quad(g);
    if (!(b > 0.0)) continue;
    g /= std::sqrt(b);
    const double v = objective(g, pm);
    if (v > best) {
      best = v;
      out.g = g;
    }
  }
  if (best < 0.0) throw InvalidInput("extract_rank_one: no usable random draw");
  return out;
}

double relaxed_kkt_residual(const HermitianMatrix& x, const ProblemMatrices& pm) {
  const double a1 = pm.a1.trace_with(x);
  const double a2 = pm.a2.trace_with(x);
  const double b2 = pm.b2.trace_with(x);
  const double b1 = pm.b1.trace_with(x);
  const HermitianMatrix grad = pm.a1 * (1.0 / a1) + pm.a2 * (1.0 / a2) - pm.b2 * (1.0 / b2);
  // <grad h, x> = 1 + 1 - 1 on the constraint surface
  const double top = gen_eig_extremes(grad, pm.b1).lambda_max;
  return std::max(top * b1 - grad.trace_with(x), 0.0) + std::abs(b1 - 1.0);
}

PotdcResult run_potdc(const ProblemMatrices& pm, const PotdcOptions& opt) {
  if (!(opt.epsilon > 0.0)) throw InvalidInput("run_potdc: epsilon must be positive");
  if (opt.max_iter < 1) throw InvalidInput("run_potdc: max_iter must be at least 1");

  const auto iv = tau_beta_intervals(pm);
  double beta_c = opt.beta_c_init.value_or(std::sqrt(iv.beta_min * iv.beta_max));
  if (!(beta_c > 0.0) || !std::isfinite(beta_c))
    throw InvalidInput("run_potdc: beta_c must be positive");

  SubproblemSpec spec{pm.a1, pm.a2, pm.b1, pm.b2, 0.0, std::nullopt, true};
  PotdcResult res;
  SubproblemSolution kept;
  double kept_value = 0.0;

  for (int k = 1; k <= opt.max_iter; ++k) {
    spec.linear_slope = 1.0 / beta_c;
    SubproblemSolution sol;
    try {
      sol = solve_subproblem(spec, opt.barrier);
    } catch (const ConvergenceFailure& e) {
      throw ConvergenceFailure("run_potdc iteration " + std::to_string(k) + ": " + e.what(),
                               e.last_residual());
    } catch (const Error& e) {
      throw Error("run_potdc iteration " + std::to_string(k) + ": " + e.what());
    }
    const double v = true_value(sol, pm);
    res.iterations = k;

    // The tangent of log beta lies above it, so an exact subproblem solution can
    // never lower the true value. A drop can only be subproblem noise near the
    // fixed point; keep the previous iterate and stop.
    if (k > 1 && v < kept_value) {
      res.value_history.push_back(kept_value);
      break;
    }
    const double prev = kept_value;
    kept = std::move(sol);
    kept_value = v;
    res.value_history.push_back(v);
    beta_c = kept.beta;
    if (k > 1 && v - prev < opt.epsilon) break;
  }

  res.x_final = kept.x;
  res.tau = kept.tau;
  res.beta = kept.beta;
  res.relaxed_value = kept_value;
  res.kkt_residual = relaxed_kkt_residual(kept.x, pm);
  const auto ex = extract_rank_one(kept.x, pm);
  res.g = scale_to_power(ex.g, pm);
  res.rank_gap = ex.rank_gap;
  res.certified = ex.certified;
  return res;
}

}  // namespace afrelay
