// SPDX-License-Identifier: Apache-2.0
#include "afrelay/rages.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "afrelay/error.hpp"

namespace afrelay {

namespace {

constexpr int kRefine = 3;       // refinement factor of the second 2-D pass
constexpr int kSimplexMax = 400;         // objective evaluations in the ridge search
constexpr double kSimplexTol = 1e-10;    // simplex diameter in log rho
constexpr int kPolishMax = 50;           // Newton steps after the ridge search
constexpr double kFixedPointTol = 1e-13;  // on log rho
constexpr double kJacobianStep = 1e-7;
constexpr double kValueSlack = 1e-12;     // relative objective rounding allowance

struct Evaluated {
  double ls = 0.0, ln = 0.0;  // log rho_sig, log rho_noi
  ComplexVector g;
  double value = -1.0;
};

class Evaluator {
public:
  explicit Evaluator(const ProblemMatrices& pm) : pm_(pm) {}

  Evaluated at(double ls, double ln) {
    Evaluated e;
    e.ls = ls;
    e.ln = ln;
    e.g = candidate_g(std::exp(ls), std::exp(ln), pm_);
    e.value = objective(e.g, pm_);
    ++count;
    return e;
  }

  int count = 0;

private:
  const ProblemMatrices& pm_;
};

void check_bounds(const RhoBounds& b) {
  if (!(b.rho_sig_lo > 0.0) || !(b.rho_noi_lo > 0.0) || !(b.rho_sig_hi >= b.rho_sig_lo) ||
      !(b.rho_noi_hi >= b.rho_noi_lo))
    throw InvalidInput("rages: parameter bounds must be positive with lo <= hi");
}

// Nelder-Mead ascent of the objective in log parameters. The objective is
// concentrated on thin ridges, which a grid step or a Newton step can miss.
Evaluated ridge_search(Evaluator& ev, Evaluated start, double ds, double dn) {
  std::array<Evaluated, 3> s{start, ev.at(start.ls + ds, start.ln),
                             ev.at(start.ls, start.ln + dn)};
  auto order = [&] {
    std::sort(s.begin(), s.end(),
              [](const Evaluated& a, const Evaluated& b) { return a.value > b.value; });
  };
  auto along = [&](double t) {
    const double cs = 0.5 * (s[0].ls + s[1].ls), cn = 0.5 * (s[0].ln + s[1].ln);
    return ev.at(cs + t * (s[2].ls - cs), cn + t * (s[2].ln - cn));
  };
  const int budget = ev.count + kSimplexMax;
  order();
  while (ev.count < budget) {
    double diam = 0.0;
    for (int i = 1; i < 3; ++i)
      diam = std::max({diam, std::abs(s[i].ls - s[0].ls), std::abs(s[i].ln - s[0].ln)});
    if (diam < kSimplexTol) break;
    auto r = along(-1.0);
    if (r.value > s[0].value) {
      auto e = along(-2.0);
      s[2] = e.value > r.value ? std::move(e) : std::move(r);
    } else if (r.value > s[1].value) {
      s[2] = std::move(r);
    } else {
      auto c = r.value > s[2].value ? along(-0.5) : along(0.5);
      if (c.value > std::max(r.value, s[2].value)) {
        s[2] = std::move(c);
      } else {
        for (int i = 1; i < 3; ++i)
          s[i] = ev.at(0.5 * (s[0].ls + s[i].ls), 0.5 * (s[0].ln + s[i].ln));
      }
    }
    order();
  }
  return s[0];
}

RagesResult finish(const Evaluated& e, int evaluations) {
  RagesResult r;
  r.g = e.g;
  r.value = e.value;
  r.rho_sig = std::exp(e.ls);
  r.rho_noi = std::exp(e.ln);
  r.evaluations = evaluations;
  return r;
}

}  // namespace

ComplexVector candidate_g(double rho_sig, double rho_noi, const ProblemMatrices& pm) {
  if (!(rho_sig > 0.0) || !(rho_noi > 0.0))
    throw InvalidInput("candidate_g: rho_sig and rho_noi must be positive");
  const auto e = gen_eig_extremes(pm.a1 + pm.a2 * rho_sig, pm.b1 + pm.b2 * rho_noi);
  return scale_to_power(e.v_max, pm);
}

RhoBounds compute_rho_bounds(const SystemConfig& c, const ChannelSet& ch) {
  const double a1f = ch.h1f.squaredNorm();
  const double a2f = ch.h2f.squaredNorm();
  const double a1b = ch.h1b.squaredNorm();
  const double a2b = ch.h2b.squaredNorm();
  const double m = c.white_relay_noise ? 1.0 : static_cast<double>(c.m_r);

  RhoBounds b;
  b.gamma_sq = a1f * a2f * c.p_t1 * c.p_t2 / (a1f * c.p_t1 + a2f * c.p_t2);
  const double g2 = b.gamma_sq;
  b.rho_noi_hi = c.p_nr / c.p_n2 * m * a1b * g2 + c.p_n1 / c.p_n2;
  b.rho_noi_lo = 1.0 / (c.p_nr / c.p_n1 * m * a2b * g2 + c.p_n2 / c.p_n1);
  b.rho_sig_hi = c.p_t2 / c.p_n2 * a2f * a1b * g2 + c.p_nr / c.p_n2 * m * a1b * g2 +
                 c.p_n1 / c.p_n2;
  b.rho_sig_lo = 1.0 / (c.p_t1 / c.p_n1 * a1f * a2b * g2 + c.p_nr / c.p_n1 * m * a2b * g2 +
                        c.p_n2 / c.p_n1);
  return b;
}

double a_sig(double rho_sig, double rho_noi, const ProblemMatrices& pm) {
  const ComplexVector g = candidate_g(rho_sig, rho_noi, pm);
  return pm.a1.quad(g) / pm.a2.quad(g) - rho_sig;
}

double fixed_point_residual(const ComplexVector& g, const ProblemMatrices& pm) {
  const double rs = pm.a1.quad(g) / pm.a2.quad(g);
  const double rn = pm.b1.quad(g) / pm.b2.quad(g);
  const ComplexVector lhs = (pm.a1 + pm.a2 * rs).matrix() * g;
  const ComplexVector rhs_dir = (pm.b1 + pm.b2 * rn).matrix() * g;
  const cplx lambda = g.dot(lhs) / g.dot(rhs_dir);
  return (lhs - lambda * rhs_dir).norm() / lhs.norm();
}

RagesResult rages_2d(const ProblemMatrices& pm, const RhoBounds& bounds, int grid) {
  if (grid < 2) throw InvalidInput("rages_2d: grid must be at least 2");
  check_bounds(bounds);
  const double s0 = std::log(bounds.rho_sig_lo), s1 = std::log(bounds.rho_sig_hi);
  const double n0 = std::log(bounds.rho_noi_lo), n1 = std::log(bounds.rho_noi_hi);
  const double hs = (s1 - s0) / (grid - 1);
  const double hn = (n1 - n0) / (grid - 1);

  Evaluator ev(pm);
  Evaluated best;
  for (int i = 0; i < grid; ++i)
    for (int j = 0; j < grid; ++j) {
      auto e = ev.at(s0 + i * hs, n0 + j * hn);
      if (e.value > best.value) best = std::move(e);
    }

  // finer lattice over +-1 coarse cell around the best point
  const double cs = best.ls, cn = best.ln;
  for (int i = -kRefine; i <= kRefine; ++i)
    for (int j = -kRefine; j <= kRefine; ++j) {
      if (i == 0 && j == 0) continue;
      const double ls = cs + i * hs / kRefine;
      const double ln = cn + j * hn / kRefine;
      if (ls < s0 || ls > s1 || ln < n0 || ln > n1) continue;
      auto e = ev.at(ls, ln);
      if (e.value > best.value) best = std::move(e);
    }

  best = ridge_search(ev, best, hs / kRefine, hn / kRefine);

  // Polish: damped Newton on F(x) = log rho(g(x)) - x in log parameters, with
  // |F| as merit, started from the parameters the ridge point's g induces. The
  // result replaces the ridge point unless it is worse.
  const Evaluated scanned = best;
  auto residual = [&](const Evaluated& e) {
    return Eigen::Vector2d(std::log(pm.a1.quad(e.g) / pm.a2.quad(e.g)) - e.ls,
                           std::log(pm.b1.quad(e.g) / pm.b2.quad(e.g)) - e.ln);
  };
  Eigen::Vector2d f = residual(best);
  best = ev.at(best.ls + f(0), best.ln + f(1));
  f = residual(best);
  for (int k = 0; k < kPolishMax && f.lpNorm<Eigen::Infinity>() > kFixedPointTol; ++k) {
    Eigen::Matrix2d jac;
    for (int c = 0; c < 2; ++c) {
      const double h = kJacobianStep;
      const auto e = ev.at(best.ls + (c == 0 ? h : 0.0), best.ln + (c == 1 ? h : 0.0));
      jac.col(c) = (residual(e) - f) / h;
    }
    const Eigen::Vector2d dx = -jac.fullPivLu().solve(f);
    if (!dx.allFinite()) break;
    bool moved = false;
    for (double t = 1.0; t > 1e-6; t *= 0.5) {
      auto e = ev.at(best.ls + t * dx(0), best.ln + t * dx(1));
      const Eigen::Vector2d fe = residual(e);
      if (fe.lpNorm<Eigen::Infinity>() < f.lpNorm<Eigen::Infinity>()) {
        best = std::move(e);
        f = fe;
        moved = true;
        break;
      }
    }
    if (!moved) break;
  }
  if (best.value < scanned.value * (1.0 - kValueSlack)) best = scanned;
  return finish(best, ev.count);
}

RagesResult rages_1d(const ProblemMatrices& pm, const RhoBounds& bounds, double tol) {
  if (!(tol > 0.0)) throw InvalidInput("rages_1d: tol must be positive");
  check_bounds(bounds);
  const double ln = 0.5 * (std::log(bounds.rho_noi_lo) + std::log(bounds.rho_noi_hi));
  const double rn = std::exp(ln);
  double lo = std::log(bounds.rho_sig_lo), hi = std::log(bounds.rho_sig_hi);
  const double width = std::log1p(tol);

  Evaluator ev(pm);
  const double f_lo = a_sig(std::exp(lo), rn, pm);
  const double f_hi = a_sig(std::exp(hi), rn, pm);
  ev.count += 2;

  if (f_lo > 0.0 && f_hi < 0.0) {
    while (hi - lo > width) {
      const double mid = 0.5 * (lo + hi);
      const double f = a_sig(std::exp(mid), rn, pm);
      ++ev.count;
      (f > 0.0 ? lo : hi) = mid;
    }
    return finish(ev.at(0.5 * (lo + hi), ln), ev.count);
  }

  // golden-section maximization of the objective over log rho_sig
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
  Evaluated e1 = ev.at(x1, ln), e2 = ev.at(x2, ln);
  while (hi - lo > width) {
    if (e1.value >= e2.value) {
      hi = x2;
      x2 = x1;
      e2 = std::move(e1);
      x1 = hi - phi * (hi - lo);
      e1 = ev.at(x1, ln);
    } else {
      lo = x1;
      x1 = x2;
      e1 = std::move(e2);
      x2 = lo + phi * (hi - lo);
      e2 = ev.at(x2, ln);
    }
  }
  RagesResult r = finish(e1.value >= e2.value ? e1 : e2, ev.count);
  r.bracketed = false;
  return r;
}

}  // namespace afrelay
