// SPDX-License-Identifier: Apache-2.0
#include "afrelay/convex_kernel.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "afrelay/error.hpp"

namespace afrelay {

namespace {

constexpr double kBoxRelTol = 1e-12;

struct ActiveBox {
  double lo, hi;
};

// Iterates are kept as X = U diag(x) U^H. Working in the eigenbasis keeps
// X F X accurate entrywise when X is close to low rank.
struct Frame {
  ComplexMatrix u;
  std::array<ComplexMatrix, 4> f;  // A1, A2, B2, B1 expressed in the basis u
};

struct Point {
  ComplexMatrix v;  // eigenvectors relative to the current frame
  RealVector x;     // eigenvalues
  double a1 = 0.0, a2 = 0.0, beta = 0.0, b1 = 0.0;
  double phi = -std::numeric_limits<double>::infinity();
  bool ok = false;
};

class BarrierProblem {
public:
  BarrierProblem(const SubproblemSpec& spec, std::optional<ActiveBox> box)
      : spec_(spec), box_(box) {}

  Frame frame(const ComplexMatrix& u) const {
    Frame fr;
    fr.u = u;
    const std::array<const ComplexMatrix*, 4> f = {&spec_.a1.matrix(), &spec_.a2.matrix(),
                                                   &spec_.b2.matrix(), &spec_.b1.matrix()};
    for (int k = 0; k < 4; ++k) {
      ComplexMatrix m = u.adjoint() * (*f[k]) * u;
      fr.f[k] = 0.5 * (m + m.adjoint());
    }
    return fr;
  }

  // Evaluates the barrier objective at Y (given in the frame basis);
  // ok == false if Y is outside the domain.
  Point evaluate(const Frame& fr, const ComplexMatrix& y, double mu) const {
    Point p;
    const ComplexMatrix ys = 0.5 * (y + y.adjoint());
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(ys);
    if (es.info() != Eigen::Success) return p;
    if (!(es.eigenvalues()(0) > 0.0)) return p;
    p.a1 = frob_inner(fr.f[0], ys);
    p.a2 = spec_.include_log_tau ? frob_inner(fr.f[1], ys) : 1.0;
    p.beta = frob_inner(fr.f[2], ys);
    p.b1 = frob_inner(fr.f[3], ys);
    if (!(p.a1 > 0.0) || !(p.a2 > 0.0)) return p;
    double logdet = 0.0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
      logdet += std::log(es.eigenvalues()(i));
    double phi = std::log(p.a1) + std::log(p.a2) - spec_.linear_slope * p.beta + mu * logdet;
    if (box_) {
      const double sl = p.beta - box_->lo;
      const double sh = box_->hi - p.beta;
      if (!(sl > 0.0) || !(sh > 0.0)) return p;
      phi += mu * (std::log(sl) + std::log(sh));
    }
    p.v = es.eigenvectors();
    p.x = es.eigenvalues();
    p.phi = phi;
    p.ok = true;
    return p;
  }

  // Gradient weights of f on (A1, A2, B2), box barrier included in the B2 weight.
  std::array<double, 3> weights(const Point& p, double mu) const {
    double w3 = -spec_.linear_slope;
    if (box_) w3 += mu / (p.beta - box_->lo) - mu / (box_->hi - p.beta);
    return {1.0 / p.a1, spec_.include_log_tau ? 1.0 / p.a2 : 0.0, w3};
  }

  struct Step {
    ComplexMatrix delta;      // in the frame basis, where X = diag(x)
    double nu = 0.0;
    double decrement = 0.0;   // <G - nu B1, delta>
    double slope = 0.0;       // <G, delta>, directional derivative of phi
  };

  // Newton direction for maximizing phi subject to tr(B1 X) = 1, at X = diag(x).
  Step newton_step(const Frame& fr, const Point& p, double mu) const {
    const RealVector& x = p.x;
    const Eigen::Index n = x.size();
    const ComplexMatrix xx = x * x.transpose().cast<cplx>();  // x_i x_j
    std::array<ComplexMatrix, 4> xfx;
    for (int k = 0; k < 4; ++k) xfx[k] = fr.f[k].cwiseProduct(xx);

    const auto w = weights(p, mu);
    double c3 = 0.0;
    if (box_) {
      const double sl = p.beta - box_->lo;
      const double sh = box_->hi - p.beta;
      c3 = mu / (sl * sl) + mu / (sh * sh);
    }
    const std::array<double, 3> c = {w[0] * w[0], w[1] * w[1], c3};

    // X grad(f) X; the barrier part contributes mu X
    const ComplexMatrix xgx = w[0] * xfx[0] + w[1] * xfx[1] + w[2] * xfx[2];

    // m(j, k) = <F_j, X F_k X>
    Eigen::Matrix4d m;
    Eigen::Vector4d mg;
    for (int j = 0; j < 4; ++j) {
      for (int k = 0; k < 4; ++k) m(j, k) = frob_inner(fr.f[j], xfx[k]);
      double diag = 0.0;
      for (Eigen::Index i = 0; i < n; ++i) diag += fr.f[j](i, i).real() * x(i);
      mg(j) = frob_inner(fr.f[j], xgx) + mu * diag;
    }
    const double r = 1.0 - p.b1;

    // Unknowns (y1, y2, y3, nu) with y_k = c_k <F_k, delta>; this scaling stays
    // well conditioned when the box curvature c3 is large.
    Eigen::Matrix4d sys = Eigen::Matrix4d::Zero();
    Eigen::Vector4d rhs;
    for (int j = 0; j < 3; ++j) {
      if (c[j] == 0.0) {
        sys(j, j) = 1.0;
        rhs(j) = 0.0;
        continue;
      }
      sys(j, j) += mu / c[j];
      for (int k = 0; k < 3; ++k) sys(j, k) += m(j, k);
      sys(j, 3) = m(j, 3);
      rhs(j) = mg(j);
    }
    for (int k = 0; k < 3; ++k) sys(3, k) = m(3, k);
    sys(3, 3) = m(3, 3);
    rhs(3) = mg(3) - mu * r;

    const Eigen::Vector4d sol = sys.fullPivLu().solve(rhs);

    Step s;
    s.nu = sol(3);
    // delta = X K X / mu + X with K = grad(f) - nu B1 - sum c z F
    ComplexMatrix k = w[0] * fr.f[0] + w[1] * fr.f[1] + w[2] * fr.f[2] - s.nu * fr.f[3];
    for (int j = 0; j < 3; ++j) k -= sol(j) * fr.f[j];
    ComplexMatrix d = k.cwiseProduct(xx) / mu;
    d.diagonal() += x.cast<cplx>();
    d = 0.5 * (d + d.adjoint());
    // Directions where only the barrier curves carry rounding noise of order
    // eps / mu; restore tr(B1 delta) = r along X.
    d.diagonal() += ((r - frob_inner(fr.f[3], d)) / p.b1) * x.cast<cplx>();
    s.delta = std::move(d);

    double gd = 0.0;
    for (int j = 0; j < 3; ++j) gd += w[j] * frob_inner(fr.f[j], s.delta);
    double tr_xinv_delta = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) tr_xinv_delta += s.delta(i, i).real() / x(i);
    s.slope = gd + mu * tr_xinv_delta;
    // decrement as the Hessian quadratic form, which stays nonnegative
    double q = 0.0;
    for (Eigen::Index j = 0; j < n; ++j)
      for (Eigen::Index i = 0; i < n; ++i) q += std::norm(s.delta(i, j)) / (x(i) * x(j));
    q *= mu;
    for (int j = 0; j < 3; ++j) {
      const double zj = frob_inner(fr.f[j], s.delta);
      q += c[j] * zj * zj;
    }
    s.decrement = q;
    return s;
  }

private:
  const SubproblemSpec& spec_;
  std::optional<ActiveBox> box_;
};

// Strictly feasible start. Without a box this is B1^{-1} / n; with a box the
// weights on the generalized eigenvectors of (B2, B1) are tilted so that
// tr(B2 X0) sits in the middle of the box.
ComplexMatrix initial_point(const EigenDecomposition& pencil, std::optional<ActiveBox> box) {
  const Eigen::Index n = pencil.values.size();
  RealVector w = RealVector::Constant(n, 1.0 / static_cast<double>(n));
  if (box && n > 1) {
    const double lmin = pencil.values(0);
    const double lmax = pencil.values(n - 1);
    const double lbar = pencil.values.mean();
    const double target = 0.5 * (box->lo + box->hi);
    double eta = 0.5;
    for (int it = 0; it < 60; ++it, eta *= 0.5) {
      const double y = (target - eta * lbar) / (1.0 - eta);
      if (y > lmin && y < lmax) {
        const double theta = (lmax - y) / (lmax - lmin);
        w *= eta;
        w(0) += (1.0 - eta) * theta;
        w(n - 1) += (1.0 - eta) * (1.0 - theta);
        break;
      }
    }
  }
  ComplexMatrix x = pencil.vectors * w.asDiagonal() * pencil.vectors.adjoint();
  return 0.5 * (x + x.adjoint());
}

void validate(const SubproblemSpec& spec) {
  const Eigen::Index n = spec.b1.dim();
  if (n == 0 || spec.a1.dim() != n || spec.a2.dim() != n || spec.b2.dim() != n)
    throw InvalidInput("solve_subproblem: matrix dimensions differ");
  if (!(spec.linear_slope >= 0.0) || !std::isfinite(spec.linear_slope))
    throw InvalidInput("solve_subproblem: linear_slope must be finite and >= 0");
  if (spec.beta_box && !(spec.beta_box->first <= spec.beta_box->second))
    throw InvalidInput("solve_subproblem: beta box has lo > hi");
}

}  // namespace

double subproblem_objective(const SubproblemSpec& spec, const HermitianMatrix& x) {
  double v = std::log(spec.a1.trace_with(x)) - spec.linear_slope * spec.b2.trace_with(x);
  if (spec.include_log_tau) v += std::log(spec.a2.trace_with(x));
  return v;
}

SubproblemSolution solve_subproblem(const SubproblemSpec& spec, const BarrierOptions& opt) {
  validate(spec);
  const auto pencil = gen_eig(spec.b2, spec.b1);  // throws SingularPencil if B1 is not PD
  const Eigen::Index n = pencil.values.size();
  const double lmin = pencil.values(0);
  const double lmax = pencil.values(n - 1);
  const double scale = std::max({std::abs(lmin), std::abs(lmax), 1e-300});

  std::optional<ActiveBox> box;
  if (spec.beta_box) {
    const auto [lo, hi] = *spec.beta_box;
    if (lo > lmax + kBoxRelTol * scale || hi < lmin - kBoxRelTol * scale)
      throw Infeasible("solve_subproblem: beta box [" + std::to_string(lo) + ", " +
                       std::to_string(hi) + "] misses the reachable range [" +
                       std::to_string(lmin) + ", " + std::to_string(lmax) + "]");
    const bool covers = lo <= lmin + kBoxRelTol * scale && hi >= lmax - kBoxRelTol * scale;
    if (!covers) {
      if (hi - lo <= kBoxRelTol * scale)
        throw Infeasible("solve_subproblem: beta box has empty interior");
      box = ActiveBox{lo, hi};
    }
  }

  SubproblemSolution out;
  out.box_active = box.has_value();

  if (n == 1) {
    // tr(B1 X) = 1 pins X to the single point 1 / b1.
    const double x = 1.0 / spec.b1(0, 0).real();
    out.x = HermitianMatrix(ComplexMatrix::Constant(1, 1, x));
    out.tau = spec.a2(0, 0).real() * x;
    out.beta = spec.b2(0, 0).real() * x;
    out.value = subproblem_objective(spec, out.x);
    out.dual.z = HermitianMatrix::zero(1);
    out.dual.nu = 1.0 / x;  // any multiplier works; the feasible set is a point
    return out;
  }

  BarrierProblem bp(spec, box);
  double mu = opt.mu_start;
  Frame fr;
  Point p;
  {
    const ComplexMatrix x0 = initial_point(pencil, box);
    fr = bp.frame(ComplexMatrix::Identity(n, n));
    p = bp.evaluate(fr, x0, mu);
    if (!p.ok)
      throw InvalidInput("solve_subproblem: tr(A1 X0) or tr(A2 X0) is not positive");
    fr = bp.frame(p.v);
  }

  int steps = 0;
  BarrierProblem::Step last;
  for (;;) {
    p = bp.evaluate(fr, p.x.cast<cplx>().asDiagonal(), mu);
    fr = bp.frame(fr.u * p.v);
    // centering
    for (;;) {
      last = bp.newton_step(fr, p, mu);
      if (last.slope <= opt.centering_tol) break;
      if (++steps > opt.max_newton)
        throw ConvergenceFailure("solve_subproblem: Newton budget exhausted at mu=" +
                                     std::to_string(mu),
                                 std::sqrt(std::max(last.decrement, 0.0)));
      const ComplexMatrix x_now = p.x.cast<cplx>().asDiagonal();
      double t = 1.0;
      Point trial;
      for (int ls = 0; ls < 60; ++ls, t *= 0.5) {
        trial = bp.evaluate(fr, x_now + t * last.delta, mu);
        if (trial.ok && trial.phi >= p.phi + 0.25 * t * last.slope) break;
        trial.ok = false;
      }
      if (!trial.ok) break;  // no progress possible at working precision
      fr = bp.frame(fr.u * trial.v);
      // back onto tr(B1 X) = 1 exactly
      p = bp.evaluate(fr, (trial.x / trial.b1).cast<cplx>().asDiagonal(), mu);
      if (!p.ok) p = bp.evaluate(fr, trial.x.cast<cplx>().asDiagonal(), mu);
    }
    if (mu <= opt.mu_final * (1.0 + 1e-12)) break;
    mu = std::max(mu / opt.mu_factor, opt.mu_final);
  }

  const ComplexMatrix x_full = fr.u * p.x.cast<cplx>().asDiagonal() * fr.u.adjoint();
  out.x = HermitianMatrix(0.5 * (x_full + x_full.adjoint()));
  out.tau = spec.include_log_tau ? p.a2 : spec.a2.trace_with(out.x);
  out.beta = p.beta;
  out.value = subproblem_objective(spec, out.x);
  out.newton_steps = steps;

  // Dual certificate. Z = nu B1 - grad f - (l_lo - l_hi) B2 zeroes the gradient of
  // the Lagrangian at X, so sup_X L = L(X) and Z >= 0 makes it a valid bound.
  // For a net box multiplier lam = l_lo - l_hi the smallest admissible nu is the
  // top eigenvalue of the pencil (grad f + lam B2, B1), and the resulting gap is
  // convex in lam; its slope is beta(v_top) minus the active box side.
  const double r = 1.0 - p.b1;
  const double w2 = spec.include_log_tau ? 1.0 / p.a2 : 0.0;
  const ComplexMatrix grad0 = fr.f[0] / p.a1 + w2 * fr.f[1] - spec.linear_slope * fr.f[2];
  const HermitianMatrix b1f(fr.f[3]);
  struct Cert {
    double lam, nu, gap, slope;
  };
  auto certificate = [&](double lam) {
    const ComplexMatrix g = grad0 + lam * fr.f[2];
    const auto e = gen_eig_extremes(HermitianMatrix(0.5 * (g + g.adjoint())), b1f);
    Cert c{lam, e.lambda_max, 0.0, 0.0};
    double gx = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) gx += g(i, i).real() * p.x(i);
    c.gap = c.nu * p.b1 - gx - c.nu * r;
    const double beta_top = e.v_max.dot(fr.f[2] * e.v_max).real();
    if (box) {
      if (lam > 0.0) {
        c.gap += lam * (p.beta - box->lo);
        c.slope = beta_top - box->lo;
      } else {
        c.gap -= lam * (box->hi - p.beta);
        c.slope = beta_top - box->hi;
      }
    }
    return c;
  };

  Cert best = certificate(0.0);
  if (box) {
    const double lam0 = mu / (p.beta - box->lo) - mu / (box->hi - p.beta);
    best = certificate(lam0);
    auto keep = [&](const Cert& c) {
      if (c.gap < best.gap) best = c;
    };
    // bracket the sign change of the slope, then bisect
    double step = std::max(std::abs(lam0), 1e-6);
    Cert lo_c = best, hi_c = best;
    for (int it = 0; it < 200 && lo_c.slope > 0.0; ++it, step *= 2.0) {
      lo_c = certificate(lo_c.lam - step);
      keep(lo_c);
    }
    step = std::max(std::abs(lam0), 1e-6);
    for (int it = 0; it < 200 && hi_c.slope < 0.0; ++it, step *= 2.0) {
      hi_c = certificate(hi_c.lam + step);
      keep(hi_c);
    }
    if (lo_c.slope <= 0.0 && hi_c.slope >= 0.0) {
      Cert zero = certificate(0.0);
      keep(zero);
      double a = lo_c.lam, b = hi_c.lam;
      for (int it = 0; it < 200 && b - a > 1e-15 * std::max(1.0, std::abs(a) + std::abs(b)); ++it) {
        const Cert m = certificate(0.5 * (a + b));
        keep(m);
        (m.slope > 0.0 ? b : a) = m.lam;
      }
    }
  }

  DualCertificate& dc = out.dual;
  dc.nu = best.nu;
  dc.box_lo = std::max(best.lam, 0.0);
  dc.box_hi = std::max(-best.lam, 0.0);
  dc.psd_shift = std::abs(best.nu - last.nu);
  const ComplexMatrix zf = best.nu * fr.f[3] - grad0 - best.lam * fr.f[2];
  const ComplexMatrix z = fr.u * zf * fr.u.adjoint();
  dc.z = HermitianMatrix(0.5 * (z + z.adjoint()));
  dc.duality_gap = best.gap;
  dc.complementarity = best.gap + best.nu * r;
  // residual of grad f - nu B1 - lam B2 + Z = 0 in the original basis
  const ComplexMatrix grad = spec.a1.matrix() / p.a1 + w2 * spec.a2.matrix() -
                             spec.linear_slope * spec.b2.matrix();
  dc.stationarity = (grad - best.nu * spec.b1.matrix() + best.lam * spec.b2.matrix() +
                     dc.z.matrix()).norm();
  const double z_neg = std::max(0.0, -hermitian_eig(dc.z).values(0));
  out.kkt_residual =
      std::max({dc.stationarity, dc.complementarity, z_neg, std::abs(r)});
  return out;
}

}  // namespace afrelay
