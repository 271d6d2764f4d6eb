// SPDX-License-Identifier: Apache-2.0
#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace afrelay::testing {

ComplexMatrix random_matrix(Xoshiro256& rng, Eigen::Index rows, Eigen::Index cols) {
  ComplexMatrix m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = cplx(rng.normal(), rng.normal());
  return m;
}

ComplexVector random_vector(Xoshiro256& rng, Eigen::Index n) {
  return random_matrix(rng, n, 1).col(0);
}

HermitianMatrix random_hermitian(Xoshiro256& rng, Eigen::Index n) {
  const ComplexMatrix m = random_matrix(rng, n, n);
  return HermitianMatrix(ComplexMatrix(m + m.adjoint()));
}

HermitianMatrix random_pd(Xoshiro256& rng, Eigen::Index n, double shift) {
  const ComplexMatrix m = random_matrix(rng, n, n);
  return HermitianMatrix(ComplexMatrix(m * m.adjoint() + shift * ComplexMatrix::Identity(n, n)));
}

namespace {

// Euclidean projection of v onto {w >= 0, sum w = 1}.
RealVector project_simplex(const RealVector& v) {
  std::vector<double> u(v.data(), v.data() + v.size());
  std::sort(u.begin(), u.end(), std::greater<>());
  double css = 0.0, theta = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    css += u[k];
    const double t = (css - 1.0) / static_cast<double>(k + 1);
    if (u[k] - t > 0.0) theta = t;
  }
  return (v.array() - theta).max(0.0).matrix();
}

ComplexMatrix project_spectraplex(const ComplexMatrix& y) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(0.5 * (y + y.adjoint()));
  const RealVector w = project_simplex(es.eigenvalues());
  return es.eigenvectors() * w.asDiagonal() * es.eigenvectors().adjoint();
}

double re_inner(const ComplexMatrix& a, const ComplexMatrix& b) {
  return (a.conjugate().cwiseProduct(b)).sum().real();
}

}  // namespace

ReferenceSolution projected_gradient_reference(const HermitianMatrix& a1, const HermitianMatrix& a2,
                                               const HermitianMatrix& b1, const HermitianMatrix& b2,
                                               double slope, int max_iter) {
  const Eigen::Index n = b1.dim();
  // B1^{-1/2} from its own eigendecomposition
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(b1.matrix());
  const ComplexMatrix w = es.eigenvectors() *
                          es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
                          es.eigenvectors().adjoint();
  const ComplexMatrix c1 = w * a1.matrix() * w;
  const ComplexMatrix c2 = w * a2.matrix() * w;
  const ComplexMatrix d2 = w * b2.matrix() * w;

  auto f = [&](const ComplexMatrix& y) {
    return std::log(re_inner(y, c1)) + std::log(re_inner(y, c2)) - slope * re_inner(y, d2);
  };
  auto grad = [&](const ComplexMatrix& y) -> ComplexMatrix {
    return c1 / re_inner(y, c1) + c2 / re_inner(y, c2) - slope * d2;
  };

  ComplexMatrix y = ComplexMatrix::Identity(n, n) / static_cast<double>(n);
  double fy = f(y);
  double step = 1.0;
  int it = 0;
  for (; it < max_iter; ++it) {
    const ComplexMatrix g = grad(y);
    ComplexMatrix y_new;
    double f_new = 0.0;
    for (int bt = 0; bt < 60; ++bt) {
      y_new = project_spectraplex(y + step * g);
      const ComplexMatrix d = y_new - y;
      f_new = f(y_new);
      if (std::isfinite(f_new) && f_new >= fy + re_inner(g, d) - re_inner(d, d) / (2.0 * step))
        break;
      step *= 0.5;
    }
    const double moved = (y_new - y).norm();
    y = y_new;
    fy = f_new;
    step *= 1.5;
    if (moved < 1e-15) break;
  }
  const ComplexMatrix x = w * y * w;
  return {fy, HermitianMatrix(ComplexMatrix(0.5 * (x + x.adjoint()))), it};
}

double sum_rate_effective_channels(const ComplexMatrix& g, const SystemConfig& config,
                                   const ChannelSet& ch) {
  const cplx h12 = (ch.h1b.transpose() * g * ch.h2f)(0, 0);
  const cplx h21 = (ch.h2b.transpose() * g * ch.h1f)(0, 0);
  const ComplexMatrix rnr = relay_noise_covariance(config).matrix();
  const double pn1 =
      (ch.h1b.transpose() * g * rnr * g.adjoint() * ch.h1b.conjugate())(0, 0).real() + config.p_n1;
  const double pn2 =
      (ch.h2b.transpose() * g * rnr * g.adjoint() * ch.h2b.conjugate())(0, 0).real() + config.p_n2;
  const double snr1 = std::norm(h12) * config.p_t2 / pn1;
  const double snr2 = std::norm(h21) * config.p_t1 / pn2;
  return 0.5 * std::log2(1.0 + snr1) + 0.5 * std::log2(1.0 + snr2);
}

double random_search_objective(const ProblemMatrices& pm, Xoshiro256& rng, int samples) {
  double best = 0.0;
  for (int s = 0; s < samples; ++s) {
    const ComplexVector g = random_vector(rng, pm.n);
    const double v = (pm.a1.quad(g) / pm.b1.quad(g)) * (pm.a2.quad(g) / pm.b2.quad(g));
    best = std::max(best, v);
  }
  return best;
}

SystemConfig symmetric_config(int m_r, double noise) {
  SystemConfig c;
  c.m_r = m_r;
  c.p_t1 = c.p_t2 = c.p_tr = 1.0;
  c.p_n1 = c.p_n2 = c.p_nr = noise;
  c.d2 = 0.5;
  c.nu = 3.0;
  return c;
}

}  // namespace afrelay::testing
