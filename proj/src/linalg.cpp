// SPDX-License-Identifier: Apache-2.0
#include "afrelay/linalg.hpp"

#include <algorithm>
#include <cmath>

#include "afrelay/error.hpp"

namespace afrelay {

namespace {

constexpr double kHermitianTol = 1e-8;
constexpr double kPencilRcond = 1e-12;

double max_abs(const ComplexMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

}  // namespace

HermitianMatrix::HermitianMatrix(const ComplexMatrix& m) {
  if (m.rows() != m.cols() || m.rows() == 0)
    throw InvalidInput("HermitianMatrix: input must be square and non-empty");
  const double skew = max_abs(m - m.adjoint());
  if (!std::isfinite(skew) || skew > kHermitianTol * std::max(1.0, max_abs(m)))
    throw InvalidInput("HermitianMatrix: input is not Hermitian (skew part " +
                       std::to_string(skew) + ")");
  m_ = 0.5 * (m + m.adjoint());
}

HermitianMatrix HermitianMatrix::identity(Eigen::Index dim) {
  return HermitianMatrix(ComplexMatrix::Identity(dim, dim));
}

HermitianMatrix HermitianMatrix::zero(Eigen::Index dim) {
  return HermitianMatrix(ComplexMatrix::Zero(dim, dim));
}

HermitianMatrix HermitianMatrix::outer(const ComplexVector& v) {
  return HermitianMatrix(v * v.adjoint());
}

double HermitianMatrix::quad(const ComplexVector& g) const {
  return g.dot(m_ * g).real();
}

double HermitianMatrix::trace_with(const HermitianMatrix& x) const {
  // tr(H X) = sum_ij H_ij X_ji = sum_ij H_ij conj(X_ij)
  return frob_inner(x.m_, m_);
}

HermitianMatrix HermitianMatrix::operator+(const HermitianMatrix& o) const {
  HermitianMatrix r;
  r.m_ = m_ + o.m_;
  return r;
}

HermitianMatrix HermitianMatrix::operator-(const HermitianMatrix& o) const {
  HermitianMatrix r;
  r.m_ = m_ - o.m_;
  return r;
}

HermitianMatrix HermitianMatrix::operator*(double s) const {
  HermitianMatrix r;
  r.m_ = m_ * s;
  return r;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

ComplexVector vec(const ComplexMatrix& a) {
  // Eigen storage is column-major, which is exactly vec().
  return Eigen::Map<const ComplexVector>(a.data(), a.size());
}

ComplexMatrix unvec(const ComplexVector& v, Eigen::Index side) {
  if (side * side != v.size())
    throw InvalidInput("unvec: length is not side^2");
  return Eigen::Map<const ComplexMatrix>(v.data(), side, side);
}

EigenDecomposition hermitian_eig(const HermitianMatrix& h) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h.matrix());
  if (es.info() != Eigen::Success)
    throw InvalidInput("hermitian_eig: eigensolver failed");
  return {es.eigenvalues(), es.eigenvectors()};
}

EigenDecomposition gen_eig(const HermitianMatrix& a, const HermitianMatrix& b) {
  if (a.dim() != b.dim())
    throw InvalidInput("gen_eig: dimension mismatch");
  Eigen::LLT<ComplexMatrix> llt(b.matrix());
  if (llt.info() != Eigen::Success || !(llt.rcond() > kPencilRcond))
    throw SingularPencil("gen_eig: right-hand matrix is not positive definite");

  // C = L^{-1} a L^{-H}
  const auto& l = llt.matrixL();
  ComplexMatrix c = l.solve(a.matrix());
  c = l.solve(c.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(0.5 * (c + c.adjoint()));
  if (es.info() != Eigen::Success)
    throw SingularPencil("gen_eig: eigensolver failed");

  ComplexMatrix v = llt.matrixU().solve(es.eigenvectors());
  return {es.eigenvalues(), std::move(v)};
}

PencilExtremes gen_eig_extremes(const HermitianMatrix& a, const HermitianMatrix& b) {
  auto ed = gen_eig(a, b);
  const Eigen::Index n = ed.values.size();
  return {ed.values(0), ed.values(n - 1), ed.vectors.col(n - 1), ed.vectors.col(0)};
}

double frob_inner(const ComplexMatrix& a, const ComplexMatrix& b) {
  return (a.conjugate().cwiseProduct(b)).sum().real();
}

}  // namespace afrelay
