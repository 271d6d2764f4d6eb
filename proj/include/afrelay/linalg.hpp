// SPDX-License-Identifier: Apache-2.0
//
// Dense complex linear algebra used throughout the library. Matrices are small
// (at most 36x36 for a six-antenna relay), so everything is dense and eager.
#pragma once

#include <complex>

#include <Eigen/Dense>

namespace afrelay {

using cplx = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Hermitian matrix. Construction checks the input is Hermitian to within a
/// relative tolerance and stores the symmetrized part (H + H^H) / 2.
class HermitianMatrix {
public:
  HermitianMatrix() = default;
  explicit HermitianMatrix(const ComplexMatrix& m);

  static HermitianMatrix identity(Eigen::Index dim);
  static HermitianMatrix zero(Eigen::Index dim);
  /// v v^H
  static HermitianMatrix outer(const ComplexVector& v);

  Eigen::Index dim() const noexcept { return m_.rows(); }
  const ComplexMatrix& matrix() const noexcept { return m_; }
  cplx operator()(Eigen::Index i, Eigen::Index j) const { return m_(i, j); }

  /// Real part of g^H H g.
  double quad(const ComplexVector& g) const;
  /// Real part of tr(H X) for Hermitian X.
  double trace_with(const HermitianMatrix& x) const;

  HermitianMatrix operator+(const HermitianMatrix& o) const;
  HermitianMatrix operator-(const HermitianMatrix& o) const;
  HermitianMatrix operator*(double s) const;

private:
  ComplexMatrix m_;
};

inline HermitianMatrix operator*(double s, const HermitianMatrix& h) { return h * s; }

/// Kronecker product; block (i, j) of the result is a(i, j) * b.
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// Column-major stacking of the columns of `a`.
ComplexVector vec(const ComplexMatrix& a);

/// Inverse of vec for a square matrix of side `side`.
ComplexMatrix unvec(const ComplexVector& v, Eigen::Index side);

struct EigenDecomposition {
  RealVector values;     ///< ascending
  ComplexMatrix vectors; ///< unitary, column k pairs with values[k]
};

EigenDecomposition hermitian_eig(const HermitianMatrix& h);

struct PencilExtremes {
  double lambda_min;
  double lambda_max;
  ComplexVector v_max; ///< a v = lambda_max b v, normalized to v^H b v = 1
  ComplexVector v_min; ///< same for lambda_min
};

/// Extreme generalized eigenvalues of the Hermitian-definite pencil (a, b),
/// computed by whitening with the Cholesky factor of b. Throws SingularPencil
/// if b is not positive definite.
PencilExtremes gen_eig_extremes(const HermitianMatrix& a, const HermitianMatrix& b);

/// Full generalized eigendecomposition of (a, b): V^H b V = I, V^H a V = diag(values),
/// values ascending.
EigenDecomposition gen_eig(const HermitianMatrix& a, const HermitianMatrix& b);

/// Frobenius inner product Re tr(A^H B).
double frob_inner(const ComplexMatrix& a, const ComplexMatrix& b);

}  // namespace afrelay
