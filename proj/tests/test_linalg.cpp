// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include "afrelay/error.hpp"
#include "afrelay/linalg.hpp"
#include "oracles.hpp"

using namespace afrelay;
using namespace afrelay::testing;

TEST_CASE("kron of identities and scalars") {
  CHECK((kron(ComplexMatrix::Identity(2, 2), ComplexMatrix::Identity(3, 3)) -
         ComplexMatrix::Identity(6, 6)).norm() == 0.0);

  Xoshiro256 rng(1);
  const ComplexMatrix b = random_matrix(rng, 3, 2);
  const ComplexMatrix two = ComplexMatrix::Constant(1, 1, 2.0);
  CHECK((kron(two, b) - 2.0 * b).norm() == 0.0);

  const ComplexMatrix a = random_matrix(rng, 2, 3);
  const ComplexMatrix k = kron(a, b);
  CHECK(k.rows() == 6);
  CHECK(k.cols() == 6);
  CHECK(std::abs(k(3, 5) - a(1, 2) * b(0, 1)) == 0.0);
}

TEST_CASE("vec stacks columns") {
  ComplexMatrix m(2, 2);
  m << 1.0, 3.0, 2.0, 4.0;
  const ComplexVector v = vec(m);
  REQUIRE(v.size() == 4);
  for (int i = 0; i < 4; ++i) CHECK(v(i) == cplx(i + 1.0, 0.0));
  CHECK(vec(ComplexMatrix::Zero(3, 3)).norm() == 0.0);
  CHECK(vec(ComplexMatrix::Zero(3, 3)).size() == 9);
  CHECK((unvec(v, 2) - m).norm() == 0.0);
}

TEST_CASE("Kronecker and trace identities on random matrices") {
  Xoshiro256 rng(7);
  for (int n : {2, 3, 4}) {
    for (int trial = 0; trial < 100; ++trial) {
      const ComplexMatrix a = random_matrix(rng, n, n);
      const ComplexMatrix b = random_matrix(rng, n, n);
      const ComplexMatrix c = random_matrix(rng, n, n);
      // vec(A B C) = (C^T kron A) vec(B)
      const ComplexVector lhs = vec(a * b * c);
      const ComplexVector rhs = kron(c.transpose(), a) * vec(b);
      CHECK((lhs - rhs).norm() <= 1e-12 * lhs.norm());
      // tr(A^H B) = vec(A)^H vec(B)
      const cplx t1 = (a.adjoint() * b).trace();
      const cplx t2 = vec(a).dot(vec(b));
      CHECK(std::abs(t1 - t2) <= 1e-12 * std::max(1.0, std::abs(t1)));
    }
  }
}

TEST_CASE("HermitianMatrix construction") {
  ComplexMatrix m(2, 2);
  m << 1.0, cplx(0.0, 1.0), cplx(0.0, -1.0), 2.0;
  const HermitianMatrix h(m);
  CHECK(h.dim() == 2);

  ComplexMatrix bad = m;
  bad(0, 1) = 5.0;
  CHECK_THROWS_AS(HermitianMatrix{bad}, InvalidInput);

  // rounding-level asymmetry is absorbed
  ComplexMatrix near = m;
  near(0, 1) += 1e-14;
  const HermitianMatrix hn(near);
  CHECK(hn(0, 1) == std::conj(hn(1, 0)));
}

TEST_CASE("hermitian_eig basics") {
  const auto e = hermitian_eig(HermitianMatrix::identity(3));
  for (int i = 0; i < 3; ++i) CHECK(e.values(i) == doctest::Approx(1.0));

  ComplexMatrix d = ComplexMatrix::Zero(3, 3);
  d(0, 0) = 5.0;
  d(1, 1) = 2.0;
  d(2, 2) = -1.0;
  const auto ed = hermitian_eig(HermitianMatrix(d));
  CHECK(ed.values(0) == doctest::Approx(-1.0));
  CHECK(ed.values(1) == doctest::Approx(2.0));
  CHECK(ed.values(2) == doctest::Approx(5.0));
}

TEST_CASE("hermitian_eig reconstructs and is unitary") {
  Xoshiro256 rng(11);
  for (int n : {1, 2, 5, 9, 16}) {
    for (int trial = 0; trial < 20; ++trial) {
      const HermitianMatrix h = random_hermitian(rng, n);
      const auto e = hermitian_eig(h);
      const ComplexMatrix rec = e.vectors * e.values.asDiagonal() * e.vectors.adjoint();
      CHECK((rec - h.matrix()).norm() <= 1e-10 * std::max(1.0, h.matrix().norm()));
      CHECK((e.vectors.adjoint() * e.vectors - ComplexMatrix::Identity(n, n)).norm() <= 1e-10);
      for (int k = 0; k + 1 < n; ++k) CHECK(e.values(k) <= e.values(k + 1));
      for (int k = 0; k < n; ++k) {
        const ComplexVector v = e.vectors.col(k);
        CHECK((h.matrix() * v - e.values(k) * v).norm() <= 1e-10 * h.matrix().norm());
      }
    }
  }
}

TEST_CASE("gen_eig_extremes on simple pencils") {
  Xoshiro256 rng(3);
  const HermitianMatrix b = random_pd(rng, 4);
  const auto p = gen_eig_extremes(b * 3.0, b);
  CHECK(p.lambda_min == doctest::Approx(3.0).epsilon(1e-10));
  CHECK(p.lambda_max == doctest::Approx(3.0).epsilon(1e-10));

  ComplexMatrix a = ComplexMatrix::Zero(2, 2);
  a(0, 0) = 1.0;
  a(1, 1) = 4.0;
  const auto q = gen_eig_extremes(HermitianMatrix(a), HermitianMatrix::identity(2));
  CHECK(q.lambda_min == doctest::Approx(1.0));
  CHECK(q.lambda_max == doctest::Approx(4.0));
  CHECK(std::abs(q.v_max(0)) == doctest::Approx(0.0));
  CHECK(std::abs(q.v_max(1)) == doctest::Approx(1.0));
}

TEST_CASE("gen_eig_extremes residual, normalization and scale invariance") {
  Xoshiro256 rng(5);
  for (int n : {2, 4, 9}) {
    for (int trial = 0; trial < 30; ++trial) {
      const HermitianMatrix a = random_hermitian(rng, n);
      const HermitianMatrix b = random_pd(rng, n);
      const auto p = gen_eig_extremes(a, b);
      const ComplexVector av = a.matrix() * p.v_max;
      CHECK((av - p.lambda_max * (b.matrix() * p.v_max)).norm() <= 1e-8 * av.norm());
      CHECK(b.quad(p.v_max) == doctest::Approx(1.0).epsilon(1e-10));
      CHECK(p.lambda_min <= p.lambda_max);

      const double c = 0.01 + 10.0 * rng.uniform();
      const auto ps = gen_eig_extremes(a * c, b * c);
      CHECK(std::abs(ps.lambda_max - p.lambda_max) <= 1e-10 * std::abs(p.lambda_max) + 1e-14);
      CHECK(std::abs(ps.lambda_min - p.lambda_min) <= 1e-10 * std::abs(p.lambda_min) + 1e-14);
    }
  }
}

TEST_CASE("gen_eig_extremes rejects singular right-hand side") {
  ComplexMatrix b = ComplexMatrix::Zero(2, 2);
  b(0, 0) = 1.0;
  CHECK_THROWS_AS(gen_eig_extremes(HermitianMatrix::identity(2), HermitianMatrix(b)),
                  SingularPencil);
  CHECK_THROWS_AS(gen_eig_extremes(HermitianMatrix::identity(2), HermitianMatrix::identity(2) * -1.0),
                  SingularPencil);
}
