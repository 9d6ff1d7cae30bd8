#include <doctest.h>

#include "support.hpp"
#include "thirdq/error.hpp"
#include "thirdq/majorana.hpp"

using namespace thirdq;
using namespace testing_support;

TEST_CASE("shape matrix of a single fermion matches the hand-written blocks") {
  const double h = 0.7, g1 = 0.9, g2 = 0.4;
  const Model m = single_fermion(h, g1, g2);
  const ShapeMatrix s = build_shape_matrix(m.h, m.bath);
  const CMatrix expected = -h * block_R() + block_B(g1 + g2, g2 - g1);
  CHECK(max_abs(s.A - expected) < 1e-14);
  CHECK(s.A0 == doctest::Approx(g1 + g2));
}

TEST_CASE("shape matrix is antisymmetric and A0 equals 2 tr M") {
  Stream rng(11, 0);
  for (std::size_t n = 1; n <= 5; ++n) {
    const auto h = random_hamiltonian(n, rng);
    const auto bath = random_bath(n, n + 1, rng);
    const ShapeMatrix s = build_shape_matrix(h, bath);
    CHECK(s.A.rows() == static_cast<Eigen::Index>(4 * n));
    CHECK(antisymmetry_defect(s.A) < 1e-12);
    CHECK(s.A0 == doctest::Approx(2.0 * induced_bath_matrix(bath).trace().real()));
  }
}

TEST_CASE("bath matrix is Hermitian positive semidefinite") {
  Stream rng(12, 0);
  const auto bath = random_bath(3, 4, rng);
  const CMatrix m = induced_bath_matrix(bath);
  CHECK(max_abs(m - m.adjoint()) < 1e-14);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(m);
  CHECK(es.eigenvalues().minCoeff() > -1e-12);
}

TEST_CASE("Hamiltonian ingest keeps the antisymmetric part") {
  CMatrix h(2, 2);
  h << 0.3, kI * 1.0, -kI * 0.5, 0.1;
  const QuadraticHamiltonian q(h);
  CHECK(max_abs(q.matrix() + q.matrix().transpose()) < 1e-15);
  CHECK(std::abs(q.matrix()(0, 1) - kI * 0.75) < 1e-15);
  CHECK(q.ingest_defect() == doctest::Approx(0.3));
  CHECK(q.hermitian());
}

TEST_CASE("input validation") {
  CHECK_THROWS_AS(QuadraticHamiltonian(CMatrix::Zero(3, 3)), Error);
  QuadraticHamiltonian h(2);
  CHECK_THROWS_AS(h.add_term(0, 0, 1.0), Error);
  CHECK_THROWS_AS(h.add_term(0, 4, 1.0), Error);
  BathSpec b(2);
  CHECK_THROWS_AS(b.add(CVector::Zero(3)), Error);
  try {
    build_shape_matrix(h, CMatrix::Zero(2, 2));
    FAIL("expected a dimension error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kDimensionMismatch);
  }
}
