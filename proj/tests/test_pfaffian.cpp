#include <doctest.h>

#include "support.hpp"
#include "thirdq/pfaffian.hpp"

using namespace thirdq;

namespace {

CMatrix random_antisymmetric(Eigen::Index dim, Stream& rng) {
  CMatrix a = CMatrix::Zero(dim, dim);
  for (Eigen::Index j = 0; j < dim; ++j) {
    for (Eigen::Index k = j + 1; k < dim; ++k) {
      a(j, k) = Complex(rng.normal(), rng.normal());
      a(k, j) = -a(j, k);
    }
  }
  return a;
}

}  // namespace

TEST_CASE("Pfaffian squared equals the determinant") {
  Stream rng(21, 0);
  for (Eigen::Index dim = 2; dim <= 14; dim += 2) {
    const CMatrix a = random_antisymmetric(dim, rng);
    const Complex pf = pfaffian(a);
    const Complex det = a.determinant();
    CHECK(std::abs(pf * pf - det) <= 1e-10 * std::max(1.0, std::abs(det)));
  }
}

TEST_CASE("expansion and elimination agree") {
  Stream rng(22, 0);
  for (Eigen::Index dim = 2; dim <= 8; dim += 2) {
    const CMatrix a = random_antisymmetric(dim, rng);
    const Complex x = pfaffian_expansion(a);
    const Complex y = pfaffian_parlett_reid(a);
    CHECK(std::abs(x - y) <= 1e-11 * std::max(1.0, std::abs(x)));
  }
}

TEST_CASE("small closed forms") {
  CHECK(pfaffian(CMatrix(0, 0)) == Complex(1.0, 0.0));
  CMatrix two(2, 2);
  two << 0, Complex(2, 1), Complex(-2, -1), 0;
  CHECK(std::abs(pfaffian(two) - Complex(2, 1)) < 1e-15);

  Stream rng(23, 0);
  const CMatrix a = random_antisymmetric(4, rng);
  const Complex closed = a(0, 1) * a(2, 3) - a(0, 2) * a(1, 3) + a(0, 3) * a(1, 2);
  CHECK(std::abs(pfaffian(a) - closed) < 1e-13);
  CHECK(std::abs(pfaffian_parlett_reid(a) - closed) < 1e-13);
}

TEST_CASE("odd dimension gives zero and a row swap flips the sign") {
  Stream rng(24, 0);
  CMatrix odd = random_antisymmetric(3, rng);
  CHECK(pfaffian(odd) == Complex(0.0, 0.0));

  const CMatrix a = random_antisymmetric(10, rng);
  Eigen::PermutationMatrix<Eigen::Dynamic> p(10);
  p.setIdentity();
  p.applyTranspositionOnTheRight(2, 7);
  const CMatrix b = p.transpose() * a * p;
  CHECK(std::abs(pfaffian(b) + pfaffian(a)) < 1e-10 * std::abs(pfaffian(a)));
}

TEST_CASE("zero pivots are handled by pivoting") {
  CMatrix a = CMatrix::Zero(6, 6);
  // Perfect matching (0,5), (1,3), (2,4); the first superdiagonal entries vanish.
  a(0, 5) = 2.0;
  a(1, 3) = 3.0;
  a(2, 4) = -1.5;
  a = (a - CMatrix(a.transpose())).eval();
  const Complex expected = pfaffian_expansion(a);
  CHECK(std::abs(expected) == doctest::Approx(9.0));
  CHECK(std::abs(pfaffian_parlett_reid(a) - expected) < 1e-13);
}
