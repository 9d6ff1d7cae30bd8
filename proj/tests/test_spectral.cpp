#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "support.hpp"
#include "thirdq/error.hpp"
#include "thirdq/spectral.hpp"

using namespace thirdq;
using namespace testing_support;

namespace {

double sum_error(const NormalMasterModes& nmm, double a0) {
  const Complex total = std::accumulate(nmm.rapidities.begin(), nmm.rapidities.end(), Complex{});
  return std::abs(total - a0);
}

}  // namespace

TEST_CASE("single fermion rapidities are Gamma_+/2 +- i h") {
  const double h = 0.8, g1 = 0.5, g2 = 0.3;
  const Model m = single_fermion(h, g1, g2);
  const ShapeMatrix s = build_shape_matrix(m.h, m.bath);
  const NormalMasterModes nmm = diagonalize_shape(s);
  REQUIRE(nmm.rapidities.size() == 2);
  const double gp = g1 + g2;
  CHECK(std::abs(nmm.rapidities[0] - Complex(gp / 2, h)) < 1e-12);
  CHECK(std::abs(nmm.rapidities[1] - Complex(gp / 2, -h)) < 1e-12);
  CHECK(verify_canonical_form(s, nmm) < 1e-12);
  CHECK(normalization_defect(nmm) < 1e-12);

  const SpectrumSummary sum = classify(nmm);
  CHECK(sum.unique_ness);
  CHECK(sum.converges);
  CHECK(sum.gap == doctest::Approx(gp));
}

TEST_CASE("random open systems decompose canonically") {
  for (std::size_t n = 1; n <= 6; ++n) {
    for (std::uint64_t trial = 0; trial < 4; ++trial) {
      Stream rng(31, 100 * n + trial);
      const auto h = random_hamiltonian(n, rng);
      const auto bath = random_bath(n, n + 1, rng);
      const ShapeMatrix s = build_shape_matrix(h, bath);
      const NormalMasterModes nmm = diagonalize_shape(s);
      CAPTURE(n);
      CHECK(verify_canonical_form(s, nmm) < 1e-9);
      CHECK(eigen_residual(s, nmm) < 1e-9);
      CHECK(normalization_defect(nmm) < 1e-9);
      CHECK(sum_error(nmm, s.A0) < 1e-9 * std::max(1.0, s.A0));
      for (std::size_t j = 0; j < nmm.rapidities.size(); ++j) {
        CHECK(nmm.rapidities[j].real() >= -1e-12);
        if (j > 0) CHECK(nmm.rapidities[j].real() <= nmm.rapidities[j - 1].real() + 1e-9);
      }
      // Rapidities from the eigenvalue-only path agree with the full decomposition.
      const auto fast = shape_rapidities(s);
      REQUIRE(fast.size() == nmm.rapidities.size());
      for (std::size_t j = 0; j < fast.size(); ++j) {
        CHECK(std::abs(fast[j] - nmm.rapidities[j]) < 1e-8);
      }
    }
  }
}

TEST_CASE("canonical form is invariant under the pair gauge") {
  Stream rng(32, 0);
  const auto h = random_hamiltonian(3, rng);
  const auto bath = random_bath(3, 2, rng);
  const ShapeMatrix s = build_shape_matrix(h, bath);
  NormalMasterModes nmm = diagonalize_shape(s);
  for (Eigen::Index j = 0; j < 6; ++j) {
    const Complex f(rng.uniform(0.3, 3.0), rng.uniform(-1.0, 1.0));
    nmm.V.row(2 * j) *= f;
    nmm.V.row(2 * j + 1) /= f;
  }
  CHECK(verify_canonical_form(s, nmm) < 1e-9);
  CHECK(normalization_defect(nmm) < 1e-9);

  NormalMasterModes bad = nmm;
  bad.V.row(0) *= 1.5;
  CHECK(verify_canonical_form(s, bad) > 1e-3);
  CHECK(normalization_defect(bad) > 1e-3);
}

TEST_CASE("closed system with a decoupled site has zero rapidities") {
  QuadraticHamiltonian h(2);
  h.add_term(0, 1, -kI * 0.9);
  const BathSpec bath(2);
  const ShapeMatrix s = build_shape_matrix(h, bath);
  const NormalMasterModes nmm = diagonalize_shape(s);
  CHECK(verify_canonical_form(s, nmm) < 1e-12);
  CHECK(normalization_defect(nmm) < 1e-12);
  const SpectrumSummary sum = classify(nmm);
  CHECK(sum.zero_rapidities == 2);
  CHECK(sum.ness_degeneracy() == 4.0);
  CHECK_FALSE(sum.unique_ness);
  CHECK_FALSE(sum.converges);
  for (const auto& b : nmm.rapidities) CHECK(std::abs(b.real()) < 1e-12);
}

TEST_CASE("closed random system has purely imaginary rapidities") {
  Stream rng(33, 0);
  const auto h = random_hamiltonian(4, rng);
  const ShapeMatrix s = build_shape_matrix(h, BathSpec(4));
  const NormalMasterModes nmm = diagonalize_shape(s);
  CHECK(verify_canonical_form(s, nmm) < 1e-10);
  CHECK(sum_error(nmm, 0.0) < 1e-10);
  for (const auto& b : nmm.rapidities) CHECK(std::abs(b.real()) < 1e-10);
  CHECK_FALSE(classify(nmm).converges);
}

TEST_CASE("degenerate rapidities from identical decoupled sites") {
  const Model one = single_fermion(0.6, 0.7, 0.2);
  QuadraticHamiltonian h(2);
  h.add_term(0, 1, -kI * 0.6);
  h.add_term(2, 3, -kI * 0.6);
  BathSpec bath(2);
  for (const auto& l : one.bath.couplings()) {
    for (Eigen::Index site = 0; site < 2; ++site) {
      CVector v = CVector::Zero(4);
      v.segment(2 * site, 2) = l;
      bath.add(v);
    }
  }
  const ShapeMatrix s = build_shape_matrix(h, bath);
  const NormalMasterModes nmm = diagonalize_shape(s);
  CHECK(verify_canonical_form(s, nmm) < 1e-11);
  CHECK(normalization_defect(nmm) < 1e-11);
  CHECK(std::abs(nmm.rapidities[0] - nmm.rapidities[1]) < 1e-12);
  CHECK(std::abs(nmm.rapidities[0] - Complex(0.45, 0.6)) < 1e-12);
}

TEST_CASE("nilpotent shape matrix is reported as near-defective") {
  CVector u(4), v(4);
  u << 1.0, kI, 0.0, 0.0;
  v << 0.0, 0.0, 1.0, kI;
  ShapeMatrix s;
  s.n = 1;
  s.A = u * v.transpose() - v * u.transpose();
  REQUIRE(max_abs(s.A * s.A) < 1e-15);
  try {
    diagonalize_shape(s);
    FAIL("expected NearDefective");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kNearDefective);
    CHECK(e.numerical());
  }
}

TEST_CASE("eigenvalue pairing failure") {
  const std::vector<Complex> eig{1.0, 2.0, -1.0, 5.0};
  try {
    detail::pair_eigenvalues(eig, 1e-9, 1e-12, 1e-9);
    FAIL("expected PairingFailure");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kPairingFailure);
  }
}

TEST_CASE("Liouvillean spectrum from rapidities") {
  const double h = 0.4, gp = 1.3;
  const std::vector<Complex> r{Complex(gp / 2, h), Complex(gp / 2, -h)};
  auto all = liouville_eigenvalues_full(r);
  REQUIRE(all.size() == 4);
  const std::vector<Complex> expected{0.0, Complex(-gp, -2 * h), Complex(-gp, 2 * h), -2 * gp};
  for (std::size_t j = 0; j < 4; ++j) CHECK(std::abs(all[j] - expected[j]) < 1e-14);

  auto even = liouville_eigenvalues_full(r, SectorFilter::kEven);
  REQUIRE(even.size() == 2);
  CHECK(std::abs(even[0]) < 1e-15);
  CHECK(std::abs(even[1] + 2 * gp) < 1e-14);

  const std::vector<Complex> too_many(kFullSpectrumCap + 2, Complex(1.0, 0.0));
  CHECK_THROWS_AS(liouville_eigenvalues_full(too_many), Error);
}

TEST_CASE("slowest Liouvillean eigenvalues agree with full enumeration") {
  Stream rng(34, 0);
  std::vector<Complex> r;
  for (int j = 0; j < 10; ++j) r.emplace_back(rng.uniform(0.01, 2.0), rng.uniform(-1.0, 1.0));
  auto all = liouville_eigenvalues_full(r);
  std::sort(all.begin(), all.end(),
            [](const Complex& a, const Complex& b) { return a.real() > b.real(); });
  const std::size_t k = 60;
  const auto slow = liouville_eigenvalues_slowest(r, k);
  REQUIRE(slow.size() == k);
  for (std::size_t j = 0; j < k; ++j) CHECK(slow[j].real() == doctest::Approx(all[j].real()));
  // The returned values are genuine members of the full set.
  for (const auto& lam : slow) {
    const bool found = std::any_of(all.begin(), all.end(),
                                   [&](const Complex& x) { return std::abs(x - lam) < 1e-12; });
    CHECK(found);
  }
}
