#include "thirdq/majorana.hpp"

#include <string>

#include "thirdq/error.hpp"

namespace thirdq {

QuadraticHamiltonian::QuadraticHamiltonian(std::size_t n)
    : n_(n), h_(CMatrix::Zero(2 * n, 2 * n)) {}

QuadraticHamiltonian::QuadraticHamiltonian(const CMatrix& h) {
  if (h.rows() != h.cols() || h.rows() % 2 != 0 || h.rows() == 0) {
    throw Error(ErrorCode::kDimensionMismatch,
                "Hamiltonian matrix must be square with even positive dimension");
  }
  n_ = static_cast<std::size_t>(h.rows() / 2);
  h_ = (h - h.transpose()) / 2.0;
  const CMatrix sym = (h + h.transpose()) / 2.0;
  ingest_defect_ = sym.cwiseAbs().maxCoeff();
}

void QuadraticHamiltonian::add_term(std::size_t a, std::size_t b, Complex c) {
  if (a >= 2 * n_ || b >= 2 * n_ || a == b) {
    throw Error(ErrorCode::kInvalidArgument, "bad Majorana indices for Hamiltonian term");
  }
  const auto ia = static_cast<Eigen::Index>(a);
  const auto ib = static_cast<Eigen::Index>(b);
  h_(ia, ib) += c / 2.0;
  h_(ib, ia) -= c / 2.0;
}

bool QuadraticHamiltonian::hermitian(double tol) const {
  return h_.size() == 0 || h_.real().cwiseAbs().maxCoeff() <= tol;
}

void BathSpec::add(const CVector& l) {
  if (static_cast<std::size_t>(l.size()) != 2 * n_) {
    throw Error(ErrorCode::kDimensionMismatch,
                "bath coupling has length " + std::to_string(l.size()) + ", expected " +
                    std::to_string(2 * n_));
  }
  couplings_.push_back(l);
}

CMatrix induced_bath_matrix(const BathSpec& bath) {
  const auto dim = static_cast<Eigen::Index>(2 * bath.n());
  CMatrix m = CMatrix::Zero(dim, dim);
  for (const auto& l : bath.couplings()) {
    if (l.size() != dim) {
      throw Error(ErrorCode::kDimensionMismatch, "bath couplings differ in length");
    }
    m.noalias() += l * l.adjoint();
  }
  return m;
}

ShapeMatrix build_shape_matrix(const QuadraticHamiltonian& h, const CMatrix& m) {
  const std::size_t n = h.n();
  const auto dim = static_cast<Eigen::Index>(2 * n);
  if (m.rows() != dim || m.cols() != dim) {
    throw Error(ErrorCode::kDimensionMismatch, "bath matrix does not match Hamiltonian size");
  }
  const CMatrix& hm = h.matrix();
  ShapeMatrix s;
  s.n = n;
  s.A = CMatrix::Zero(2 * dim, 2 * dim);
  // Block entries for Majorana pair (j, k): row 2j holds the a_j map, row
  // 2j+1 its adjoint partner (zero-based).
  for (Eigen::Index j = 0; j < dim; ++j) {
    for (Eigen::Index k = 0; k < dim; ++k) {
      const Complex hjk = hm(j, k);
      const Complex mjk = m(j, k);
      const Complex mkj = m(k, j);
      s.A(2 * j, 2 * k) = -2.0 * kI * hjk - mkj + mjk;
      s.A(2 * j, 2 * k + 1) = 2.0 * kI * mjk;
      s.A(2 * j + 1, 2 * k) = -2.0 * kI * mkj;
      s.A(2 * j + 1, 2 * k + 1) = -2.0 * kI * hjk + mkj - mjk;
    }
  }
  s.A0 = 2.0 * m.trace().real();
  return s;
}

double antisymmetry_defect(const CMatrix& a) {
  return a.size() == 0 ? 0.0 : (a + a.transpose()).cwiseAbs().maxCoeff();
}

}  // namespace thirdq
