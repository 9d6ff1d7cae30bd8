#pragma once

#include <vector>

#include "thirdq/types.hpp"

namespace thirdq {

// Majorana operators are indexed 1..2n with w_{2m-1}, w_{2m} belonging to
// site m. In code all indices are zero-based: Majorana j lives at row/col j-1.

/// Quadratic Hamiltonian H = sum_jk w_j H_jk w_k with an antisymmetric 2n x 2n
/// coefficient matrix. Input matrices are antisymmetrized on construction;
/// the size of the symmetric part that was dropped is kept in
/// `ingest_defect()` so callers can warn about it.
class QuadraticHamiltonian {
 public:
  QuadraticHamiltonian() = default;
  explicit QuadraticHamiltonian(std::size_t n);
  explicit QuadraticHamiltonian(const CMatrix& h);

  std::size_t n() const { return n_; }
  const CMatrix& matrix() const { return h_; }

  // max |(H + H^T)/2| of the matrix handed to the constructor.
  double ingest_defect() const { return ingest_defect_; }

  // Adds c * w_a w_b (zero-based a != b), split antisymmetrically.
  void add_term(std::size_t a, std::size_t b, Complex c);

  // True when every entry is purely imaginary, i.e. the operator is Hermitian.
  bool hermitian(double tol = 1e-12) const;

 private:
  std::size_t n_ = 0;
  CMatrix h_;
  double ingest_defect_ = 0.0;
};

/// Linear Lindblad operators L_mu = sum_j l_{mu,j} w_j.
class BathSpec {
 public:
  BathSpec() = default;
  explicit BathSpec(std::size_t n) : n_(n) {}

  std::size_t n() const { return n_; }
  const std::vector<CVector>& couplings() const { return couplings_; }

  // Throws kDimensionMismatch unless l has length 2n.
  void add(const CVector& l);

 private:
  std::size_t n_ = 0;
  std::vector<CVector> couplings_;
};

/// A = antisymmetric 4n x 4n shape matrix; the even-parity Liouvillean is
/// a.A a - A0 in the adjoint Majorana maps.
struct ShapeMatrix {
  std::size_t n = 0;
  CMatrix A;
  double A0 = 0.0;
};

// M_jk = sum_mu l_{mu,j} conj(l_{mu,k}).
CMatrix induced_bath_matrix(const BathSpec& bath);

ShapeMatrix build_shape_matrix(const QuadraticHamiltonian& h, const CMatrix& m);

inline ShapeMatrix build_shape_matrix(const QuadraticHamiltonian& h, const BathSpec& bath) {
  return build_shape_matrix(h, induced_bath_matrix(bath));
}

// max |A + A^T|.
double antisymmetry_defect(const CMatrix& a);

}  // namespace thirdq
