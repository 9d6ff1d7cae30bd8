#pragma once

#include <span>

#include "thirdq/majorana.hpp"
#include "thirdq/spectral.hpp"

namespace thirdq {

/// Steady-state two-point function C_jk = <w_j w_k> (zero-based indices).
struct NessCovariance {
  CMatrix C;

  std::size_t n() const { return static_cast<std::size_t>(C.rows() / 2); }
  CMatrix X() const { return C - CMatrix::Identity(C.rows(), C.cols()); }

  // max |C + C^T - 2I|
  double anticommutator_defect() const;
  // max |C - C^H|
  double hermiticity_defect() const;
};

// Covariance from the normal master modes. Throws kNonUniqueNess when the
// spectrum has zero rapidities or cancelling pairs (zero_tol <= 0 picks the default).
NessCovariance ness_covariance(const NormalMasterModes& nmm, double zero_tol = 0.0);

// Same quantity from the stationary equation of motion of X = C - I,
//   Y X + X Y^T = 8i Im M,  Y = -4iH - 4 Re M,
// solved by a complex Schur (Bartels-Stewart) sweep. Needs no eigenvectors of
// the shape matrix, so it stays accurate when those are badly conditioned.
//
// With unresolved_tol == 0 a singular equation raises kNonUniqueNess. A positive
// value is a threshold on |y_i + y_j| relative to max(1, ||Y||_inf): Schur pairs
// below it are left at X = 0 (fully mixed) and counted in *unresolved.
NessCovariance ness_covariance_lyapunov(const QuadraticHamiltonian& h, const CMatrix& m,
                                        double unresolved_tol = 0.0,
                                        std::size_t* unresolved = nullptr);

// Rapidities from the 2n x 2n real matrix 2iH + 2 Re M, sorted like
// shape_rapidities. Small rapidities keep an absolute accuracy of about machine
// epsilon times the matrix norm.
std::vector<Complex> reduced_rapidities(const QuadraticHamiltonian& h, const CMatrix& m);

// <w_{i1} w_{i2} ... w_{i2k}> by Wick's theorem: sign * Pf(X restricted to the
// sorted indices). Indices are zero-based, distinct, any order, even count.
Complex expect_monomial(const NessCovariance& cov, std::span<const std::size_t> indices);

// <sum_jk w_j Q_jk w_k> = sum_jk Q_jk C_jk.
Complex expect_quadratic(const NessCovariance& cov, const CMatrix& q);

}  // namespace thirdq
