#include "thirdq/ness.hpp"

#include <algorithm>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "thirdq/error.hpp"
#include "thirdq/pfaffian.hpp"

namespace thirdq {

double NessCovariance::anticommutator_defect() const {
  if (C.size() == 0) return 0.0;
  const CMatrix d = C + C.transpose() - 2.0 * CMatrix::Identity(C.rows(), C.cols());
  return d.cwiseAbs().maxCoeff();
}

double NessCovariance::hermiticity_defect() const {
  if (C.size() == 0) return 0.0;
  return (C - C.adjoint()).cwiseAbs().maxCoeff();
}

NessCovariance ness_covariance(const NormalMasterModes& nmm, double zero_tol) {
  const SpectrumSummary s = classify(nmm, zero_tol);
  if (!s.unique_ness) {
    throw Error(ErrorCode::kNonUniqueNess,
                "steady state is not unique: " + std::to_string(s.zero_rapidities) +
                    " zero rapidities, " + std::to_string(s.cancelling_pairs) +
                    " cancelling pairs");
  }
  const Eigen::Index two_n = static_cast<Eigen::Index>(2 * nmm.n);
  const Eigen::Index modes = static_cast<Eigen::Index>(nmm.rapidities.size());
  // Rows of V for +beta (even) and -beta (odd); columns split by the parity of
  // the Majorana index.
  CMatrix po(modes, two_n), pe(modes, two_n), mo(modes, two_n), me(modes, two_n);
  for (Eigen::Index r = 0; r < modes; ++r) {
    for (Eigen::Index j = 0; j < two_n; ++j) {
      po(r, j) = nmm.V(2 * r, 2 * j);
      pe(r, j) = nmm.V(2 * r, 2 * j + 1);
      mo(r, j) = nmm.V(2 * r + 1, 2 * j);
      me(r, j) = nmm.V(2 * r + 1, 2 * j + 1);
    }
  }
  NessCovariance cov;
  cov.C = CMatrix::Identity(two_n, two_n) +
          0.5 * (mo.transpose() * po - me.transpose() * pe - kI * me.transpose() * po -
                 kI * mo.transpose() * pe);
  return cov;
}

NessCovariance ness_covariance_lyapunov(const QuadraticHamiltonian& h, const CMatrix& m,
                                        double unresolved_tol, std::size_t* unresolved) {
  const CMatrix& hm = h.matrix();
  const Eigen::Index dim = hm.rows();
  if (m.rows() != dim || m.cols() != dim) {
    throw Error(ErrorCode::kDimensionMismatch, "bath matrix does not match Hamiltonian size");
  }
  const CMatrix y = -4.0 * kI * hm - 4.0 * m.real().cast<Complex>();
  const CMatrix f = 8.0 * kI * m.imag().cast<Complex>();

  Eigen::ComplexSchur<CMatrix> schur(y);
  if (schur.info() != Eigen::Success) {
    throw Error(ErrorCode::kNearDefective, "Schur decomposition did not converge");
  }
  const CMatrix& t = schur.matrixT();
  const CMatrix& u = schur.matrixU();

  const double scale = std::max(1.0, norm_inf(y));
  double min_sum = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index j = i; j < dim; ++j) {
      min_sum = std::min(min_sum, std::abs(t(i, i) + t(j, j)));
    }
  }
  const double cut = unresolved_tol * scale;
  if (unresolved_tol <= 0.0 && min_sum < 1e-13 * scale) {
    throw Error(ErrorCode::kNonUniqueNess,
                "stationary covariance equation is singular (min |y_i + y_j| = " +
                    std::to_string(min_sum) + ")");
  }

  // T Z + Z T^T = G with X = U Z U^T; column k couples only to columns l > k.
  const CMatrix g = u.adjoint() * f * u.conjugate();
  CMatrix z = CMatrix::Zero(dim, dim);
  std::size_t dropped = 0;
  for (Eigen::Index k = dim - 1; k >= 0; --k) {
    CVector rhs = g.col(k);
    for (Eigen::Index l = k + 1; l < dim; ++l) rhs -= t(k, l) * z.col(l);
    // Back substitution on (T + t_kk) z = rhs, skipping unresolved rows.
    for (Eigen::Index i = dim - 1; i >= 0; --i) {
      Complex acc = rhs(i);
      for (Eigen::Index j = i + 1; j < dim; ++j) acc -= t(i, j) * z(j, k);
      const Complex d = t(i, i) + t(k, k);
      if (std::abs(d) < cut) {
        z(i, k) = 0.0;
        if (i <= k) ++dropped;
      } else {
        z(i, k) = acc / d;
      }
    }
  }
  if (unresolved != nullptr) *unresolved = dropped;
  NessCovariance cov;
  cov.C = CMatrix::Identity(dim, dim) + u * z * u.transpose();
  return cov;
}

std::vector<Complex> reduced_rapidities(const QuadraticHamiltonian& h, const CMatrix& m) {
  const CMatrix& hm = h.matrix();
  if (m.rows() != hm.rows() || m.cols() != hm.cols()) {
    throw Error(ErrorCode::kDimensionMismatch, "bath matrix does not match Hamiltonian size");
  }
  // 2iH is real because H is purely imaginary antisymmetric.
  const Eigen::MatrixXd x = (2.0 * kI * hm).real() + 2.0 * m.real();
  Eigen::EigenSolver<Eigen::MatrixXd> es(x, false);
  if (es.info() != Eigen::Success) {
    throw Error(ErrorCode::kNearDefective, "eigenvalue iteration did not converge");
  }
  std::vector<Complex> out(es.eigenvalues().begin(), es.eigenvalues().end());
  detail::sort_rapidities(out, 1e-12 * std::max(1.0, x.cwiseAbs().rowwise().sum().maxCoeff()));
  return out;
}

Complex expect_monomial(const NessCovariance& cov, std::span<const std::size_t> indices) {
  if (indices.size() % 2 != 0) {
    throw Error(ErrorCode::kInvalidArgument, "Majorana monomial must have even length");
  }
  const auto dim = static_cast<std::size_t>(cov.C.rows());
  std::vector<std::size_t> idx(indices.begin(), indices.end());
  for (std::size_t i : idx) {
    if (i >= dim) throw Error(ErrorCode::kInvalidArgument, "Majorana index out of range");
  }
  // Insertion sort counting transpositions; the operators anticommute.
  double sign = 1.0;
  for (std::size_t i = 1; i < idx.size(); ++i) {
    for (std::size_t j = i; j > 0 && idx[j - 1] > idx[j]; --j) {
      std::swap(idx[j - 1], idx[j]);
      sign = -sign;
    }
  }
  for (std::size_t i = 1; i < idx.size(); ++i) {
    if (idx[i] == idx[i - 1]) {
      throw Error(ErrorCode::kInvalidArgument, "repeated Majorana index in monomial");
    }
  }
  const auto k = static_cast<Eigen::Index>(idx.size());
  CMatrix sub = CMatrix::Zero(k, k);
  for (Eigen::Index a = 0; a < k; ++a) {
    for (Eigen::Index b = a + 1; b < k; ++b) {
      const Complex x = cov.C(static_cast<Eigen::Index>(idx[static_cast<std::size_t>(a)]),
                              static_cast<Eigen::Index>(idx[static_cast<std::size_t>(b)]));
      sub(a, b) = x;
      sub(b, a) = -x;
    }
  }
  return sign * pfaffian(sub);
}

Complex expect_quadratic(const NessCovariance& cov, const CMatrix& q) {
  if (q.rows() != cov.C.rows() || q.cols() != cov.C.cols()) {
    throw Error(ErrorCode::kDimensionMismatch, "observable matrix does not match covariance");
  }
  return (q.array() * cov.C.array()).sum();
}

}  // namespace thirdq
