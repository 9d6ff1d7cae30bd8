#include "thirdq/pfaffian.hpp"

#include <vector>

#include "thirdq/error.hpp"

namespace thirdq {

namespace {

void require_square(const CMatrix& a) {
  if (a.rows() != a.cols()) {
    throw Error(ErrorCode::kDimensionMismatch, "Pfaffian needs a square matrix");
  }
}

Complex expand(const CMatrix& a, std::vector<Eigen::Index>& idx) {
  if (idx.empty()) return 1.0;
  const Eigen::Index first = idx.front();
  Complex total = 0.0;
  double sign = 1.0;
  for (std::size_t j = 1; j < idx.size(); ++j) {
    const Eigen::Index col = idx[j];
    const Complex entry = a(first, col);
    if (entry != Complex{0.0, 0.0}) {
      std::vector<Eigen::Index> rest;
      rest.reserve(idx.size() - 2);
      for (std::size_t k = 1; k < idx.size(); ++k) {
        if (k != j) rest.push_back(idx[k]);
      }
      total += sign * entry * expand(a, rest);
    }
    sign = -sign;
  }
  return total;
}

}  // namespace

Complex pfaffian_expansion(const CMatrix& a) {
  require_square(a);
  if (a.rows() % 2 != 0) return 0.0;
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(a.rows()));
  for (Eigen::Index i = 0; i < a.rows(); ++i) idx[static_cast<std::size_t>(i)] = i;
  return expand(a, idx);
}

Complex pfaffian_parlett_reid(const CMatrix& input) {
  require_square(input);
  const Eigen::Index n = input.rows();
  if (n % 2 != 0) return 0.0;
  if (n == 0) return 1.0;
  // Work on an explicitly antisymmetric copy built from the upper triangle.
  CMatrix a = CMatrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      a(i, j) = input(i, j);
      a(j, i) = -input(i, j);
    }
  }
  Complex pf = 1.0;
  for (Eigen::Index k = 0; k + 1 < n; k += 2) {
    Eigen::Index kp = 0;
    a.col(k).tail(n - k - 1).cwiseAbs().maxCoeff(&kp);
    kp += k + 1;
    if (kp != k + 1) {
      a.row(k + 1).swap(a.row(kp));
      a.col(k + 1).swap(a.col(kp));
      pf = -pf;
    }
    if (a(k + 1, k) == Complex{0.0, 0.0}) return 0.0;
    pf *= a(k, k + 1);
    if (k + 2 < n) {
      const Eigen::Index m = n - k - 2;
      const CVector tau = a.row(k).tail(m).transpose() / a(k, k + 1);
      const CVector piv = a.col(k + 1).tail(m);
      a.bottomRightCorner(m, m) += tau * piv.transpose() - piv * tau.transpose();
    }
  }
  return pf;
}

Complex pfaffian(const CMatrix& a) {
  require_square(a);
  if (a.rows() <= 8) return pfaffian_expansion(a);
  return pfaffian_parlett_reid(a);
}

}  // namespace thirdq
