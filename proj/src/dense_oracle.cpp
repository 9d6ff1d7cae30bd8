#include "thirdq/dense_oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include "thirdq/error.hpp"
#include "thirdq/ness.hpp"
#include "thirdq/rng.hpp"

namespace thirdq {

namespace {

void check_sites(std::size_t n, std::size_t cap) {
  if (n == 0 || n > cap) {
    throw Error(ErrorCode::kSizeCap, "dense oracle supports 1.." + std::to_string(cap) +
                                         " sites, got " + std::to_string(n));
  }
}

CMatrix kron_chain(const std::vector<CMatrix>& factors) {
  CMatrix out = CMatrix::Identity(1, 1);
  for (const auto& f : factors) out = Eigen::kroneckerProduct(out, f).eval();
  return out;
}

bool even_index(std::size_t vec_index, std::size_t dim) {
  const std::size_t a = vec_index % dim;
  const std::size_t b = vec_index / dim;
  return (std::popcount(a) + std::popcount(b)) % 2 == 0;
}

}  // namespace

std::vector<CMatrix> realize_majorana(std::size_t n) {
  check_sites(n, kOracleMaxSites);
  CMatrix sx(2, 2), sy(2, 2), sz(2, 2);
  sx << 0, 1, 1, 0;
  sy << 0, -kI, kI, 0;
  sz << 1, 0, 0, -1;
  const CMatrix id = CMatrix::Identity(2, 2);
  std::vector<CMatrix> w;
  for (std::size_t m = 0; m < n; ++m) {
    for (const CMatrix* s : {&sx, &sy}) {
      std::vector<CMatrix> factors;
      for (std::size_t k = 0; k < n; ++k) factors.push_back(k < m ? sz : (k == m ? *s : id));
      w.push_back(kron_chain(factors));
    }
  }
  return w;
}

DenseModel lift_quadratic(const QuadraticHamiltonian& h, const BathSpec& bath) {
  const std::size_t n = h.n();
  check_sites(n, kOracleMaxSites);
  if (bath.n() != n) throw Error(ErrorCode::kDimensionMismatch, "bath and Hamiltonian sizes differ");
  const auto w = realize_majorana(n);
  const auto dim = static_cast<Eigen::Index>(std::size_t{1} << n);
  DenseModel model;
  model.n = n;
  model.H = CMatrix::Zero(dim, dim);
  const CMatrix& hm = h.matrix();
  for (std::size_t j = 0; j < 2 * n; ++j) {
    for (std::size_t k = 0; k < 2 * n; ++k) {
      const Complex c = hm(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k));
      if (c != Complex{0.0, 0.0}) model.H += c * w[j] * w[k];
    }
  }
  for (const auto& l : bath.couplings()) {
    CMatrix op = CMatrix::Zero(dim, dim);
    for (std::size_t j = 0; j < 2 * n; ++j) op += l(static_cast<Eigen::Index>(j)) * w[j];
    model.L.push_back(std::move(op));
  }
  return model;
}

DenseLiouvillean build_superoperator(const DenseModel& model) {
  check_sites(model.n, kOracleMaxSites);
  const auto dim = model.H.rows();
  const CMatrix id = CMatrix::Identity(dim, dim);
  DenseLiouvillean liou;
  liou.n = model.n;
  liou.superop = -kI * (Eigen::kroneckerProduct(id, model.H).eval() -
                        Eigen::kroneckerProduct(model.H.transpose(), id).eval());
  for (const auto& l : model.L) {
    const CMatrix ldl = l.adjoint() * l;
    liou.superop += 2.0 * Eigen::kroneckerProduct(l.conjugate(), l).eval();
    liou.superop -= Eigen::kroneckerProduct(id, ldl).eval();
    liou.superop -= Eigen::kroneckerProduct(ldl.transpose(), id).eval();
  }
  return liou;
}

double DenseLiouvillean::trace_defect() const {
  const auto dim = static_cast<Eigen::Index>(hilbert_dim());
  CVector vec_id = CVector::Zero(dim * dim);
  for (Eigen::Index a = 0; a < dim; ++a) vec_id(a + a * dim) = 1.0;
  return (vec_id.transpose() * superop).cwiseAbs().maxCoeff();
}

double DenseLiouvillean::parity_leak() const {
  const std::size_t dim = hilbert_dim();
  double worst = 0.0;
  for (Eigen::Index r = 0; r < superop.rows(); ++r) {
    for (Eigen::Index c = 0; c < superop.cols(); ++c) {
      if (even_index(static_cast<std::size_t>(r), dim) != even_index(static_cast<std::size_t>(c), dim)) {
        worst = std::max(worst, std::abs(superop(r, c)));
      }
    }
  }
  return worst;
}

std::vector<Complex> oracle_eigenvalues(const DenseLiouvillean& liou, SectorFilter filter) {
  CMatrix block;
  if (filter == SectorFilter::kAll) {
    block = liou.superop;
  } else {
    const std::size_t dim = liou.hilbert_dim();
    std::vector<Eigen::Index> idx;
    for (std::size_t i = 0; i < dim * dim; ++i) {
      if (even_index(i, dim)) idx.push_back(static_cast<Eigen::Index>(i));
    }
    block = liou.superop(idx, idx);
  }
  Eigen::ComplexEigenSolver<CMatrix> es(block, false);
  const CVector& ev = es.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

CMatrix oracle_ness(const DenseLiouvillean& liou, double rel_tol) {
  Eigen::ComplexEigenSolver<CMatrix> es(liou.superop, true);
  const double cut = rel_tol * std::max(1.0, norm_inf(liou.superop));
  std::vector<Eigen::Index> kernel;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    if (std::abs(es.eigenvalues()(i)) < cut) kernel.push_back(i);
  }
  if (kernel.size() != 1) {
    throw Error(ErrorCode::kDegenerateKernel,
                "Liouvillean kernel has dimension " + std::to_string(kernel.size()));
  }
  const auto dim = static_cast<Eigen::Index>(liou.hilbert_dim());
  const CVector v = es.eigenvectors().col(kernel.front());
  CMatrix rho = Eigen::Map<const CMatrix>(v.data(), dim, dim);
  rho /= rho.trace();
  return (rho + rho.adjoint()) / 2.0;
}

CMatrix oracle_covariance(const CMatrix& rho, const std::vector<CMatrix>& w) {
  const auto m = static_cast<Eigen::Index>(w.size());
  CMatrix c(m, m);
  for (Eigen::Index j = 0; j < m; ++j) {
    const CMatrix rw = rho * w[static_cast<std::size_t>(j)];
    for (Eigen::Index k = 0; k < m; ++k) {
      c(j, k) = (rw * w[static_cast<std::size_t>(k)]).trace();
    }
  }
  return c;
}

CMatrix oracle_evolve_state(const DenseLiouvillean& liou, const CMatrix& rho0, double t) {
  check_sites(liou.n, kOracleEvolveMaxSites);
  const auto dim = static_cast<Eigen::Index>(liou.hilbert_dim());
  if (rho0.rows() != dim || rho0.cols() != dim) {
    throw Error(ErrorCode::kDimensionMismatch, "initial state has the wrong dimension");
  }
  const CMatrix prop = (t * liou.superop).exp();
  const CVector v = prop * Eigen::Map<const CVector>(rho0.data(), dim * dim);
  return Eigen::Map<const CMatrix>(v.data(), dim, dim);
}

Complex oracle_evolve(const DenseLiouvillean& liou, const CMatrix& rho0, const CMatrix& x,
                      double t) {
  return (x * oracle_evolve_state(liou, rho0, t)).trace();
}

double multiset_distance(std::vector<Complex> a, std::vector<Complex> b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  std::vector<bool> used(b.size(), false);
  double worst = 0.0;
  for (const Complex& x : a) {
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < b.size(); ++i) {
      if (used[i]) continue;
      const double d = std::abs(x - b[i]);
      if (d < best_d) {
        best_d = d;
        best = i;
      }
    }
    used[best] = true;
    worst = std::max(worst, best_d);
  }
  return worst;
}

RandomModel random_quadratic_model(std::size_t n, std::uint64_t seed, std::uint64_t index) {
  Stream rng(seed, index);
  const auto dim = static_cast<Eigen::Index>(2 * n);
  CMatrix h = CMatrix::Zero(dim, dim);
  for (Eigen::Index j = 0; j < dim; ++j) {
    for (Eigen::Index k = j + 1; k < dim; ++k) {
      const double x = 0.5 * rng.normal();
      h(j, k) = kI * x;
      h(k, j) = -kI * x;
    }
  }
  RandomModel model{QuadraticHamiltonian(h), BathSpec(n)};
  for (std::size_t mu = 0; mu < n + 1; ++mu) {
    CVector l(dim);
    for (Eigen::Index j = 0; j < dim; ++j) l(j) = 0.5 * Complex(rng.normal(), rng.normal());
    model.bath.add(l);
  }
  return model;
}

OracleTrial oracle_trial(std::size_t n, std::uint64_t seed, std::uint64_t index) {
  check_sites(n, kOracleEvolveMaxSites);
  const RandomModel model = random_quadratic_model(n, seed, index);
  OracleTrial trial;
  trial.n = n;
  trial.index = index;

  const ShapeMatrix a = build_shape_matrix(model.hamiltonian, model.bath);
  const NormalMasterModes nmm = diagonalize_shape(a);
  const NessCovariance cov = ness_covariance(nmm);

  const DenseModel dense = lift_quadratic(model.hamiltonian, model.bath);
  const DenseLiouvillean liou = build_superoperator(dense);
  trial.trace_defect = liou.trace_defect();
  const CMatrix rho = oracle_ness(liou);
  const auto w = realize_majorana(n);
  trial.covariance_dev = (oracle_covariance(rho, w) - cov.C).cwiseAbs().maxCoeff();

  const auto predicted = liouville_eigenvalues_full(nmm.rapidities, SectorFilter::kEven);
  trial.spectrum_dev = multiset_distance(oracle_eigenvalues(liou, SectorFilter::kEven), predicted);

  // Three 4-point functions (2-point for a single site) on random distinct
  // indices in random order.
  Stream rng(seed ^ 0xA5A5A5A5A5A5A5A5ULL, index);
  const std::size_t m = 2 * n;
  const auto order = static_cast<std::ptrdiff_t>(std::min<std::size_t>(4, m));
  for (int rep = 0; rep < 3; ++rep) {
    std::vector<std::size_t> pool(m);
    for (std::size_t i = 0; i < m; ++i) pool[i] = i;
    for (std::size_t i = m - 1; i > 0; --i) std::swap(pool[i], pool[rng.bits() % (i + 1)]);
    const std::vector<std::size_t> idx(pool.begin(), pool.begin() + order);
    const Complex wick = expect_monomial(cov, idx);
    CMatrix prod = w[idx[0]];
    for (std::size_t i = 1; i < idx.size(); ++i) prod = prod * w[idx[i]];
    const Complex exact = (rho * prod).trace();
    trial.wick_dev = std::max(trial.wick_dev, std::abs(wick - exact));
  }
  return trial;
}

bool OracleCheckReport::passed(double cov_tol, double spec_tol, double wick_tol) const {
  return max_covariance_dev <= cov_tol && max_spectrum_dev <= spec_tol && max_wick_dev <= wick_tol;
}

OracleCheckReport run_oracle_check(std::size_t n, std::size_t trials, std::uint64_t seed) {
  OracleCheckReport report;
  for (std::size_t i = 0; i < trials; ++i) {
    OracleTrial t = oracle_trial(n, seed, i);
    report.max_covariance_dev = std::max(report.max_covariance_dev, t.covariance_dev);
    report.max_spectrum_dev = std::max(report.max_spectrum_dev, t.spectrum_dev);
    report.max_wick_dev = std::max(report.max_wick_dev, t.wick_dev);
    report.trials.push_back(t);
  }
  return report;
}

}  // namespace thirdq
