#pragma once

#include <cstdint>
#include <vector>

#include "thirdq/majorana.hpp"
#include "thirdq/spectral.hpp"

namespace thirdq {

// Brute-force Lindblad dynamics on the full 2^n-dimensional Hilbert space.
// Site 1 is the leftmost tensor factor; basis state a has bit (n - m) set
// when spin m points down (sigma^z = -1).

inline constexpr std::size_t kOracleMaxSites = 4;
inline constexpr std::size_t kOracleEvolveMaxSites = 3;

// Jordan-Wigner Majoranas w_1..w_2n (vector index j-1).
std::vector<CMatrix> realize_majorana(std::size_t n);

struct DenseModel {
  std::size_t n = 0;
  CMatrix H;
  std::vector<CMatrix> L;
};

DenseModel lift_quadratic(const QuadraticHamiltonian& h, const BathSpec& bath);

/// Column-stacked superoperator: vec(d rho/dt) = superop * vec(rho).
struct DenseLiouvillean {
  std::size_t n = 0;
  CMatrix superop;

  std::size_t hilbert_dim() const { return std::size_t{1} << n; }
  // max |vec(I)^T superop|
  double trace_defect() const;
  // Largest entry coupling even and odd operator-parity sectors.
  double parity_leak() const;
};

DenseLiouvillean build_superoperator(const DenseModel& model);

// Eigenvalues of the whole superoperator or of its even operator-parity block.
std::vector<Complex> oracle_eigenvalues(const DenseLiouvillean& liou,
                                        SectorFilter filter = SectorFilter::kAll);

// Unique stationary state; throws kDegenerateKernel when the kernel
// (|lambda| < rel_tol * ||L||) is not one-dimensional.
CMatrix oracle_ness(const DenseLiouvillean& liou, double rel_tol = 1e-10);

// C_jk = tr(rho w_j w_k).
CMatrix oracle_covariance(const CMatrix& rho, const std::vector<CMatrix>& w);

CMatrix oracle_evolve_state(const DenseLiouvillean& liou, const CMatrix& rho0, double t);
Complex oracle_evolve(const DenseLiouvillean& liou, const CMatrix& rho0, const CMatrix& x,
                      double t);

// Largest distance in a greedy nearest-neighbour matching of two multisets;
// infinity when the sizes differ.
double multiset_distance(std::vector<Complex> a, std::vector<Complex> b);

/// Cross-validation of the normal-mode solution against the dense oracle.
struct RandomModel {
  QuadraticHamiltonian hamiltonian;
  BathSpec bath;
};

// Hermitian H with Gaussian entries and n+1 random linear baths; fully
// determined by (seed, index).
RandomModel random_quadratic_model(std::size_t n, std::uint64_t seed, std::uint64_t index);

struct OracleTrial {
  std::size_t n = 0;
  std::uint64_t index = 0;
  double covariance_dev = 0.0;  // entrywise, normal modes vs oracle
  double spectrum_dev = 0.0;    // even-sector multiset distance
  double wick_dev = 0.0;        // three random 4-point functions
  double trace_defect = 0.0;
};

struct OracleCheckReport {
  std::vector<OracleTrial> trials;
  double max_covariance_dev = 0.0;
  double max_spectrum_dev = 0.0;
  double max_wick_dev = 0.0;

  bool passed(double cov_tol = 1e-8, double spec_tol = 1e-7, double wick_tol = 1e-8) const;
};

OracleTrial oracle_trial(std::size_t n, std::uint64_t seed, std::uint64_t index);
OracleCheckReport run_oracle_check(std::size_t n, std::size_t trials, std::uint64_t seed);

}  // namespace thirdq
