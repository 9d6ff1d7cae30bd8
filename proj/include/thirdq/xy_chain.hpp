#pragma once

#include <span>
#include <string>
#include <vector>

#include "thirdq/majorana.hpp"
#include "thirdq/ness.hpp"

namespace thirdq {

/// Open XY chain with end baths. Jx, Jy have n-1 entries, h has n.
struct XYChainSpec {
  std::size_t n = 0;
  std::vector<double> Jx, Jy, h;
  double gammaL1 = 0.0, gammaL2 = 0.0, gammaR1 = 0.0, gammaR2 = 0.0;

  // Throws kInvalidArgument when sizes, rates or values are inconsistent.
  void validate() const;
  bool isotropic(double tol = 1e-12) const;
};

XYChainSpec homogeneous_chain(std::size_t n, double jx, double jy, double h, double gl1,
                              double gl2, double gr1, double gr2);

// JSON document with keys n, Jx, Jy (optional, default 0), h and
// gamma = {L1, L2, R1, R2}; scalars broadcast over the chain.
XYChainSpec parse_chain_json(const std::string& text);
XYChainSpec load_chain_file(const std::string& path);
std::string chain_to_json(const XYChainSpec& spec);

struct ChainModel {
  QuadraticHamiltonian hamiltonian;
  BathSpec bath;
};

ChainModel build_chain(const XYChainSpec& spec);
ShapeMatrix chain_shape_matrix(const XYChainSpec& spec);

// Coefficient matrices Q of the observables O = sum_jk w_j Q_jk w_k; m is the
// one-based bond or site label.
CMatrix energy_density_operator(const XYChainSpec& spec, std::size_t m);  // 1 <= m <= n-1
CMatrix energy_current_operator(const XYChainSpec& spec, std::size_t m);  // 1 <= m <= n-2
CMatrix spin_density_operator(std::size_t n, std::size_t m);              // 1 <= m <= n
CMatrix spin_current_operator(std::size_t n, std::size_t m);              // 1 <= m <= n-1

enum class NessRoute {
  kNormalModes,  // eigenvectors of the shape matrix
  kLyapunov,     // stationary covariance equation
};

struct TransportReport {
  std::vector<double> energy_density;  // <H_m>, m = 1..n-1
  std::vector<double> energy_current;  // <Q_m>, m = 1..n-2
  std::vector<double> spin_density;    // <sigma^z_m>, m = 1..n
  std::vector<double> spin_current;    // <S_m>, m = 1..n-1
  double mean_spin_current = 0.0;
  bool spin_current_conserved = false;
  double gap = 0.0;
  bool gap_clamped = false;       // gap fell below the resolution floor
  std::size_t unresolved_pairs = 0;  // Schur pairs left fully mixed by the Lyapunov route
  double total_energy = 0.0;      // <H> straight from the Hamiltonian matrix
  double max_imag_residue = 0.0;  // largest |Im| seen among the observables
};

inline constexpr double kGapFloor = 1e-14;

// unresolved_tol is forwarded to ness_covariance_lyapunov; the normal-mode route ignores it.
TransportReport transport_report(const XYChainSpec& spec, NessRoute route = NessRoute::kNormalModes,
                                 double unresolved_tol = 0.0);
TransportReport transport_from_covariance(const XYChainSpec& spec, const NessCovariance& cov,
                                          double gap);

// Median of the middle third of a profile.
double bulk_value(std::span<const double> profile);

// Least-squares slope of log|profile_m - bulk| against m over the one-based
// inclusive range [first, last].
double edge_log_slope(std::span<const double> profile, std::size_t first, std::size_t last);

}  // namespace thirdq
