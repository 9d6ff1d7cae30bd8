#pragma once

#include <span>
#include <vector>

#include "thirdq/majorana.hpp"

namespace thirdq {

/// Normal master modes of a shape matrix. Zero-based: row 2j of V is the
/// right eigenvector for +rapidities[j], row 2j+1 the one for -rapidities[j],
/// normalized so that V V^T = J (pairwise swap).
struct NormalMasterModes {
  std::size_t n = 0;
  std::vector<Complex> rapidities;  // 2n values, Re descending, Re >= 0
  CMatrix V;                        // 4n x 4n
  double a_norm = 0.0;              // ||A||_inf of the source matrix
  double condition = 1.0;           // 2-norm condition number of V
};

struct SpectrumSummary {
  double gap = 0.0;                  // 2 Re beta_{2n}
  std::size_t zero_rapidities = 0;   // d
  std::size_t cancelling_pairs = 0;  // pairs beta_i + beta_j = 0 among nonzero rapidities
  bool unique_ness = false;
  bool converges = false;
  double zero_tol = 0.0;

  // Dimension 2^d of the stationary manifold spanned by zero modes.
  double ness_degeneracy() const;
};

struct DiagonalizeOptions {
  double pair_tol = 1e-7;        // relative to ||A||
  double degenerate_tol = 1e-7;  // relative to ||A||
  double max_condition = 1e8;
};

NormalMasterModes diagonalize_shape(const ShapeMatrix& a, const DiagonalizeOptions& opts = {});

// Rapidities only (no eigenvectors, no conditioning check).
std::vector<Complex> shape_rapidities(const ShapeMatrix& a, const DiagonalizeOptions& opts = {});

// max |A - V^T Lambda V|.
double verify_canonical_form(const ShapeMatrix& a, const NormalMasterModes& nmm);

// max_r ||A v_r - lambda_r v_r|| / ||v_r||.
double eigen_residual(const ShapeMatrix& a, const NormalMasterModes& nmm);

// max |V V^T - J|.
double normalization_defect(const NormalMasterModes& nmm);

double default_zero_tol(double a_norm);

// zero_tol <= 0 selects default_zero_tol.
SpectrumSummary classify(std::span<const Complex> rapidities, double a_norm, double zero_tol = 0.0);
SpectrumSummary classify(const NormalMasterModes& nmm, double zero_tol = 0.0);

enum class SectorFilter { kAll, kEven };

inline constexpr std::size_t kFullSpectrumCap = 24;  // max 2n for full enumeration

// lambda_nu = -2 sum_j beta_j nu_j, indexed by the bitmask nu (bit j <-> nu_{j+1}).
// With kEven only even-weight nu are kept, in increasing mask order.
std::vector<Complex> liouville_eigenvalues_full(std::span<const Complex> rapidities,
                                                SectorFilter filter = SectorFilter::kAll);

// The k eigenvalues with smallest |Re lambda|, ascending; lambda = 0 first.
std::vector<Complex> liouville_eigenvalues_slowest(std::span<const Complex> rapidities,
                                                   std::size_t k);

namespace detail {

struct EigenPair {
  std::size_t plus = 0;   // index of +beta in the eigenvalue list
  std::size_t minus = 0;  // index of -beta
  Complex beta;
};

// Greedy +/- pairing by smallest |l_p + l_q|; throws kPairingFailure when a
// pair needs more than tol. Result is oriented (Re beta >= 0, purely
// imaginary rapidities split evenly between +i and -i) and sorted.
std::vector<EigenPair> pair_eigenvalues(std::span<const Complex> eig, double tol,
                                        double tie_tol, double degenerate_tol);

// Orders by Re descending; near-equal real parts are ordered by Im descending.
void sort_rapidities(std::vector<Complex>& r, double tie_tol);

}  // namespace detail

}  // namespace thirdq
