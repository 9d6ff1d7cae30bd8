#pragma once

#include <array>
#include <vector>

#include "thirdq/types.hpp"

namespace thirdq {

/// Homogeneous transverse Ising chain (Jx = J, Jy = 0) with end baths,
/// Gamma_plus = Gamma2 + Gamma1 and Gamma_minus = Gamma2 - Gamma1 per side.
struct IsingParams {
  double J = 0.0;
  double h = 0.0;
  double gammaPlusL = 0.0, gammaMinusL = 0.0;
  double gammaPlusR = 0.0, gammaMinusR = 0.0;

  static IsingParams from_rates(double j, double h, double gl1, double gl2, double gr1,
                                double gr2);
  void validate() const;  // J != 0, h != 0
};

enum class BathSide { kLeft, kRight };

struct Dispersion {
  Complex xi_minus;
  Complex xi_plus;
  Complex omega;
};

// Branch of omega with |xi_-| <= 1. Throws kBranchAmbiguity if both momenta
// sit on the unit circle while beta is not purely imaginary.
Dispersion dispersion(const IsingParams& p, Complex beta);

// tau(beta) of the left S-matrix, on the dispersion branch.
Complex tau_left(const IsingParams& p, Complex beta);

// 2x2 left S-matrix; throws kTauZero when |tau| vanishes.
Eigen::Matrix2cd s_matrix_left(const IsingParams& p, Complex beta);

// Coefficients c_0..c_4 of p(beta) as a polynomial in b = beta^2 for bath strength gplus.
std::array<double, 5> evanescent_poly_coefficients(double gplus, double j, double h);
Complex evanescent_poly(const IsingParams& p, BathSide side, Complex beta);

// Roots of p with Re beta >= 0 that are neither beta = 0 nor zeros of tau;
// ordered by Re descending (the first entry is the leading one).
std::vector<Complex> evanescent_rapidities(const IsingParams& p, BathSide side);

enum class GapFormula {
  kCorrected,  // mixed Gamma_L Gamma_R quartic term weighted consistently
  kPrinted,    // mixed quartic term with a single common weight
};

// Limit of Delta * n^3 for n -> infinity.
double gap_asymptotic(const IsingParams& p, GapFormula formula = GapFormula::kCorrected);

}  // namespace thirdq
