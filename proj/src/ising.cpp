#include "thirdq/ising.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "thirdq/error.hpp"

namespace thirdq {

IsingParams IsingParams::from_rates(double j, double h, double gl1, double gl2, double gr1,
                                    double gr2) {
  IsingParams p;
  p.J = j;
  p.h = h;
  p.gammaPlusL = gl2 + gl1;
  p.gammaMinusL = gl2 - gl1;
  p.gammaPlusR = gr2 + gr1;
  p.gammaMinusR = gr2 - gr1;
  p.validate();
  return p;
}

void IsingParams::validate() const {
  if (J == 0.0 || h == 0.0 || !std::isfinite(J) || !std::isfinite(h)) {
    throw Error(ErrorCode::kInvalidArgument, "Ising analytics need finite nonzero J and h");
  }
}

Dispersion dispersion(const IsingParams& p, Complex beta) {
  p.validate();
  const double two_hj = 2.0 * p.h * p.J;
  const Complex s = p.h * p.h + p.J * p.J + beta * beta;
  Complex omega = std::sqrt(s * s - two_hj * two_hj);
  Complex xm = (s - omega) / two_hj;
  Complex xp = (s + omega) / two_hj;
  const double am = std::abs(xm);
  const double ap = std::abs(xp);
  if (std::abs(am - 1.0) <= 1e-12 && std::abs(ap - 1.0) <= 1e-12) {
    if (std::abs(beta.real()) > 1e-12 * (1.0 + std::abs(beta))) {
      throw Error(ErrorCode::kBranchAmbiguity,
                  "both quasi-momenta on the unit circle for beta off the imaginary axis");
    }
  } else if (am > ap) {
    omega = -omega;
    std::swap(xm, xp);
  }
  return {xm, xp, omega};
}

namespace {

Complex tau_impl(double g, double j, double h, Complex b2, Complex w) {
  const double g2 = g * g;
  const double h2 = h * h;
  const double j2 = j * j;
  return g2 * g2 * b2 +
         8.0 * b2 * (h2 * h2 + (j2 + b2) * (j2 + b2 - w) + h2 * (2.0 * b2 - w)) -
         2.0 * g2 *
             (h2 * h2 + j2 * j2 + 3.0 * b2 * b2 + j2 * (2.0 * b2 - w) - b2 * w +
              h2 * (w - 2.0 * j2 - 4.0 * b2));
}

double scale_of(const std::array<double, 5>& c) {
  double s = 0.0;
  for (double x : c) s = std::max(s, std::abs(x));
  return std::max(s, 1e-300);
}

}  // namespace

Complex tau_left(const IsingParams& p, Complex beta) {
  const Dispersion d = dispersion(p, beta);
  return tau_impl(p.gammaPlusL, p.J, p.h, beta * beta, d.omega);
}

Eigen::Matrix2cd s_matrix_left(const IsingParams& p, Complex beta) {
  const Dispersion d = dispersion(p, beta);
  const Complex w = d.omega;
  const Complex b2 = beta * beta;
  const double gp = p.gammaPlusL;
  const double gm = p.gammaMinusL;
  const double h = p.h;
  const double j = p.J;
  const Complex tau = tau_impl(gp, j, h, b2, w);
  const double gp2 = gp * gp;
  const double scale = scale_of(evanescent_poly_coefficients(gp, j, h));
  if (std::abs(tau) <= 1e-14 * scale) {
    throw Error(ErrorCode::kTauZero, "S-matrix denominator vanishes at this rapidity");
  }
  const Complex diag_common = -gp2 * gp2 + 4.0 * gp2 * (b2 - 3.0 * h * h);
  Eigen::Matrix2cd s;
  s(0, 0) = b2 * (diag_common - 16.0 * h * (h * j * j + kI * gm * w)) / tau;
  s(1, 1) = b2 * (diag_common - 16.0 * h * (h * j * j - kI * gm * w)) / tau;
  const Complex off_common = gp2 * gp + 4.0 * gp * (h * h - b2);
  s(0, 1) = beta * (off_common + 8.0 * kI * gm * h * beta) * (2.0 * kI * w) / tau;
  s(1, 0) = beta * (off_common - 8.0 * kI * gm * h * beta) * (-2.0 * kI * w) / tau;
  return s;
}

std::array<double, 5> evanescent_poly_coefficients(double g, double j, double h) {
  const double g2 = g * g, g4 = g2 * g2, g6 = g4 * g2, g8 = g4 * g4;
  const double h2 = h * h, h4 = h2 * h2;
  const double j2 = j * j, j4 = j2 * j2;
  const double d2 = (h2 - j2) * (h2 - j2);
  std::array<double, 5> c{};
  c[0] = -4.0 * g6 * d2 - 32.0 * g4 * h2 * d2 - 64.0 * g2 * h4 * d2;
  c[1] = g8 - 4.0 * g6 * (2.0 * j2 - 4.0 * h2) + 16.0 * g4 * (7.0 * h4 - 6.0 * h2 * j2 + 2.0 * j4) +
         128.0 * g2 * h2 * j4 + 256.0 * h4 * j4;
  c[2] = -12.0 * g6 - 64.0 * g4 * (h2 - j2) + 64.0 * g2 * (2.0 * h4 + 4.0 * h2 * j2 - j4);
  c[3] = 48.0 * g4 - 128.0 * g2 * j2;
  c[4] = -64.0 * g2;
  return c;
}

Complex evanescent_poly(const IsingParams& p, BathSide side, Complex beta) {
  const double g = side == BathSide::kLeft ? p.gammaPlusL : p.gammaPlusR;
  const auto c = evanescent_poly_coefficients(g, p.J, p.h);
  const Complex b = beta * beta;
  return c[0] + b * (c[1] + b * (c[2] + b * (c[3] + b * c[4])));
}

std::vector<Complex> evanescent_rapidities(const IsingParams& p, BathSide side) {
  p.validate();
  const double g = side == BathSide::kLeft ? p.gammaPlusL : p.gammaPlusR;
  const auto c = evanescent_poly_coefficients(g, p.J, p.h);
  const double scale = scale_of(c);

  // Degree-8 polynomial in beta (only even powers); trim vanishing leading terms.
  std::array<double, 9> coef{};
  for (int k = 0; k < 5; ++k) coef[static_cast<std::size_t>(2 * k)] = c[static_cast<std::size_t>(k)];
  int deg = 8;
  while (deg > 0 && std::abs(coef[static_cast<std::size_t>(deg)]) <= 1e-14 * scale) --deg;
  std::vector<Complex> roots;
  if (deg > 0) {
    CMatrix comp = CMatrix::Zero(deg, deg);
    for (int i = 1; i < deg; ++i) comp(i, i - 1) = 1.0;
    for (int i = 0; i < deg; ++i) {
      comp(i, deg - 1) = -coef[static_cast<std::size_t>(i)] / coef[static_cast<std::size_t>(deg)];
    }
    Eigen::ComplexEigenSolver<CMatrix> es(comp, false);
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) roots.push_back(es.eigenvalues()(i));
  }

  // Keep one representative of each +/- pair.
  std::vector<Complex> reps;
  for (Complex r : roots) {
    const double tie = 1e-9 * (1.0 + std::abs(r));
    if (r.real() < -tie) continue;
    if (std::abs(r.real()) <= tie && r.imag() < 0.0) continue;
    if (std::abs(r) <= 1e-8) continue;
    bool dup = false;
    for (Complex q : reps) dup = dup || std::abs(q - r) <= 1e-9 * (1.0 + std::abs(r));
    if (!dup) reps.push_back(r);
  }

  std::vector<Complex> out;
  for (Complex r : reps) {
    Complex tau;
    try {
      const Dispersion d = dispersion(p, r);
      tau = tau_impl(g, p.J, p.h, r * r, d.omega);
    } catch (const Error&) {
      continue;
    }
    if (std::abs(tau) < 1e-8 * scale) continue;
    out.push_back(r);
  }
  std::stable_sort(out.begin(), out.end(), [](Complex a, Complex b) {
    if (a.real() != b.real()) return a.real() > b.real();
    return a.imag() > b.imag();
  });
  return out;
}

double gap_asymptotic(const IsingParams& p, GapFormula formula) {
  p.validate();
  const double gl = p.gammaPlusL, gr = p.gammaPlusR;
  const double h2 = p.h * p.h, j2 = p.J * p.J, hj = std::abs(p.h * p.J);
  const double a = 2.0 * h2 + 2.0 * hj + j2;
  const double b = 4.0 * h2 + 2.0 * hj + j2;
  const double gl2 = gl * gl, gr2 = gr * gr, gl3 = gl2 * gl, gr3 = gr2 * gr;

  double d1 = 64.0 * (gl + gr) * h2 * j2 * a + 16.0 * (gl3 + gr3) * h2 * j2 +
              16.0 * gl * gr * (gl + gr) * a * b + std::pow(gl * gr, 3) * (gl + gr);
  if (formula == GapFormula::kCorrected) {
    d1 += 4.0 * gl * gr * ((gl3 + gr3) * a + (gl2 * gr + gl * gr2) * b);
  } else {
    d1 += 4.0 * gl * gr * (gl3 + gl2 * gr + gl * gr2 + gr3) * a;
  }
  const double d2 = (gl2 * gl2 + 4.0 * gl2 * b + 16.0 * h2 * j2) *
                    (gr2 * gr2 + 4.0 * gr2 * b + 16.0 * h2 * j2);
  const double pre = std::pow(2.0 * M_PI * p.h * p.J, 2) / std::pow(std::abs(p.h) + std::abs(p.J), 2);
  return pre * d1 / d2;
}

}  // namespace thirdq
