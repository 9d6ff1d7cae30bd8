#pragma once

#include <cmath>
#include <vector>

#include "thirdq/majorana.hpp"
#include "thirdq/rng.hpp"
#include "thirdq/xy_chain.hpp"

namespace testing_support {

using thirdq::BathSpec;
using thirdq::CMatrix;
using thirdq::Complex;
using thirdq::CVector;
using thirdq::kI;
using thirdq::QuadraticHamiltonian;

inline double max_abs(const CMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

struct Model {
  QuadraticHamiltonian h;
  BathSpec bath;
};

// One fermion in field h with loss Gamma1 and gain Gamma2.
inline Model single_fermion(double h, double g1, double g2) {
  Model m{QuadraticHamiltonian(1), BathSpec(1)};
  m.h.add_term(0, 1, -kI * h);
  CVector l1(2), l2(2);
  l1 << 0.5 * std::sqrt(g1), -0.5 * kI * std::sqrt(g1);
  l2 << 0.5 * std::sqrt(g2), 0.5 * kI * std::sqrt(g2);
  m.bath.add(l1);
  m.bath.add(l2);
  return m;
}

inline QuadraticHamiltonian random_hamiltonian(std::size_t n, thirdq::Stream& rng) {
  const auto dim = static_cast<Eigen::Index>(2 * n);
  CMatrix h = CMatrix::Zero(dim, dim);
  for (Eigen::Index j = 0; j < dim; ++j) {
    for (Eigen::Index k = j + 1; k < dim; ++k) {
      const double x = rng.normal();
      h(j, k) = kI * x;
      h(k, j) = -kI * x;
    }
  }
  return QuadraticHamiltonian(h);
}

inline BathSpec random_bath(std::size_t n, std::size_t count, thirdq::Stream& rng) {
  BathSpec b(n);
  for (std::size_t mu = 0; mu < count; ++mu) {
    CVector l(static_cast<Eigen::Index>(2 * n));
    for (Eigen::Index j = 0; j < l.size(); ++j) l(j) = 0.5 * Complex(rng.normal(), rng.normal());
    b.add(l);
  }
  return b;
}

// 4x4 building blocks of the chain shape matrix, written out entry by entry.
inline CMatrix block_R() {
  CMatrix r = CMatrix::Zero(4, 4);
  r(0, 2) = 1.0;
  r(1, 3) = 1.0;
  r(2, 0) = -1.0;
  r(3, 1) = -1.0;
  return r;
}

inline CMatrix block_B(double gp, double gm) {
  CMatrix b(4, 4);
  b << 0.0, 0.5 * kI * gp, -0.5 * kI * gm, 0.5 * gm,
      -0.5 * kI * gp, 0.0, 0.5 * gm, 0.5 * kI * gm,
      0.5 * kI * gm, -0.5 * gm, 0.0, 0.5 * kI * gp,
      -0.5 * gm, -0.5 * kI * gm, -0.5 * kI * gp, 0.0;
  return b;
}

inline CMatrix block_Rm(double jx, double jy) {
  CMatrix r = CMatrix::Zero(4, 4);
  r(0, 2) = jy;
  r(1, 3) = jy;
  r(2, 0) = -jx;
  r(3, 1) = -jx;
  return r;
}

// Block tridiagonal shape matrix of an XY chain assembled from the blocks above.
inline CMatrix chain_block_matrix(const thirdq::XYChainSpec& s) {
  const auto n = static_cast<Eigen::Index>(s.n);
  CMatrix a = CMatrix::Zero(4 * n, 4 * n);
  for (Eigen::Index m = 0; m < n; ++m) {
    a.block(4 * m, 4 * m, 4, 4) = -s.h[static_cast<std::size_t>(m)] * block_R();
  }
  a.block(0, 0, 4, 4) += block_B(s.gammaL2 + s.gammaL1, s.gammaL2 - s.gammaL1);
  a.block(4 * (n - 1), 4 * (n - 1), 4, 4) += block_B(s.gammaR2 + s.gammaR1, s.gammaR2 - s.gammaR1);
  for (Eigen::Index m = 0; m + 1 < n; ++m) {
    const CMatrix rm = block_Rm(s.Jx[static_cast<std::size_t>(m)], s.Jy[static_cast<std::size_t>(m)]);
    a.block(4 * m, 4 * (m + 1), 4, 4) = rm;
    a.block(4 * (m + 1), 4 * m, 4, 4) = -rm.transpose();
  }
  return a;
}

inline thirdq::XYChainSpec random_chain(std::size_t n, thirdq::Stream& rng) {
  thirdq::XYChainSpec s;
  s.n = n;
  for (std::size_t m = 0; m + 1 < n; ++m) {
    s.Jx.push_back(rng.uniform(-2.0, 2.0));
    s.Jy.push_back(rng.uniform(-2.0, 2.0));
  }
  for (std::size_t m = 0; m < n; ++m) s.h.push_back(rng.uniform(-2.0, 2.0));
  s.gammaL1 = rng.uniform(0.1, 1.5);
  s.gammaL2 = rng.uniform(0.1, 1.5);
  s.gammaR1 = rng.uniform(0.1, 1.5);
  s.gammaR2 = rng.uniform(0.1, 1.5);
  return s;
}

// Transverse Ising chain used throughout: J = 1.5, h = 1, Gamma^L = (1, 0.6), Gamma^R = (1, 0.3).
inline thirdq::XYChainSpec reference_ising(std::size_t n) {
  return thirdq::homogeneous_chain(n, 1.5, 0.0, 1.0, 1.0, 0.6, 1.0, 0.3);
}

}  // namespace testing_support
