#include "thirdq/spectral.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cmath>
#include <numeric>
#include <queue>
#include <string>

#include "thirdq/error.hpp"

namespace thirdq {

namespace detail {

void sort_rapidities(std::vector<Complex>& r, double tie_tol) {
  std::stable_sort(r.begin(), r.end(),
                   [](const Complex& a, const Complex& b) { return a.real() > b.real(); });
  std::size_t start = 0;
  while (start < r.size()) {
    std::size_t end = start + 1;
    while (end < r.size() && std::abs(r[end].real() - r[start].real()) <= tie_tol) ++end;
    std::stable_sort(r.begin() + static_cast<std::ptrdiff_t>(start),
                     r.begin() + static_cast<std::ptrdiff_t>(end),
                     [](const Complex& a, const Complex& b) { return a.imag() > b.imag(); });
    start = end;
  }
}

namespace {

void sort_pairs(std::vector<EigenPair>& pairs, double tie_tol) {
  std::stable_sort(pairs.begin(), pairs.end(), [](const EigenPair& a, const EigenPair& b) {
    return a.beta.real() > b.beta.real();
  });
  std::size_t start = 0;
  while (start < pairs.size()) {
    std::size_t end = start + 1;
    while (end < pairs.size() &&
           std::abs(pairs[end].beta.real() - pairs[start].beta.real()) <= tie_tol) {
      ++end;
    }
    std::stable_sort(pairs.begin() + static_cast<std::ptrdiff_t>(start),
                     pairs.begin() + static_cast<std::ptrdiff_t>(end),
                     [](const EigenPair& a, const EigenPair& b) {
                       return a.beta.imag() > b.beta.imag();
                     });
    start = end;
  }
}

void flip(EigenPair& p) {
  std::swap(p.plus, p.minus);
  p.beta = -p.beta;
}

}  // namespace

std::vector<EigenPair> pair_eigenvalues(std::span<const Complex> eig, double tol,
                                        double tie_tol, double degenerate_tol) {
  const std::size_t count = eig.size();
  if (count % 2 != 0) {
    throw Error(ErrorCode::kPairingFailure, "odd number of eigenvalues cannot be paired");
  }
  struct Candidate {
    double cost;
    std::size_t p, q;
  };
  std::vector<Candidate> cand;
  cand.reserve(count * (count - 1) / 2);
  for (std::size_t p = 0; p < count; ++p) {
    for (std::size_t q = p + 1; q < count; ++q) {
      cand.push_back({std::abs(eig[p] + eig[q]), p, q});
    }
  }
  std::sort(cand.begin(), cand.end(), [](const Candidate& a, const Candidate& b) {
    if (a.cost != b.cost) return a.cost < b.cost;
    if (a.p != b.p) return a.p < b.p;
    return a.q < b.q;
  });

  std::vector<bool> used(count, false);
  std::vector<EigenPair> pairs;
  pairs.reserve(count / 2);
  for (const auto& c : cand) {
    if (used[c.p] || used[c.q]) continue;
    if (c.cost > tol) {
      throw Error(ErrorCode::kPairingFailure,
                  "eigenvalue " + std::to_string(eig[c.p].real()) + "+" +
                      std::to_string(eig[c.p].imag()) + "i has no -beta partner (mismatch " +
                      std::to_string(c.cost) + ")");
    }
    used[c.p] = used[c.q] = true;
    pairs.push_back({c.p, c.q, (eig[c.p] - eig[c.q]) / 2.0});
    if (pairs.size() == count / 2) break;
  }

  // Orientation: Re beta >= 0, purely imaginary ones start with Im >= 0.
  std::vector<std::size_t> imaginary;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    auto& p = pairs[i];
    if (p.beta.real() < -tie_tol) {
      flip(p);
    } else if (std::abs(p.beta.real()) <= tie_tol) {
      if (p.beta.imag() < 0.0) flip(p);
      if (std::abs(p.beta) > degenerate_tol) imaginary.push_back(i);
    }
  }
  // Degenerate imaginary rapidities come from modes untouched by the baths;
  // alternate their signs so each +i eps is matched by a -i eps.
  std::stable_sort(imaginary.begin(), imaginary.end(), [&](std::size_t a, std::size_t b) {
    return pairs[a].beta.imag() > pairs[b].beta.imag();
  });
  std::size_t start = 0;
  while (start < imaginary.size()) {
    std::size_t end = start + 1;
    while (end < imaginary.size() &&
           std::abs(pairs[imaginary[end]].beta - pairs[imaginary[start]].beta) <= degenerate_tol) {
      ++end;
    }
    for (std::size_t k = start + 1; k < end; k += 2) flip(pairs[imaginary[k]]);
    start = end;
  }

  sort_pairs(pairs, tie_tol);
  return pairs;
}

}  // namespace detail

using detail::EigenPair;

namespace {

struct Tolerances {
  double a_norm;
  double pair;
  double tie;
  double degenerate;
};

Tolerances tolerances(const CMatrix& a, const DiagonalizeOptions& opts) {
  Tolerances t{};
  t.a_norm = norm_inf(a);
  const double scale = std::max(1.0, t.a_norm);
  t.pair = opts.pair_tol * scale;
  t.tie = 1e-11 * scale;
  t.degenerate = opts.degenerate_tol * scale;
  return t;
}

Complex bilinear(const CVector& a, const CVector& b) { return (a.array() * b.array()).sum(); }

// Orthonormal basis (columns) of the approximate null space of m, dimension k.
CMatrix null_space(const CMatrix& m, Eigen::Index k, double tol) {
  Eigen::BDCSVD<CMatrix> svd(m, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const Eigen::Index dim = m.cols();
  if (sv(dim - k) > tol) {
    throw Error(ErrorCode::kNearDefective,
                "eigenspace has geometric multiplicity below " + std::to_string(k) +
                    " (singular value " + std::to_string(sv(dim - k)) + ")");
  }
  return svd.matrixV().rightCols(k);
}

double smallest_singular_ratio(const CMatrix& m) {
  Eigen::JacobiSVD<CMatrix> svd(m);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) return 0.0;
  return sv(sv.size() - 1) / sv(0);
}

// Bilinear (non-conjugating) Gram-Schmidt with pivoting: returns u_i with
// u_i . u_j = delta_ij spanning the same space as the columns of x.
std::vector<CVector> bilinear_orthonormalize(const CMatrix& x) {
  std::vector<CVector> rest;
  for (Eigen::Index c = 0; c < x.cols(); ++c) rest.emplace_back(x.col(c));
  std::vector<CVector> out;
  while (!rest.empty()) {
    std::size_t best = 0;
    double best_val = -1.0;
    for (std::size_t i = 0; i < rest.size(); ++i) {
      const double v = std::abs(bilinear(rest[i], rest[i])) / std::max(rest[i].squaredNorm(), 1e-300);
      if (v > best_val) {
        best_val = v;
        best = i;
      }
    }
    if (best_val < 1e-10) {
      // All remaining vectors are isotropic; combine two with a nonzero product.
      double cross = 0.0;
      std::size_t other = 0;
      for (std::size_t i = 0; i < rest.size(); ++i) {
        if (i == best) continue;
        const double v = std::abs(bilinear(rest[best], rest[i])) /
                         std::max(rest[best].norm() * rest[i].norm(), 1e-300);
        if (v > cross) {
          cross = v;
          other = i;
        }
      }
      if (cross < 1e-10) {
        throw Error(ErrorCode::kNearDefective, "zero-rapidity subspace has a degenerate bilinear form");
      }
      rest[best] += rest[other];
    }
    const Complex s = std::sqrt(bilinear(rest[best], rest[best]));
    CVector u = rest[best] / s;
    rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(best));
    for (auto& r : rest) r -= bilinear(r, u) * u;
    out.push_back(std::move(u));
  }
  return out;
}

// Largest singular value of V by power iteration on V^H V.
double spectral_norm(const CMatrix& v) {
  const Eigen::Index dim = v.cols();
  if (dim == 0) return 0.0;
  CVector x = CVector::Ones(dim) / std::sqrt(static_cast<double>(dim));
  double estimate = 0.0;
  for (int it = 0; it < 300; ++it) {
    CVector y = v.adjoint() * (v * x);
    const double ny = y.norm();
    if (ny == 0.0) return 0.0;
    x = y / ny;
    if (std::abs(ny - estimate) <= 1e-6 * ny) {
      estimate = ny;
      break;
    }
    estimate = ny;
  }
  return std::sqrt(estimate);
}

void fix_gauge(CVector& p, CVector& q) {
  const double np = p.norm();
  const double nq = q.norm();
  if (np > 0.0 && nq > 0.0) {
    const double s = std::sqrt(nq / np);
    p *= s;
    q /= s;
  }
  Eigen::Index idx = 0;
  p.cwiseAbs().maxCoeff(&idx);
  const double mag = std::abs(p(idx));
  if (mag > 0.0) {
    const Complex phase = p(idx) / mag;
    p /= phase;
    q *= phase;
  }
}

}  // namespace

double SpectrumSummary::ness_degeneracy() const {
  return std::ldexp(1.0, static_cast<int>(zero_rapidities));
}

std::vector<Complex> shape_rapidities(const ShapeMatrix& a, const DiagonalizeOptions& opts) {
  const Tolerances tol = tolerances(a.A, opts);
  Eigen::ComplexEigenSolver<CMatrix> es(a.A, false);
  if (es.info() != Eigen::Success) {
    throw Error(ErrorCode::kNearDefective, "eigenvalue iteration did not converge");
  }
  const CVector& ev = es.eigenvalues();
  std::vector<Complex> eig(ev.data(), ev.data() + ev.size());
  const auto pairs = detail::pair_eigenvalues(eig, tol.pair, tol.tie, tol.degenerate);
  std::vector<Complex> out;
  out.reserve(pairs.size());
  for (const auto& p : pairs) out.push_back(p.beta);
  return out;
}

NormalMasterModes diagonalize_shape(const ShapeMatrix& a, const DiagonalizeOptions& opts) {
  const Tolerances tol = tolerances(a.A, opts);
  const Eigen::Index dim = a.A.rows();
  Eigen::ComplexEigenSolver<CMatrix> es(a.A, true);
  if (es.info() != Eigen::Success) {
    throw Error(ErrorCode::kNearDefective, "eigenvalue iteration did not converge");
  }
  const CVector& ev = es.eigenvalues();
  const CMatrix& w = es.eigenvectors();
  std::vector<Complex> eig(ev.data(), ev.data() + ev.size());
  const auto pairs = detail::pair_eigenvalues(eig, tol.pair, tol.tie, tol.degenerate);
  const std::size_t np = pairs.size();

  std::vector<CVector> plus(np), minus(np);
  std::vector<bool> done(np, false);

  // Zero cluster: +beta and -beta coincide, so the 2d vectors are rebuilt as
  // a bilinear-orthonormal set and regrouped into pairs.
  std::vector<std::size_t> zero;
  for (std::size_t j = 0; j < np; ++j) {
    if (std::abs(pairs[j].beta) <= tol.degenerate) zero.push_back(j);
  }
  if (!zero.empty()) {
    const auto d = static_cast<Eigen::Index>(zero.size());
    CMatrix basis(dim, 2 * d);
    for (Eigen::Index i = 0; i < d; ++i) {
      basis.col(2 * i) = w.col(static_cast<Eigen::Index>(pairs[zero[i]].plus));
      basis.col(2 * i + 1) = w.col(static_cast<Eigen::Index>(pairs[zero[i]].minus));
    }
    if (smallest_singular_ratio(basis) < 1e-8) {
      basis = null_space(a.A, 2 * d, tol.degenerate);
    }
    const auto u = bilinear_orthonormalize(basis);
    const double r2 = std::sqrt(0.5);
    for (Eigen::Index i = 0; i < d; ++i) {
      const std::size_t j = zero[static_cast<std::size_t>(i)];
      plus[j] = r2 * (u[2 * i] - kI * u[2 * i + 1]);
      minus[j] = r2 * (u[2 * i] + kI * u[2 * i + 1]);
      done[j] = true;
    }
  }

  // Remaining rapidities, clustered by value up to sign: balanced imaginary
  // rapidities place +beta and -beta of different pairs in one eigenspace.
  for (std::size_t j = 0; j < np; ++j) {
    if (done[j]) continue;
    const Complex ref = pairs[j].beta;
    std::vector<std::size_t> cluster{j};
    std::vector<bool> flipped{false};
    for (std::size_t k = j + 1; k < np; ++k) {
      if (done[k]) continue;
      for (std::size_t c : cluster) {
        if (std::abs(pairs[k].beta - pairs[c].beta) <= tol.degenerate ||
            std::abs(pairs[k].beta + pairs[c].beta) <= tol.degenerate) {
          cluster.push_back(k);
          flipped.push_back(std::abs(pairs[k].beta + ref) < std::abs(pairs[k].beta - ref));
          break;
        }
      }
    }
    // Columns of p span the eigenspace of ref, columns of q that of -ref.
    const auto k = static_cast<Eigen::Index>(cluster.size());
    CMatrix p(dim, k), q(dim, k);
    for (Eigen::Index i = 0; i < k; ++i) {
      const EigenPair& e = pairs[cluster[static_cast<std::size_t>(i)]];
      const bool f = flipped[static_cast<std::size_t>(i)];
      p.col(i) = w.col(static_cast<Eigen::Index>(f ? e.minus : e.plus));
      q.col(i) = w.col(static_cast<Eigen::Index>(f ? e.plus : e.minus));
    }
    CMatrix gram = p.transpose() * q;
    if (k > 1 && smallest_singular_ratio(gram) < 1e-8) {
      Complex mean{0.0, 0.0};
      for (Eigen::Index i = 0; i < k; ++i) {
        const Complex b = pairs[cluster[static_cast<std::size_t>(i)]].beta;
        mean += flipped[static_cast<std::size_t>(i)] ? -b : b;
      }
      mean /= static_cast<double>(k);
      const CMatrix shift = mean * CMatrix::Identity(dim, dim);
      p = null_space(a.A - shift, k, tol.degenerate);
      q = null_space(a.A + shift, k, tol.degenerate);
      gram = p.transpose() * q;
    }
    if (k == 1 && std::abs(gram(0, 0)) == 0.0) {
      throw Error(ErrorCode::kNearDefective, "eigenvector pair has vanishing bilinear product");
    }
    if (k > 1 && smallest_singular_ratio(gram) < 1e-12) {
      throw Error(ErrorCode::kNearDefective, "degenerate eigenspaces cannot be paired");
    }
    q = q * gram.inverse();
    for (Eigen::Index i = 0; i < k; ++i) {
      const std::size_t c = cluster[static_cast<std::size_t>(i)];
      const bool f = flipped[static_cast<std::size_t>(i)];
      plus[c] = f ? q.col(i) : p.col(i);
      minus[c] = f ? p.col(i) : q.col(i);
      done[c] = true;
    }
  }

  NormalMasterModes out;
  out.n = a.n;
  out.a_norm = tol.a_norm;
  out.V.resize(dim, dim);
  out.rapidities.reserve(np);
  for (std::size_t j = 0; j < np; ++j) {
    fix_gauge(plus[j], minus[j]);
    out.V.row(static_cast<Eigen::Index>(2 * j)) = plus[j].transpose();
    out.V.row(static_cast<Eigen::Index>(2 * j + 1)) = minus[j].transpose();
    out.rapidities.push_back(pairs[j].beta);
  }
  // V^{-1} = J V^T, so cond_2(V) = ||V||_2^2.
  const double vn = spectral_norm(out.V);
  out.condition = vn * vn;
  if (!(out.condition <= opts.max_condition)) {
    throw Error(ErrorCode::kNearDefective, "eigenvector matrix condition number " +
                                               std::to_string(out.condition) + " exceeds " +
                                               std::to_string(opts.max_condition));
  }
  return out;
}

double verify_canonical_form(const ShapeMatrix& a, const NormalMasterModes& nmm) {
  const Eigen::Index dim = nmm.V.rows();
  if (a.A.rows() != dim) {
    throw Error(ErrorCode::kDimensionMismatch, "shape matrix and modes differ in size");
  }
  CMatrix lambda = CMatrix::Zero(dim, dim);
  for (std::size_t j = 0; j < nmm.rapidities.size(); ++j) {
    const auto r = static_cast<Eigen::Index>(2 * j);
    lambda(r, r + 1) = nmm.rapidities[j];
    lambda(r + 1, r) = -nmm.rapidities[j];
  }
  const CMatrix rebuilt = nmm.V.transpose() * lambda * nmm.V;
  return (a.A - rebuilt).cwiseAbs().maxCoeff();
}

double eigen_residual(const ShapeMatrix& a, const NormalMasterModes& nmm) {
  double worst = 0.0;
  for (std::size_t j = 0; j < nmm.rapidities.size(); ++j) {
    for (int s = 0; s < 2; ++s) {
      const CVector v = nmm.V.row(static_cast<Eigen::Index>(2 * j + s)).transpose();
      const Complex lam = s == 0 ? nmm.rapidities[j] : -nmm.rapidities[j];
      worst = std::max(worst, (a.A * v - lam * v).norm() / v.norm());
    }
  }
  return worst;
}

double normalization_defect(const NormalMasterModes& nmm) {
  const Eigen::Index dim = nmm.V.rows();
  CMatrix j = CMatrix::Zero(dim, dim);
  for (Eigen::Index r = 0; r + 1 < dim; r += 2) {
    j(r, r + 1) = 1.0;
    j(r + 1, r) = 1.0;
  }
  return (nmm.V * nmm.V.transpose() - j).cwiseAbs().maxCoeff();
}

double default_zero_tol(double a_norm) { return 1e-10 * std::max(1.0, a_norm); }

SpectrumSummary classify(std::span<const Complex> rapidities, double a_norm, double zero_tol) {
  SpectrumSummary s;
  s.zero_tol = zero_tol > 0.0 ? zero_tol : default_zero_tol(a_norm);
  double min_re = rapidities.empty() ? 0.0 : rapidities[0].real();
  for (const auto& b : rapidities) {
    if (std::abs(b) < s.zero_tol) ++s.zero_rapidities;
    min_re = std::min(min_re, b.real());
  }
  for (std::size_t i = 0; i < rapidities.size(); ++i) {
    if (std::abs(rapidities[i]) < s.zero_tol) continue;
    for (std::size_t j = i + 1; j < rapidities.size(); ++j) {
      if (std::abs(rapidities[j]) < s.zero_tol) continue;
      if (std::abs(rapidities[i] + rapidities[j]) < s.zero_tol) ++s.cancelling_pairs;
    }
  }
  s.gap = rapidities.empty() ? 0.0 : 2.0 * rapidities.back().real();
  s.unique_ness = s.zero_rapidities == 0 && s.cancelling_pairs == 0;
  s.converges = !rapidities.empty() && min_re > s.zero_tol;
  return s;
}

SpectrumSummary classify(const NormalMasterModes& nmm, double zero_tol) {
  return classify(nmm.rapidities, nmm.a_norm, zero_tol);
}

std::vector<Complex> liouville_eigenvalues_full(std::span<const Complex> rapidities,
                                                SectorFilter filter) {
  const std::size_t m = rapidities.size();
  if (m > kFullSpectrumCap) {
    throw Error(ErrorCode::kSizeCap, "full Liouvillean spectrum needs 2n <= " +
                                         std::to_string(kFullSpectrumCap) + ", got " +
                                         std::to_string(m));
  }
  const std::size_t total = std::size_t{1} << m;
  std::vector<Complex> all(total);
  all[0] = 0.0;
  for (std::size_t mask = 1; mask < total; ++mask) {
    const auto low = static_cast<std::size_t>(std::countr_zero(mask));
    all[mask] = all[mask & (mask - 1)] - 2.0 * rapidities[low];
  }
  if (filter == SectorFilter::kAll) return all;
  std::vector<Complex> even;
  even.reserve(total / 2 + 1);
  for (std::size_t mask = 0; mask < total; ++mask) {
    if (std::popcount(mask) % 2 == 0) even.push_back(all[mask]);
  }
  return even;
}

std::vector<Complex> liouville_eigenvalues_slowest(std::span<const Complex> rapidities,
                                                   std::size_t k) {
  std::vector<Complex> out;
  if (k == 0) return out;
  out.push_back(0.0);
  const std::size_t m = rapidities.size();
  if (m == 0) return out;

  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return rapidities[a].real() < rapidities[b].real();
  });

  // Subsets of the sorted rapidities in increasing order of sum Re beta: each
  // state extends by the next element or slides its last element forward.
  struct State {
    double key;
    Complex sum;
    std::size_t last;
    std::vector<std::uint32_t> members;
  };
  auto worse = [](const State& a, const State& b) {
    if (a.key != b.key) return a.key > b.key;
    return a.members > b.members;
  };
  std::priority_queue<State, std::vector<State>, decltype(worse)> heap(worse);
  heap.push({rapidities[order[0]].real(), rapidities[order[0]], 0, {0}});
  while (out.size() < k && !heap.empty()) {
    State s = heap.top();
    heap.pop();
    out.push_back(-2.0 * s.sum);
    if (s.last + 1 < m) {
      const Complex next = rapidities[order[s.last + 1]];
      State grow{s.key + next.real(), s.sum + next, s.last + 1, s.members};
      grow.members.push_back(static_cast<std::uint32_t>(s.last + 1));
      const Complex cur = rapidities[order[s.last]];
      State slide{s.key - cur.real() + next.real(), s.sum - cur + next, s.last + 1,
                  std::move(s.members)};
      slide.members.back() = static_cast<std::uint32_t>(s.last + 1);
      heap.push(std::move(grow));
      heap.push(std::move(slide));
    }
  }
  return out;
}

}  // namespace thirdq
