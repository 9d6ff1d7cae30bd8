// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

#include "cli_runner.hpp"
#include "support.hpp"
#include "thirdq/dense_oracle.hpp"
#include "thirdq/disorder.hpp"
#include "thirdq/ising.hpp"
#include "thirdq/ness.hpp"
#include "thirdq/spectral.hpp"
#include "thirdq/xy_chain.hpp"

using namespace thirdq;
using namespace testing_support;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

Outcome single_fermion_closed_form() {
  Stream rng(1001, 0);
  double worst_rap = 0.0, worst_occ = 0.0;
  for (int k = 0; k < 50; ++k) {
    const double h = rng.uniform(-3.0, 3.0);
    const double g1 = rng.uniform(0.01, 3.0), g2 = rng.uniform(0.01, 3.0);
    const Model m = single_fermion(h, g1, g2);
    const NormalMasterModes nmm = diagonalize_shape(build_shape_matrix(m.h, m.bath));
    const double gp = g1 + g2;
    const std::vector<Complex> expect{Complex(gp / 2, std::abs(h)), Complex(gp / 2, -std::abs(h))};
    worst_rap = std::max(worst_rap, multiset_distance(nmm.rapidities, expect));
    const NessCovariance cov = ness_covariance(nmm);
    const double occ = 0.5 * (1.0 + (-kI * cov.C(0, 1)).real());
    worst_occ = std::max(worst_occ, std::abs(occ - g2 / gp));
  }
  return {worst_rap <= 1e-10 && worst_occ <= 1e-10,
          "max rapidity error " + fmt("%.2e", worst_rap) + ", max occupation error " + fmt("%.2e", worst_occ)};
}

Outcome oracle_equivalence() {
  double cov = 0.0, spec = 0.0, wick = 0.0;
  for (std::size_t n : {2, 3}) {
    const OracleCheckReport r = run_oracle_check(n, 20, 2002);
    cov = std::max(cov, r.max_covariance_dev);
    spec = std::max(spec, r.max_spectrum_dev);
    wick = std::max(wick, r.max_wick_dev);
  }
  return {cov <= 1e-8 && spec <= 1e-7 && wick <= 1e-8,
          "covariance " + fmt("%.2e", cov) + ", spectrum " + fmt("%.2e", spec) + ", wick " + fmt("%.2e", wick)};
}

Outcome structural_invariants() {
  double anti = 0.0, norm = 0.0, resid = 0.0, sum = 0.0, min_re = 0.0, cc = 0.0, herm = 0.0;
  for (std::uint64_t i = 0; i < 100; ++i) {
    const std::size_t n = 1 + static_cast<std::size_t>((i * 7) % 40);
    const RandomModel r = random_quadratic_model(n, 3003, i);
    const ShapeMatrix a = build_shape_matrix(r.hamiltonian, r.bath);
    const NormalMasterModes nmm = diagonalize_shape(a);
    anti = std::max(anti, antisymmetry_defect(a.A));
    norm = std::max(norm, normalization_defect(nmm));
    resid = std::max(resid, eigen_residual(a, nmm) / norm_inf(a.A));
    const Complex total = std::accumulate(nmm.rapidities.begin(), nmm.rapidities.end(), Complex{});
    const double two_tr = 2.0 * induced_bath_matrix(r.bath).trace().real();
    sum = std::max(sum, std::abs(total - two_tr) / two_tr);
    for (const auto& b : nmm.rapidities) min_re = std::min(min_re, b.real());
    const NessCovariance c = ness_covariance(nmm);
    cc = std::max(cc, c.anticommutator_defect());
    herm = std::max(herm, c.hermiticity_defect());
  }
  const bool ok = anti <= 1e-12 && norm <= 1e-8 && resid <= 1e-8 && sum <= 1e-8 && min_re >= -1e-10 &&
                  cc <= 1e-8 && herm <= 1e-8;
  return {ok, "|A+A^T| " + fmt("%.1e", anti) + ", |VV^T-J| " + fmt("%.1e", norm) + ", residual/|A| " +
                  fmt("%.1e", resid) + ", sum rule " + fmt("%.1e", sum) + ", min Re " + fmt("%.1e", min_re) +
                  ", |C+C^T-2| " + fmt("%.1e", cc) + ", |C-C^+| " + fmt("%.1e", herm)};
}

Outcome evanescent_modes() {
  const IsingParams p = IsingParams::from_rates(1.5, 1.0, 1.0, 0.6, 1.0, 0.3);
  const auto left = evanescent_rapidities(p, BathSide::kLeft);
  const auto right = evanescent_rapidities(p, BathSide::kRight);
  if (left.empty()) return {false, "no left edge rapidity"};
  const double xi = dispersion(p, left[0]).xi_minus.real();
  const bool values_ok = std::abs(left[0] - 0.438739) <= 1e-5 && std::abs(xi - 0.584692) <= 1e-5;
  const auto rap = shape_rapidities(chain_shape_matrix(reference_ising(150)));
  double worst = 0.0;
  std::size_t roots = 0;
  for (const auto* set : {&left, &right}) {
    for (const auto& b : *set) {
      double best = 1e9;
      for (const auto& r : rap) best = std::min(best, std::abs(r - b));
      worst = std::max(worst, best);
      ++roots;
    }
  }
  return {values_ok && worst <= 1e-6,
          "beta " + fmt("%.7f", left[0].real()) + ", xi_- " + fmt("%.7f", xi) + ", " + std::to_string(roots) +
              " roots matched within " + fmt("%.1e", worst) + " at n = 150"};
}

Outcome gap_law() {
  const double g = gap_asymptotic(IsingParams::from_rates(1.5, 1.0, 1.0, 0.6, 1.0, 0.3));
  std::vector<double> ns, devs;
  double dev200 = 0.0;
  for (std::size_t n = 40; n <= 200; n += 20) {
    const auto r = shape_rapidities(chain_shape_matrix(reference_ising(n)));
    const double scaled = 2.0 * r.back().real() * std::pow(static_cast<double>(n), 3);
    const double dev = std::abs(scaled - g) / g;
    if (n == 200) dev200 = dev;
    ns.push_back(static_cast<double>(n));
    devs.push_back(dev);
  }
  const double slope = -fit_power_law(ns, devs).rate;
  return {dev200 <= 0.05 && std::abs(slope + 1.0) <= 0.15,
          "asymptote " + fmt("%.6f", g) + ", deviation at n = 200 " + fmt("%.4f", dev200) +
              ", log-log slope " + fmt("%.3f", slope)};
}

Outcome transport() {
  std::vector<double> currents;
  double flat = 0.0;
  for (std::size_t n = 20; n <= 100; n += 10) {
    const TransportReport t = transport_report(reference_ising(n));
    const auto [lo, hi] = std::minmax_element(t.energy_current.begin(), t.energy_current.end());
    flat = std::max(flat, (*hi - *lo) / std::abs(*hi));
    currents.push_back(t.energy_current[t.energy_current.size() / 2]);
  }
  const auto [qlo, qhi] = std::minmax_element(currents.begin(), currents.end());
  const double variation = (*qhi - *qlo) / std::abs(*qhi);

  const IsingParams p = IsingParams::from_rates(1.5, 1.0, 1.0, 0.6, 1.0, 0.3);
  const auto left = evanescent_rapidities(p, BathSide::kLeft);
  const double predicted = 4.0 * std::log(std::abs(dispersion(p, left[0]).xi_minus));
  const TransportReport t80 = transport_report(reference_ising(80));
  const double slope = edge_log_slope(t80.energy_density, 2, 10);
  const double slope_err = std::abs(slope - predicted) / std::abs(predicted);
  return {variation < 0.02 && flat <= 1e-8 && slope_err <= 0.05,
          "current variation " + fmt("%.2e", variation) + ", bond spread " + fmt("%.1e", flat) +
              ", edge slope " + fmt("%.4f", slope) + " vs " + fmt("%.4f", predicted)};
}

Outcome disorder() {
  DisorderSpec s;
  s.Jx = {0.5, 2.0};
  s.h = {1.0, 1.0};
  s.gammaL1 = 1.0;
  s.gammaL2 = 0.6;
  s.gammaR1 = 1.0;
  s.gammaR2 = 0.3;
  s.realizations = 200;
  s.seed = 7007;
  std::vector<std::size_t> ns;
  for (std::size_t n = 8; n <= 40; n += 4) ns.push_back(n);
  const EnsembleSummary e = ensemble_summary(s, ns);
  const double ratio = e.sizes.back().mean_current / e.sizes.front().mean_current;
  const double bound = (8.0 / 40.0) * (8.0 / 40.0);
  std::size_t clamped = 0, unresolved = 0;
  for (const auto& z : e.sizes) {
    clamped += z.clamped;
    unresolved += z.unresolved;
  }
  return {e.gap_exponential.r2 >= 0.98 && ratio < bound,
          "exponential gap fit R^2 " + fmt("%.4f", e.gap_exponential.r2) + " (localization rate " +
              fmt("%.3f", e.gap_exponential.rate) + "), power-law R^2 " + fmt("%.4f", e.gap_power_law.r2) +
              ", Q(40)/Q(8) " + fmt("%.3e", ratio) + " < " + fmt("%.2f", bound) + ", clamped gaps " +
              std::to_string(clamped) + ", unresolved realizations " + std::to_string(unresolved)};
}

Outcome determinism() {
  const auto dir = cli_runner::scratch_dir("acceptance");
  const std::string model =
      R"('{"disorder": {"Jx": [0.5, 2], "h": 1}, "gamma": {"L1": 1, "L2": 0.6, "R1": 1, "R2": 0.3}}')";
  bool ok = true;
  std::string detail;
  const char* threads[] = {"1", "4", "1"};
  std::vector<std::string> oracle, scan, profile;
  for (int k = 0; k < 3; ++k) {
    const std::string env = std::string("THIRDQ_THREADS=") + threads[k];
    const auto o = dir / ("oracle_" + std::to_string(k) + ".csv");
    const auto d = dir / ("scan_" + std::to_string(k) + ".csv");
    ok = ok && cli_runner::run("oracle-check --n 2 --trials 10 --seed 42 --out " + o.string(), env) == 0;
    ok = ok && cli_runner::run("disorder-scan --model " + model +
                                   " --n-range 8:20:4 --trials 40 --seed 42 --out " + d.string(),
                               env) == 0;
    oracle.push_back(cli_runner::slurp(o));
    scan.push_back(cli_runner::slurp(d));
    profile.push_back(cli_runner::slurp(dir / ("scan_" + std::to_string(k) + "_profile.csv")));
  }
  std::filesystem::remove_all(dir);
  if (!ok) return {false, "a CLI run failed"};
  auto same = [](const std::vector<std::string>& v) {
    return !v[0].empty() && v[0] == v[1] && v[1] == v[2];
  };
  const bool identical = same(oracle) && same(scan) && same(profile);
  return {identical, std::string(identical ? "byte-identical" : "outputs differ") +
                         " across THIRDQ_THREADS = 1, 4, 1 for oracle-check and disorder-scan"};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "single-fermion closed form", single_fermion_closed_form},
      {2, "dense-oracle equivalence", oracle_equivalence},
      {3, "structural invariants", structural_invariants},
      {4, "evanescent modes", evanescent_modes},
      {5, "gap law", gap_law},
      {6, "homogeneous transport", transport},
      {7, "disorder localization", disorder},
      {8, "determinism", determinism},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("criterion %d %s: %s (%s; %.1f s)\n", c.id, c.name, o.pass ? "PASS" : "FAIL",
                o.detail.c_str(), secs);
    std::fflush(stdout);
    if (!o.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
