#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "thirdq/xy_chain.hpp"

namespace thirdq {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

/// Ensemble of XY chains whose couplings and fields are drawn independently
/// and uniformly from the given intervals.
struct DisorderSpec {
  std::size_t n = 0;  // default chain length; ensembles may override it
  Interval Jx, Jy, h;
  double gammaL1 = 0.0, gammaL2 = 0.0, gammaR1 = 0.0, gammaR2 = 0.0;
  std::size_t realizations = 200;
  std::uint64_t seed = 0;

  void validate() const;
};

// {"n": 20, "disorder": {"Jx": [0.5, 2], "Jy": 0, "h": 1},
//  "gamma": {"L1": 1, "L2": 0.6, "R1": 1, "R2": 0.3},
//  "realizations": 200, "seed": 1}
// Each disorder entry is a number or a [lo, hi] pair; n, realizations and seed are optional.
DisorderSpec parse_disorder_json(const std::string& text);
DisorderSpec load_disorder_file(const std::string& path);
std::string disorder_to_json(const DisorderSpec& spec);

// Realization `index` of a chain with n sites (spec.n when n == 0).
// Deterministic in (seed, n, index).
XYChainSpec sample_chain(const DisorderSpec& spec, std::size_t index, std::size_t n = 0);

struct RealizationResult {
  double gap = 0.0;
  bool gap_clamped = false;
  bool unresolved = false;             // some NESS modes were below numerical resolution
  double mean_current = 0.0;           // bond average of <Q_m>
  std::vector<double> energy_density;  // <H_m>
};

// Relative threshold handed to the Lyapunov solver for disordered chains.
inline constexpr double kUnresolvedTol = 1e-12;

RealizationResult run_realization(const DisorderSpec& spec, std::size_t n, std::size_t index,
                                  NessRoute route = NessRoute::kLyapunov);

struct SizeSummary {
  std::size_t n = 0;
  double mean_gap = 0.0, sem_gap = 0.0;
  double mean_current = 0.0, sem_current = 0.0;
  std::size_t clamped = 0;            // realizations whose gap hit the floor
  std::size_t unresolved = 0;         // realizations with fully mixed unresolved modes
  std::vector<double> scaled_x;       // (m-1)/(n-1)
  std::vector<double> mean_profile;   // averaged <H_m>
};

struct FitResult {
  double amplitude = 0.0;
  double rate = 0.0;  // exponential: y ~ a exp(-rate x); power law: y ~ a x^(-rate)
  double r2 = 0.0;
  std::size_t points = 0;
};

FitResult fit_exponential(std::span<const double> x, std::span<const double> y);
FitResult fit_power_law(std::span<const double> x, std::span<const double> y);

struct EnsembleOptions {
  NessRoute route = NessRoute::kLyapunov;
  std::size_t threads = 0;      // 0: worker_count()
  double fit_fraction = 0.5;    // fits use the largest fit_fraction of the n values
};

struct EnsembleSummary {
  std::vector<SizeSummary> sizes;
  FitResult gap_exponential;
  FitResult gap_power_law;
};

SizeSummary summarize_size(const DisorderSpec& spec, std::size_t n,
                           std::span<const RealizationResult> results);

EnsembleSummary ensemble_summary(const DisorderSpec& spec, std::span<const std::size_t> n_values,
                                 const EnsembleOptions& opts = {});

// Largest |d<H>/dx| between neighbouring profile points with x in [0.25, 0.75].
double mid_chain_max_slope(const SizeSummary& s);

std::string summary_csv(const EnsembleSummary& s);
std::string profile_csv(const EnsembleSummary& s);

}  // namespace thirdq
