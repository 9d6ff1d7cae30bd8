#include "thirdq/disorder.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "thirdq/error.hpp"
#include "thirdq/format.hpp"
#include "thirdq/parallel.hpp"
#include "thirdq/rng.hpp"

namespace thirdq {

namespace {

using nlohmann::json;

Interval read_interval(const json& doc, const char* key, bool optional) {
  if (!doc.contains(key)) {
    if (optional) return {};
    throw Error(ErrorCode::kParse, std::string("disorder spec is missing '") + key + "'");
  }
  const json& v = doc.at(key);
  if (v.is_number()) return {v.get<double>(), v.get<double>()};
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
    return {v[0].get<double>(), v[1].get<double>()};
  }
  throw Error(ErrorCode::kParse, std::string("'") + key + "' must be a number or [lo, hi]");
}

void check_interval(const Interval& i, const char* name) {
  if (!std::isfinite(i.lo) || !std::isfinite(i.hi) || i.lo > i.hi) {
    throw Error(ErrorCode::kInvalidArgument, std::string(name) + " interval must satisfy lo <= hi");
  }
}

std::uint64_t size_key(std::uint64_t seed, std::size_t n) {
  return splitmix64(seed ^ splitmix64(0xD1B54A32D192ED03ULL * (static_cast<std::uint64_t>(n) + 1)));
}

double mean(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

double sem(std::span<const double> v, double mu) {
  if (v.size() < 2) return 0.0;
  double s = 0.0;
  for (double x : v) s += (x - mu) * (x - mu);
  return std::sqrt(s / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()));
}

FitResult linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
  FitResult f;
  f.points = x.size();
  if (x.size() < 2) {
    throw Error(ErrorCode::kInvalidArgument, "a fit needs at least two points");
  }
  const double mx = mean(x), my = mean(y);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) throw Error(ErrorCode::kInvalidArgument, "fit abscissae are all equal");
  const double slope = sxy / sxx;
  f.rate = -slope;
  f.amplitude = std::exp(my - slope * mx);
  f.r2 = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  return f;
}

void require_positive(std::span<const double> y) {
  for (double v : y) {
    if (!(v > 0.0)) throw Error(ErrorCode::kInvalidArgument, "logarithmic fit needs positive data");
  }
}

}  // namespace

void DisorderSpec::validate() const {
  check_interval(Jx, "Jx");
  check_interval(Jy, "Jy");
  check_interval(h, "h");
  for (double g : {gammaL1, gammaL2, gammaR1, gammaR2}) {
    if (!std::isfinite(g) || g < 0.0) {
      throw Error(ErrorCode::kInvalidArgument, "bath rates must be finite and nonnegative");
    }
  }
  if (realizations < 1) throw Error(ErrorCode::kInvalidArgument, "realizations must be >= 1");
}

DisorderSpec parse_disorder_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kParse, std::string("disorder spec is not valid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("disorder") || !doc.at("disorder").is_object()) {
    throw Error(ErrorCode::kParse, "disorder spec needs a 'disorder' object");
  }
  DisorderSpec s;
  const json& d = doc.at("disorder");
  s.Jx = read_interval(d, "Jx", false);
  s.Jy = read_interval(d, "Jy", true);
  s.h = read_interval(d, "h", false);
  if (!doc.contains("gamma") || !doc.at("gamma").is_object()) {
    throw Error(ErrorCode::kParse, "disorder spec is missing the 'gamma' object");
  }
  const json& g = doc.at("gamma");
  auto rate = [&](const char* key) {
    if (!g.contains(key) || !g.at(key).is_number()) {
      throw Error(ErrorCode::kParse, std::string("gamma.") + key + " must be a number");
    }
    return g.at(key).get<double>();
  };
  s.gammaL1 = rate("L1");
  s.gammaL2 = rate("L2");
  s.gammaR1 = rate("R1");
  s.gammaR2 = rate("R2");
  if (doc.contains("n")) {
    if (!doc.at("n").is_number_integer() || doc.at("n").get<long long>() < 2) {
      throw Error(ErrorCode::kInvalidArgument, "'n' must be an integer >= 2");
    }
    s.n = doc.at("n").get<std::size_t>();
  }
  if (doc.contains("realizations")) {
    if (!doc.at("realizations").is_number_integer() || doc.at("realizations").get<long long>() < 1) {
      throw Error(ErrorCode::kInvalidArgument, "'realizations' must be a positive integer");
    }
    s.realizations = doc.at("realizations").get<std::size_t>();
  }
  if (doc.contains("seed")) {
    if (!doc.at("seed").is_number_unsigned()) {
      throw Error(ErrorCode::kInvalidArgument, "'seed' must be a nonnegative integer");
    }
    s.seed = doc.at("seed").get<std::uint64_t>();
  }
  s.validate();
  return s;
}

DisorderSpec load_disorder_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open model file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_disorder_json(ss.str());
}

std::string disorder_to_json(const DisorderSpec& spec) {
  json doc;
  doc["n"] = spec.n;
  doc["disorder"] = {{"Jx", {spec.Jx.lo, spec.Jx.hi}},
                     {"Jy", {spec.Jy.lo, spec.Jy.hi}},
                     {"h", {spec.h.lo, spec.h.hi}}};
  doc["gamma"] = {{"L1", spec.gammaL1}, {"L2", spec.gammaL2}, {"R1", spec.gammaR1},
                  {"R2", spec.gammaR2}};
  doc["realizations"] = spec.realizations;
  doc["seed"] = spec.seed;
  return doc.dump();
}

XYChainSpec sample_chain(const DisorderSpec& spec, std::size_t index, std::size_t n) {
  spec.validate();
  if (n == 0) n = spec.n;
  if (n < 2) throw Error(ErrorCode::kInvalidArgument, "chain needs at least two sites");
  Stream rng(size_key(spec.seed, n), index);
  XYChainSpec c;
  c.n = n;
  for (std::size_t m = 0; m + 1 < n; ++m) c.Jx.push_back(rng.uniform(spec.Jx.lo, spec.Jx.hi));
  for (std::size_t m = 0; m + 1 < n; ++m) c.Jy.push_back(rng.uniform(spec.Jy.lo, spec.Jy.hi));
  for (std::size_t m = 0; m < n; ++m) c.h.push_back(rng.uniform(spec.h.lo, spec.h.hi));
  c.gammaL1 = spec.gammaL1;
  c.gammaL2 = spec.gammaL2;
  c.gammaR1 = spec.gammaR1;
  c.gammaR2 = spec.gammaR2;
  c.validate();
  return c;
}

RealizationResult run_realization(const DisorderSpec& spec, std::size_t n, std::size_t index,
                                  NessRoute route) {
  const XYChainSpec chain = sample_chain(spec, index, n);
  const TransportReport rep = transport_report(chain, route, kUnresolvedTol);
  RealizationResult r;
  r.gap = rep.gap;
  r.gap_clamped = rep.gap_clamped;
  r.unresolved = rep.unresolved_pairs > 0;
  r.mean_current = rep.energy_current.empty() ? 0.0 : mean(rep.energy_current);
  r.energy_density = rep.energy_density;
  return r;
}

SizeSummary summarize_size(const DisorderSpec& spec, std::size_t n,
                           std::span<const RealizationResult> results) {
  (void)spec;
  SizeSummary s;
  s.n = n;
  std::vector<double> gaps, currents;
  for (const auto& r : results) {
    gaps.push_back(r.gap);
    currents.push_back(r.mean_current);
    if (r.gap_clamped) ++s.clamped;
    if (r.unresolved) ++s.unresolved;
  }
  s.mean_gap = mean(gaps);
  s.sem_gap = sem(gaps, s.mean_gap);
  s.mean_current = mean(currents);
  s.sem_current = sem(currents, s.mean_current);
  const std::size_t bonds = n - 1;
  s.mean_profile.assign(bonds, 0.0);
  for (const auto& r : results) {
    for (std::size_t m = 0; m < bonds; ++m) s.mean_profile[m] += r.energy_density[m];
  }
  for (std::size_t m = 0; m < bonds; ++m) {
    s.mean_profile[m] /= static_cast<double>(results.size());
    s.scaled_x.push_back(static_cast<double>(m) / static_cast<double>(n - 1));
  }
  return s;
}

FitResult fit_exponential(std::span<const double> x, std::span<const double> y) {
  require_positive(y);
  std::vector<double> lx(x.begin(), x.end()), ly;
  for (double v : y) ly.push_back(std::log(v));
  return linear_fit(lx, ly);
}

FitResult fit_power_law(std::span<const double> x, std::span<const double> y) {
  require_positive(x);
  require_positive(y);
  std::vector<double> lx, ly;
  for (double v : x) lx.push_back(std::log(v));
  for (double v : y) ly.push_back(std::log(v));
  return linear_fit(lx, ly);
}

EnsembleSummary ensemble_summary(const DisorderSpec& spec, std::span<const std::size_t> n_values,
                                 const EnsembleOptions& opts) {
  spec.validate();
  if (n_values.empty()) throw Error(ErrorCode::kInvalidArgument, "no chain lengths given");
  if (!(opts.fit_fraction > 0.0 && opts.fit_fraction <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "fit fraction must lie in (0, 1]");
  }
  const std::size_t threads = opts.threads == 0 ? worker_count() : opts.threads;
  const std::size_t reps = spec.realizations;

  // One flat task list so that all sizes share the worker pool.
  std::vector<RealizationResult> results(n_values.size() * reps);
  parallel_for(results.size(), threads, [&](std::size_t task) {
    const std::size_t k = task / reps;
    results[task] = run_realization(spec, n_values[k], task % reps, opts.route);
  });

  EnsembleSummary out;
  for (std::size_t k = 0; k < n_values.size(); ++k) {
    std::span<const RealizationResult> slice(results.data() + k * reps, reps);
    out.sizes.push_back(summarize_size(spec, n_values[k], slice));
  }

  const std::size_t total = out.sizes.size();
  const auto keep = static_cast<std::size_t>(std::ceil(opts.fit_fraction * static_cast<double>(total)));
  if (keep >= 2) {
    std::vector<double> xs, ys;
    std::vector<std::size_t> order(total);
    for (std::size_t i = 0; i < total; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return out.sizes[a].n < out.sizes[b].n; });
    for (std::size_t i = total - keep; i < total; ++i) {
      xs.push_back(static_cast<double>(out.sizes[order[i]].n));
      ys.push_back(out.sizes[order[i]].mean_gap);
    }
    out.gap_exponential = fit_exponential(xs, ys);
    out.gap_power_law = fit_power_law(xs, ys);
  }
  return out;
}

double mid_chain_max_slope(const SizeSummary& s) {
  double best = 0.0;
  for (std::size_t i = 0; i + 1 < s.scaled_x.size(); ++i) {
    const double x0 = s.scaled_x[i], x1 = s.scaled_x[i + 1];
    if (x0 < 0.25 || x1 > 0.75) continue;
    best = std::max(best, std::abs((s.mean_profile[i + 1] - s.mean_profile[i]) / (x1 - x0)));
  }
  return best;
}

std::string summary_csv(const EnsembleSummary& s) {
  std::string out = "n,mean_gap,sem_gap,mean_current,sem_current\n";
  for (const auto& z : s.sizes) {
    out += std::to_string(z.n) + "," + fmt_num(z.mean_gap) + "," + fmt_num(z.sem_gap) + "," +
           fmt_num(z.mean_current) + "," + fmt_num(z.sem_current) + "\n";
  }
  return out;
}

std::string profile_csv(const EnsembleSummary& s) {
  std::string out = "scaled_x,mean_energy_density,n\n";
  for (const auto& z : s.sizes) {
    for (std::size_t i = 0; i < z.scaled_x.size(); ++i) {
      out += fmt_num(z.scaled_x[i]) + "," + fmt_num(z.mean_profile[i]) + "," + std::to_string(z.n) + "\n";
    }
  }
  return out;
}

}  // namespace thirdq
