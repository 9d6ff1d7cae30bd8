// Command-line front end over the thirdq C interface.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "thirdq/thirdq.h"

namespace {

using nlohmann::json;

struct CliFailure {
  int exit_code;
  std::string message;
};

constexpr int kExitValidation = 1;
constexpr int kExitNumerical = 2;
constexpr int kExitIo = 3;

int exit_for(thirdq_status s) {
  if (s == THIRDQ_ERR_IO) return kExitIo;
  if (thirdq_status_is_numerical(s) || s == THIRDQ_ERR_INTERNAL) return kExitNumerical;
  return kExitValidation;
}

void check(thirdq_status s) {
  if (s != THIRDQ_OK) throw CliFailure{exit_for(s), thirdq_last_error()};
}

[[noreturn]] void fail(int code, const std::string& msg) { throw CliFailure{code, msg}; }

template <class T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};
using ChainPtr = std::unique_ptr<thirdq_chain, Deleter<thirdq_chain, thirdq_chain_free>>;
using ModelPtr = std::unique_ptr<thirdq_model, Deleter<thirdq_model, thirdq_model_free>>;
using TransportPtr =
    std::unique_ptr<thirdq_transport, Deleter<thirdq_transport, thirdq_transport_free>>;
using DisorderPtr = std::unique_ptr<thirdq_disorder, Deleter<thirdq_disorder, thirdq_disorder_free>>;
using EnsemblePtr = std::unique_ptr<thirdq_ensemble, Deleter<thirdq_ensemble, thirdq_ensemble_free>>;

std::string num(double x) {
  if (x == 0.0) return "0";
  if (std::isnan(x)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::string take_string(char* s) {
  std::string out(s);
  thirdq_string_free(s);
  return out;
}

/// A table rendered as CSV or as a JSON array of row objects.
struct Table {
  std::vector<std::string> header;
  std::vector<bool> text;  // column holds labels rather than numbers
  std::vector<std::vector<std::string>> rows;

  std::string csv() const {
    std::string out;
    for (std::size_t i = 0; i < header.size(); ++i) out += (i ? "," : "") + header[i];
    out += "\n";
    for (const auto& r : rows) {
      for (std::size_t i = 0; i < r.size(); ++i) out += (i ? "," : "") + r[i];
      out += "\n";
    }
    return out;
  }

  json to_json() const {
    json arr = json::array();
    for (const auto& r : rows) {
      json obj = json::object();
      for (std::size_t i = 0; i < r.size(); ++i) {
        if (text[i] || r[i].empty()) {
          obj[header[i]] = r[i].empty() ? json(nullptr) : json(r[i]);
        } else {
          obj[header[i]] = json::parse(r[i] == "nan" ? "null" : r[i]);
        }
      }
      arr.push_back(obj);
    }
    return arr;
  }
};

struct Options {
  std::string model;
  std::string out;
  std::string format = "csv";
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::optional<std::size_t> n;
  std::string n_range;
  std::optional<std::size_t> trials;
  std::optional<double> tol;
  std::string route;  // empty: command default
  bool liouville = false;
  double fit_fraction = 0.5;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(kExitIo, "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(kExitIo, "cannot write " + path);
  out << content;
  if (!out) fail(kExitIo, "write failed for " + path);
}

std::string model_text(const Options& o) {
  if (o.model.empty()) fail(kExitValidation, "--model is required for this command");
  if (o.model.front() == '{') return o.model;
  return read_file(o.model);
}

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    fail(kExitValidation, std::string("model is not valid JSON: ") + e.what());
  }
}

bool uniform(const json& v) {
  if (!v.is_array()) return true;
  for (const auto& e : v) {
    if (e != v.front()) return false;
  }
  return true;
}

// Chain JSON with n replaced; only homogeneous entries can be resized.
std::string chain_json_with_n(const std::string& text, std::size_t n) {
  json doc = parse_json(text);
  for (const char* key : {"Jx", "Jy", "h"}) {
    if (!doc.contains(key)) continue;
    json& v = doc[key];
    if (!uniform(v)) fail(kExitValidation, std::string("cannot resize inhomogeneous '") + key + "'");
    if (v.is_array()) {
      if (v.empty()) fail(kExitValidation, std::string("'") + key + "' is empty");
      v = json(v.front());
    }
  }
  doc["n"] = n;
  return doc.dump();
}

ChainPtr load_chain(const std::string& text) {
  thirdq_chain* c = nullptr;
  check(thirdq_chain_from_json(text.c_str(), &c));
  return ChainPtr(c);
}

std::vector<std::size_t> parse_range(const std::string& spec) {
  std::vector<std::size_t> out;
  std::vector<long long> parts;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ':')) {
    try {
      std::size_t pos = 0;
      parts.push_back(std::stoll(item, &pos));
      if (pos != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      fail(kExitValidation, "--n-range must look like a:b:step, got '" + spec + "'");
    }
  }
  if (parts.size() == 2) parts.push_back(1);
  if (parts.size() != 3 || parts[0] < 1 || parts[1] < parts[0] || parts[2] < 1) {
    fail(kExitValidation, "--n-range must look like a:b:step with 1 <= a <= b, step >= 1");
  }
  for (long long v = parts[0]; v <= parts[1]; v += parts[2]) out.push_back(static_cast<std::size_t>(v));
  return out;
}

// Homogeneous transverse Ising parameters, if the chain is one.
std::optional<thirdq_ising_params> ising_params(const json& chain) {
  auto scalar = [&](const char* key) -> std::optional<double> {
    if (!chain.contains(key)) return std::nullopt;
    const json& v = chain[key];
    if (!uniform(v)) return std::nullopt;
    const json& x = v.is_array() ? v.front() : v;
    return x.is_number() ? std::optional<double>(x.get<double>()) : std::nullopt;
  };
  const auto jx = scalar("Jx");
  const auto h = scalar("h");
  const double jy = chain.contains("Jy") ? scalar("Jy").value_or(1.0) : 0.0;
  if (!jx || !h || jy != 0.0 || *jx == 0.0 || *h == 0.0) return std::nullopt;
  const json& g = chain["gamma"];
  thirdq_ising_params p{};
  check(thirdq_ising_from_rates(*jx, *h, g.value("L1", 0.0), g.value("L2", 0.0), g.value("R1", 0.0),
                                g.value("R2", 0.0), &p));
  return p;
}

thirdq_route route_of(const Options& o, thirdq_route fallback = THIRDQ_ROUTE_NORMAL_MODES) {
  if (o.route.empty()) return fallback;
  if (o.route == "normal") return THIRDQ_ROUTE_NORMAL_MODES;
  if (o.route == "lyapunov") return THIRDQ_ROUTE_LYAPUNOV;
  fail(kExitValidation, "--route must be 'normal' or 'lyapunov'");
}

std::vector<thirdq_complex> rapidities_of(const std::string& chain_text) {
  ChainPtr chain = load_chain(chain_text);
  thirdq_model* raw = nullptr;
  check(thirdq_model_from_chain(chain.get(), &raw));
  ModelPtr model(raw);
  std::vector<thirdq_complex> r(2 * thirdq_chain_sites(chain.get()));
  check(thirdq_model_rapidities(model.get(), r.data(), r.size()));
  return r;
}

struct Result {
  Table table;
  json summary = json::object();
  std::vector<std::pair<std::string, Table>> extra;  // (suffix, table)
  json model = nullptr;
  json tolerances = json::object();
};

Result cmd_spectrum(const Options& o) {
  std::string text = model_text(o);
  if (o.n) text = chain_json_with_n(text, *o.n);
  Result res;
  res.model = parse_json(text);
  const auto rap = rapidities_of(text);
  res.table.header = {"kind", "index", "re", "im"};
  res.table.text = {true, false, false, false};
  for (std::size_t j = 0; j < rap.size(); ++j) {
    res.table.rows.push_back({"rapidity", std::to_string(j + 1), num(rap[j].re), num(rap[j].im)});
  }
  if (auto p = ising_params(res.model)) {
    for (auto [side, label] : {std::pair{THIRDQ_LEFT, "evanescent_left"},
                               std::pair{THIRDQ_RIGHT, "evanescent_right"}}) {
      thirdq_complex roots[4];
      std::size_t count = 0;
      check(thirdq_ising_evanescent(&*p, side, roots, &count));
      for (std::size_t k = 0; k < count; ++k) {
        res.table.rows.push_back({label, std::to_string(k + 1), num(roots[k].re), num(roots[k].im)});
      }
    }
  }
  thirdq_spectrum_summary s{};
  check(thirdq_rapidities_classify(rap.data(), rap.size(), 0.0, o.tol.value_or(0.0), &s));
  res.summary = {{"gap", s.gap}, {"unique_ness", s.unique_ness != 0},
                 {"zero_rapidities", s.zero_rapidities}, {"converges", s.converges != 0}};
  if (o.liouville) {
    std::vector<thirdq_complex> lam(std::size_t{1} << rap.size());
    check(thirdq_liouville_full(rap.data(), rap.size(), 0, lam.data(), lam.size()));
    Table t;
    t.header = {"index", "re", "im"};
    t.text = {false, false, false};
    for (std::size_t i = 0; i < lam.size(); ++i) {
      t.rows.push_back({std::to_string(i), num(lam[i].re), num(lam[i].im)});
    }
    res.extra.emplace_back("liouville", std::move(t));
  }
  return res;
}

Result cmd_gap_scan(const Options& o) {
  const std::string text = model_text(o);
  if (o.n_range.empty()) fail(kExitValidation, "gap-scan needs --n-range a:b:step");
  const auto ns = parse_range(o.n_range);
  Result res;
  res.model = parse_json(text);
  const auto p = ising_params(res.model);
  double asym = NAN;
  if (p) check(thirdq_ising_gap_asymptotic(&*p, 0, &asym));
  res.table.header = {"n", "gap", "gap_times_n3", "asymptote"};
  res.table.text = {false, false, false, false};
  for (std::size_t n : ns) {
    const auto rap = rapidities_of(chain_json_with_n(text, n));
    thirdq_spectrum_summary s{};
    check(thirdq_rapidities_classify(rap.data(), rap.size(), 0.0, 0.0, &s));
    const double n3 = std::pow(static_cast<double>(n), 3);
    res.table.rows.push_back({std::to_string(n), num(s.gap), num(s.gap * n3), p ? num(asym) : ""});
  }
  if (p) res.summary["asymptote"] = asym;
  return res;
}

TransportPtr transport(const std::string& text, thirdq_route route) {
  ChainPtr chain = load_chain(text);
  thirdq_transport* t = nullptr;
  check(thirdq_transport_compute(chain.get(), route, &t));
  return TransportPtr(t);
}

std::vector<double> series(const thirdq_transport* t, thirdq_series s) {
  std::vector<double> v(thirdq_transport_length(t, s));
  if (!v.empty()) check(thirdq_transport_get(t, s, v.data(), v.size()));
  return v;
}

Result cmd_ness(const Options& o) {
  const std::string text = model_text(o);
  std::vector<std::size_t> ns;
  if (!o.n_range.empty()) {
    ns = parse_range(o.n_range);
  } else if (o.n) {
    ns = {*o.n};
  }
  Result res;
  res.model = parse_json(text);
  res.table.header = {"n", "gap", "mean_energy_current", "energy_current_spread",
                      "mean_spin_current", "total_energy"};
  res.table.text = {false, false, false, false, false, false};
  const auto route = route_of(o);
  auto row = [&](const std::string& chain_text) {
    TransportPtr t = transport(chain_text, route);
    thirdq_transport_scalars sc{};
    check(thirdq_transport_scalars_get(t.get(), &sc));
    const auto q = series(t.get(), THIRDQ_ENERGY_CURRENT);
    double mean = 0.0, lo = INFINITY, hi = -INFINITY;
    for (double x : q) {
      mean += x;
      lo = std::min(lo, x);
      hi = std::max(hi, x);
    }
    if (!q.empty()) mean /= static_cast<double>(q.size());
    const double spread = q.empty() ? 0.0 : hi - lo;
    ChainPtr chain = load_chain(chain_text);
    res.table.rows.push_back({std::to_string(thirdq_chain_sites(chain.get())), num(sc.gap),
                              num(mean), num(spread), num(sc.mean_spin_current),
                              num(sc.total_energy)});
  };
  if (ns.empty()) {
    row(text);
  } else {
    for (std::size_t n : ns) row(chain_json_with_n(text, n));
  }
  return res;
}

Result cmd_profile(const Options& o) {
  std::string text = model_text(o);
  if (o.n) text = chain_json_with_n(text, *o.n);
  Result res;
  res.model = parse_json(text);
  TransportPtr t = transport(text, route_of(o));
  const auto hd = series(t.get(), THIRDQ_ENERGY_DENSITY);
  const auto q = series(t.get(), THIRDQ_ENERGY_CURRENT);
  const auto sz = series(t.get(), THIRDQ_SPIN_DENSITY);
  const auto sc = series(t.get(), THIRDQ_SPIN_CURRENT);
  res.table.header = {"m", "energy_density", "energy_current", "spin_density", "spin_current"};
  res.table.text = {false, false, false, false, false};
  auto at = [](const std::vector<double>& v, std::size_t i) { return i < v.size() ? num(v[i]) : ""; };
  for (std::size_t i = 0; i < sz.size(); ++i) {
    res.table.rows.push_back({std::to_string(i + 1), at(hd, i), at(q, i), at(sz, i), at(sc, i)});
  }
  double bulk = 0.0;
  check(thirdq_profile_bulk(hd.data(), hd.size(), &bulk));
  res.summary["energy_density_bulk"] = bulk;
  if (hd.size() >= 10) {
    double slope = 0.0;
    check(thirdq_profile_edge_slope(hd.data(), hd.size(), 2, 10, &slope));
    res.summary["edge_log_slope_2_10"] = slope;
  }
  if (auto p = ising_params(res.model)) {
    thirdq_complex roots[4];
    std::size_t count = 0;
    check(thirdq_ising_evanescent(&*p, THIRDQ_LEFT, roots, &count));
    if (count > 0) {
      thirdq_complex xi{};
      check(thirdq_ising_dispersion(&*p, roots[0], &xi, nullptr, nullptr));
      res.summary["predicted_edge_slope"] = 4.0 * std::log(std::hypot(xi.re, xi.im));
    }
  }
  return res;
}

Result cmd_analytics(const Options& o) {
  const std::string text = model_text(o);
  Result res;
  res.model = parse_json(text);
  const auto p = ising_params(res.model);
  if (!p) fail(kExitValidation, "analytics needs a homogeneous transverse Ising chain (Jy = 0)");
  res.table.header = {"quantity", "side", "index", "re", "im"};
  res.table.text = {true, true, false, false, false};
  for (auto [side, label] : {std::pair{THIRDQ_LEFT, "L"}, std::pair{THIRDQ_RIGHT, "R"}}) {
    thirdq_complex roots[4];
    std::size_t count = 0;
    check(thirdq_ising_evanescent(&*p, side, roots, &count));
    for (std::size_t k = 0; k < count; ++k) {
      thirdq_complex xi{};
      check(thirdq_ising_dispersion(&*p, roots[k], &xi, nullptr, nullptr));
      const std::string idx = std::to_string(k + 1);
      res.table.rows.push_back({"evanescent_rapidity", label, idx, num(roots[k].re), num(roots[k].im)});
      res.table.rows.push_back({"xi_minus", label, idx, num(xi.re), num(xi.im)});
    }
  }
  double corrected = 0.0, printed = 0.0;
  check(thirdq_ising_gap_asymptotic(&*p, 0, &corrected));
  check(thirdq_ising_gap_asymptotic(&*p, 1, &printed));
  res.table.rows.push_back({"gap_asymptote", "", "", num(corrected), "0"});
  res.table.rows.push_back({"gap_asymptote_mixed_common_weight", "", "", num(printed), "0"});
  res.summary["gap_asymptote"] = corrected;
  return res;
}

Result cmd_oracle_check(const Options& o) {
  const std::size_t n = o.n.value_or(2);
  const std::size_t trials = o.trials.value_or(20);
  const double tol = o.tol.value_or(1e-8);
  Result res;
  res.table.header = {"n", "index", "covariance_dev", "spectrum_dev", "wick_dev", "trace_defect"};
  res.table.text = {false, false, false, false, false, false};
  double worst_cov = 0.0, worst_spec = 0.0, worst_wick = 0.0;
  for (std::size_t i = 0; i < trials; ++i) {
    thirdq_oracle_trial t{};
    check(thirdq_oracle_trial_run(n, o.seed, i, &t));
    worst_cov = std::max(worst_cov, t.covariance_dev);
    worst_spec = std::max(worst_spec, t.spectrum_dev);
    worst_wick = std::max(worst_wick, t.wick_dev);
    res.table.rows.push_back({std::to_string(n), std::to_string(i), num(t.covariance_dev),
                              num(t.spectrum_dev), num(t.wick_dev), num(t.trace_defect)});
  }
  res.tolerances = {{"covariance", tol}, {"spectrum", 10.0 * tol}, {"wick", tol}};
  const bool ok = worst_cov <= tol && worst_spec <= 10.0 * tol && worst_wick <= tol;
  res.summary = {{"max_covariance_dev", worst_cov}, {"max_spectrum_dev", worst_spec},
                 {"max_wick_dev", worst_wick}, {"passed", ok}};
  return res;
}

Result cmd_disorder_scan(const Options& o) {
  const std::string text = model_text(o);
  if (o.n_range.empty() && !o.n) fail(kExitValidation, "disorder-scan needs --n-range or --n");
  const auto ns = o.n_range.empty() ? std::vector<std::size_t>{*o.n} : parse_range(o.n_range);
  thirdq_disorder* raw = nullptr;
  check(thirdq_disorder_from_json(text.c_str(), &raw));
  DisorderPtr d(raw);
  if (o.seed_set) check(thirdq_disorder_set_seed(d.get(), o.seed));
  if (o.trials) check(thirdq_disorder_set_realizations(d.get(), *o.trials));
  thirdq_ensemble* eraw = nullptr;
  const thirdq_route route = route_of(o, THIRDQ_ROUTE_LYAPUNOV);
  check(thirdq_ensemble_run(d.get(), ns.data(), ns.size(), route, 0, o.fit_fraction, &eraw));
  EnsemblePtr e(eraw);

  Result res;
  res.model = parse_json(take_string([&] {
    char* s = nullptr;
    check(thirdq_disorder_to_json(d.get(), &s));
    return s;
  }()));
  res.table.header = {"n", "mean_gap", "sem_gap", "mean_current", "sem_current"};
  res.table.text = {false, false, false, false, false};
  Table prof;
  prof.header = {"scaled_x", "mean_energy_density", "n"};
  prof.text = {false, false, false};
  json clamped = json::object();
  json unresolved = json::object();
  for (std::size_t k = 0; k < thirdq_ensemble_sizes(e.get()); ++k) {
    thirdq_size_stats s{};
    check(thirdq_ensemble_size_stats(e.get(), k, &s));
    res.table.rows.push_back({std::to_string(s.n), num(s.mean_gap), num(s.sem_gap),
                              num(s.mean_current), num(s.sem_current)});
    if (s.clamped > 0) clamped[std::to_string(s.n)] = s.clamped;
    if (s.unresolved > 0) unresolved[std::to_string(s.n)] = s.unresolved;
    std::vector<double> x(s.n - 1), y(s.n - 1);
    check(thirdq_ensemble_profile(e.get(), k, x.data(), y.data(), x.size()));
    for (std::size_t i = 0; i < x.size(); ++i) {
      prof.rows.push_back({num(x[i]), num(y[i]), std::to_string(s.n)});
    }
  }
  res.extra.emplace_back("profile", std::move(prof));
  if (ns.size() >= 4) {
    thirdq_fit ef{}, pf{};
    check(thirdq_ensemble_fits(e.get(), &ef, &pf));
    res.summary["gap_exponential_fit"] = {{"amplitude", ef.amplitude}, {"inverse_length", ef.rate},
                                          {"r2", ef.r2}, {"points", ef.points}};
    res.summary["gap_power_law_fit"] = {{"amplitude", pf.amplitude}, {"exponent", pf.rate},
                                        {"r2", pf.r2}, {"points", pf.points}};
  }
  res.summary["clamped_gaps"] = clamped;
  res.summary["unresolved_realizations"] = unresolved;
  return res;
}

std::string extra_path(const std::string& out, const std::string& suffix, const std::string& ext) {
  const auto slash = out.find_last_of('/');
  const auto dot = out.find_last_of('.');
  const std::string stem = (dot != std::string::npos && (slash == std::string::npos || dot > slash))
                               ? out.substr(0, dot)
                               : out;
  return stem + "_" + suffix + "." + ext;
}

void emit(const std::string& command, const Options& o, const Result& res) {
  const bool as_json = o.format == "json";
  const std::string ext = as_json ? "json" : "csv";
  auto render = [&](const Table& t) { return as_json ? t.to_json().dump(2) + "\n" : t.csv(); };

  std::vector<std::string> outputs;
  if (o.out.empty()) {
    std::cout << render(res.table);
    for (const auto& [suffix, t] : res.extra) std::cout << "\n# " << suffix << "\n" << render(t);
  } else {
    write_file(o.out, render(res.table));
    outputs.push_back(o.out);
    for (const auto& [suffix, t] : res.extra) {
      const std::string path = extra_path(o.out, suffix, ext);
      write_file(path, render(t));
      outputs.push_back(path);
    }
    json manifest;
    manifest["command"] = command;
    manifest["version"] = thirdq_version();
    manifest["model"] = res.model;
    manifest["options"] = {{"format", o.format}, {"seed", o.seed}, {"route", o.route.empty() ? std::string("default") : o.route}};
    if (o.n) manifest["options"]["n"] = *o.n;
    if (!o.n_range.empty()) manifest["options"]["n_range"] = o.n_range;
    if (o.trials) manifest["options"]["trials"] = *o.trials;
    if (o.tol) manifest["options"]["tol"] = *o.tol;
    manifest["tolerances"] = res.tolerances;
    manifest["summary"] = res.summary;
    manifest["outputs"] = outputs;
    write_file(o.out + ".manifest.json", manifest.dump(2) + "\n");
  }
  std::cerr << command << ": " << res.summary.dump() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact NESS, spectra and transport of quadratic open fermion chains"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--model", o.model, "model JSON file or inline JSON object");
    sub->add_option("--out", o.out, "output file (stdout if omitted)");
    sub->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--seed", o.seed, "random seed")->each([&](const std::string&) { o.seed_set = true; });
    sub->add_option("--n", o.n, "chain length (or oracle size)");
    sub->add_option("--n-range", o.n_range, "chain lengths a:b:step (inclusive)");
    sub->add_option("--trials", o.trials, "trials or disorder realizations");
    sub->add_option("--tol", o.tol, "tolerance");
  };

  struct Entry {
    const char* name;
    const char* help;
    Result (*run)(const Options&);
  };
  const Entry entries[] = {
      {"spectrum", "rapidities and evanescent roots", cmd_spectrum},
      {"gap-scan", "spectral gap against chain length", cmd_gap_scan},
      {"ness", "steady-state currents", cmd_ness},
      {"profile", "steady-state density and current profiles", cmd_profile},
      {"disorder-scan", "disorder-averaged gap, current and profiles", cmd_disorder_scan},
      {"analytics", "closed-form transverse Ising results", cmd_analytics},
      {"oracle-check", "normal modes against the dense Liouvillean", cmd_oracle_check},
  };
  std::vector<std::pair<CLI::App*, const Entry*>> subs;
  for (const auto& e : entries) {
    CLI::App* sub = app.add_subcommand(e.name, e.help);
    add_common(sub);
    if (std::string(e.name) != "analytics" && std::string(e.name) != "oracle-check") {
      sub->add_option("--route", o.route, "normal or lyapunov")
          ->check(CLI::IsMember({"normal", "lyapunov"}));
    }
    if (std::string(e.name) == "spectrum") {
      sub->add_flag("--liouville", o.liouville, "also write the full Liouvillean spectrum");
    }
    if (std::string(e.name) == "disorder-scan") {
      sub->add_option("--fit-fraction", o.fit_fraction, "share of largest n used for fits");
    }
    subs.emplace_back(sub, &e);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitValidation;
  }

  for (const auto& [sub, entry] : subs) {
    if (!sub->parsed()) continue;
    try {
      const Result res = entry->run(o);
      emit(entry->name, o, res);
      if (res.summary.contains("passed") && !res.summary["passed"].get<bool>()) {
        std::cerr << entry->name << ": tolerance violated\n";
        return kExitNumerical;
      }
      return 0;
    } catch (const CliFailure& f) {
      std::cerr << entry->name << ": " << f.message << "\n";
      return f.exit_code;
    }
  }
  return kExitValidation;
}
