#include "thirdq/xy_chain.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "thirdq/error.hpp"

namespace thirdq {

namespace {

using nlohmann::json;

void require(bool ok, const std::string& msg) {
  if (!ok) throw Error(ErrorCode::kInvalidArgument, msg);
}

std::vector<double> broadcast(const json& doc, const char* key, std::size_t len, bool optional) {
  if (!doc.contains(key)) {
    if (optional) return std::vector<double>(len, 0.0);
    throw Error(ErrorCode::kParse, std::string("chain spec is missing '") + key + "'");
  }
  const json& v = doc.at(key);
  if (v.is_number()) return std::vector<double>(len, v.get<double>());
  if (!v.is_array()) {
    throw Error(ErrorCode::kParse, std::string("'") + key + "' must be a number or an array");
  }
  std::vector<double> out;
  for (const auto& e : v) {
    if (!e.is_number()) throw Error(ErrorCode::kParse, std::string("non-numeric entry in '") + key + "'");
    out.push_back(e.get<double>());
  }
  if (out.size() != len) {
    throw Error(ErrorCode::kInvalidArgument, std::string("'") + key + "' has " +
                                                 std::to_string(out.size()) + " entries, expected " +
                                                 std::to_string(len));
  }
  return out;
}

// Adds c w_a w_b with one-based Majorana labels.
void put(CMatrix& q, std::size_t a, std::size_t b, Complex c) {
  q(static_cast<Eigen::Index>(a - 1), static_cast<Eigen::Index>(b - 1)) += c;
}

double real_part(Complex z, double& residue) {
  residue = std::max(residue, std::abs(z.imag()));
  return z.real();
}

}  // namespace

void XYChainSpec::validate() const {
  require(n >= 2, "chain needs at least two sites");
  require(Jx.size() == n - 1, "Jx must have n-1 entries");
  require(Jy.size() == n - 1, "Jy must have n-1 entries");
  require(h.size() == n, "h must have n entries");
  auto finite = [](const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
  };
  require(finite(Jx) && finite(Jy) && finite(h), "couplings and fields must be finite");
  for (double g : {gammaL1, gammaL2, gammaR1, gammaR2}) {
    require(std::isfinite(g) && g >= 0.0, "bath rates must be finite and nonnegative");
  }
}

bool XYChainSpec::isotropic(double tol) const {
  for (std::size_t m = 0; m < Jx.size(); ++m) {
    if (std::abs(Jx[m] - Jy[m]) > tol) return false;
  }
  return true;
}

XYChainSpec homogeneous_chain(std::size_t n, double jx, double jy, double h, double gl1,
                              double gl2, double gr1, double gr2) {
  XYChainSpec s;
  s.n = n;
  s.Jx.assign(n > 0 ? n - 1 : 0, jx);
  s.Jy.assign(n > 0 ? n - 1 : 0, jy);
  s.h.assign(n, h);
  s.gammaL1 = gl1;
  s.gammaL2 = gl2;
  s.gammaR1 = gr1;
  s.gammaR2 = gr2;
  s.validate();
  return s;
}

XYChainSpec parse_chain_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kParse, std::string("chain spec is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw Error(ErrorCode::kParse, "chain spec must be a JSON object");
  if (!doc.contains("n") || !doc.at("n").is_number_integer() || doc.at("n").get<long long>() < 2) {
    throw Error(ErrorCode::kInvalidArgument, "'n' must be an integer >= 2");
  }
  XYChainSpec s;
  s.n = doc.at("n").get<std::size_t>();
  s.Jx = broadcast(doc, "Jx", s.n - 1, false);
  s.Jy = broadcast(doc, "Jy", s.n - 1, true);
  s.h = broadcast(doc, "h", s.n, false);
  if (!doc.contains("gamma") || !doc.at("gamma").is_object()) {
    throw Error(ErrorCode::kParse, "chain spec is missing the 'gamma' object");
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
  s.validate();
  return s;
}

XYChainSpec load_chain_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open model file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_chain_json(ss.str());
}

std::string chain_to_json(const XYChainSpec& spec) {
  json doc;
  doc["n"] = spec.n;
  doc["Jx"] = spec.Jx;
  doc["Jy"] = spec.Jy;
  doc["h"] = spec.h;
  doc["gamma"] = {{"L1", spec.gammaL1}, {"L2", spec.gammaL2}, {"R1", spec.gammaR1},
                  {"R2", spec.gammaR2}};
  return doc.dump();
}

ChainModel build_chain(const XYChainSpec& spec) {
  spec.validate();
  const std::size_t n = spec.n;
  ChainModel model{QuadraticHamiltonian(n), BathSpec(n)};
  auto& h = model.hamiltonian;
  // add_term takes zero-based labels: Majorana w_k sits at k-1.
  for (std::size_t m = 1; m < n; ++m) {
    h.add_term(2 * m - 1, 2 * m, -kI * spec.Jx[m - 1]);       // w_{2m} w_{2m+1}
    h.add_term(2 * m - 2, 2 * m + 1, kI * spec.Jy[m - 1]);    // w_{2m-1} w_{2m+2}
  }
  for (std::size_t m = 1; m <= n; ++m) {
    h.add_term(2 * m - 2, 2 * m - 1, -kI * spec.h[m - 1]);    // w_{2m-1} w_{2m}
  }

  const auto dim = static_cast<Eigen::Index>(2 * n);
  auto end_bath = [&](Eigen::Index first, double rate, double sign) {
    CVector l = CVector::Zero(dim);
    const double amp = 0.5 * std::sqrt(rate);
    l(first) = amp;
    l(first + 1) = sign * kI * amp;
    model.bath.add(l);
  };
  end_bath(0, spec.gammaL1, -1.0);
  end_bath(0, spec.gammaL2, 1.0);
  end_bath(dim - 2, spec.gammaR1, -1.0);
  end_bath(dim - 2, spec.gammaR2, 1.0);
  return model;
}

ShapeMatrix chain_shape_matrix(const XYChainSpec& spec) {
  const ChainModel model = build_chain(spec);
  return build_shape_matrix(model.hamiltonian, model.bath);
}

CMatrix energy_density_operator(const XYChainSpec& spec, std::size_t m) {
  require(m >= 1 && m + 1 <= spec.n, "energy density bond out of range");
  const auto dim = static_cast<Eigen::Index>(2 * spec.n);
  CMatrix q = CMatrix::Zero(dim, dim);
  put(q, 2 * m, 2 * m + 1, -kI * spec.Jx[m - 1]);
  put(q, 2 * m - 1, 2 * m + 2, kI * spec.Jy[m - 1]);
  put(q, 2 * m - 1, 2 * m, -0.5 * kI * spec.h[m - 1]);
  put(q, 2 * m + 1, 2 * m + 2, -0.5 * kI * spec.h[m]);
  return q;
}

CMatrix energy_current_operator(const XYChainSpec& spec, std::size_t m) {
  require(m >= 1 && m + 2 <= spec.n, "energy current bond out of range");
  const auto dim = static_cast<Eigen::Index>(2 * spec.n);
  CMatrix q = CMatrix::Zero(dim, dim);
  const double jxm = spec.Jx[m - 1], jym = spec.Jy[m - 1];
  const double jxn = spec.Jx[m], jyn = spec.Jy[m];
  const double hn = spec.h[m];
  put(q, 2 * m - 1, 2 * m + 3, kI * 2.0 * jym * jxn);
  put(q, 2 * m, 2 * m + 4, kI * 2.0 * jxm * jyn);
  put(q, 2 * m - 1, 2 * m + 1, -kI * jym * hn);
  put(q, 2 * m, 2 * m + 2, -kI * jxm * hn);
  put(q, 2 * m + 1, 2 * m + 3, -kI * hn * jxn);
  put(q, 2 * m + 2, 2 * m + 4, -kI * hn * jyn);
  return q;
}

CMatrix spin_density_operator(std::size_t n, std::size_t m) {
  require(m >= 1 && m <= n, "spin density site out of range");
  const auto dim = static_cast<Eigen::Index>(2 * n);
  CMatrix q = CMatrix::Zero(dim, dim);
  put(q, 2 * m - 1, 2 * m, -kI);
  return q;
}

CMatrix spin_current_operator(std::size_t n, std::size_t m) {
  require(m >= 1 && m + 1 <= n, "spin current bond out of range");
  const auto dim = static_cast<Eigen::Index>(2 * n);
  CMatrix q = CMatrix::Zero(dim, dim);
  put(q, 2 * m, 2 * m + 2, -kI);
  put(q, 2 * m - 1, 2 * m + 1, -kI);
  return q;
}

TransportReport transport_from_covariance(const XYChainSpec& spec, const NessCovariance& cov,
                                          double gap) {
  spec.validate();
  const std::size_t n = spec.n;
  if (cov.C.rows() != static_cast<Eigen::Index>(2 * n)) {
    throw Error(ErrorCode::kDimensionMismatch, "covariance does not match chain length");
  }
  TransportReport r;
  double& res = r.max_imag_residue;
  for (std::size_t m = 1; m + 1 <= n; ++m) {
    r.energy_density.push_back(real_part(expect_quadratic(cov, energy_density_operator(spec, m)), res));
    r.spin_current.push_back(real_part(expect_quadratic(cov, spin_current_operator(n, m)), res));
  }
  for (std::size_t m = 1; m + 2 <= n; ++m) {
    r.energy_current.push_back(real_part(expect_quadratic(cov, energy_current_operator(spec, m)), res));
  }
  for (std::size_t m = 1; m <= n; ++m) {
    r.spin_density.push_back(real_part(expect_quadratic(cov, spin_density_operator(n, m)), res));
  }
  double sum = 0.0;
  for (double s : r.spin_current) sum += s;
  r.mean_spin_current = sum / static_cast<double>(r.spin_current.size());
  r.spin_current_conserved = spec.isotropic();
  r.gap_clamped = gap < kGapFloor;
  r.gap = r.gap_clamped ? kGapFloor : gap;
  const ChainModel model = build_chain(spec);
  r.total_energy = real_part(expect_quadratic(cov, model.hamiltonian.matrix()), res);
  return r;
}

TransportReport transport_report(const XYChainSpec& spec, NessRoute route,
                                 double unresolved_tol) {
  const ChainModel model = build_chain(spec);
  if (route == NessRoute::kNormalModes) {
    const ShapeMatrix a = build_shape_matrix(model.hamiltonian, model.bath);
    const NormalMasterModes nmm = diagonalize_shape(a);
    const SpectrumSummary s = classify(nmm);
    return transport_from_covariance(spec, ness_covariance(nmm), s.gap);
  }
  const CMatrix m = induced_bath_matrix(model.bath);
  const std::vector<Complex> rap = reduced_rapidities(model.hamiltonian, m);
  const double gap = rap.empty() ? 0.0 : 2.0 * rap.back().real();
  std::size_t unresolved = 0;
  const NessCovariance cov =
      ness_covariance_lyapunov(model.hamiltonian, m, unresolved_tol, &unresolved);
  TransportReport r = transport_from_covariance(spec, cov, gap);
  r.unresolved_pairs = unresolved;
  return r;
}

double bulk_value(std::span<const double> profile) {
  const std::size_t len = profile.size();
  if (len == 0) throw Error(ErrorCode::kInvalidArgument, "empty profile");
  std::size_t lo = len / 3;
  std::size_t hi = len - len / 3;
  if (hi <= lo) {
    lo = 0;
    hi = len;
  }
  std::vector<double> mid(profile.begin() + static_cast<std::ptrdiff_t>(lo),
                          profile.begin() + static_cast<std::ptrdiff_t>(hi));
  std::sort(mid.begin(), mid.end());
  const std::size_t k = mid.size();
  return k % 2 == 1 ? mid[k / 2] : 0.5 * (mid[k / 2 - 1] + mid[k / 2]);
}

double edge_log_slope(std::span<const double> profile, std::size_t first, std::size_t last) {
  require(first >= 1 && last > first && last <= profile.size(), "bad edge fit window");
  const double bulk = bulk_value(profile);
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  const auto count = static_cast<double>(last - first + 1);
  for (std::size_t m = first; m <= last; ++m) {
    const double x = static_cast<double>(m);
    const double y = std::log(std::abs(profile[m - 1] - bulk));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (count * sxy - sx * sy) / (count * sxx - sx * sx);
}

}  // namespace thirdq
