#include "thirdq/thirdq.h"

#include <cstring>
#include <exception>
#include <new>
#include <string>

#include "thirdq/dense_oracle.hpp"
#include "thirdq/disorder.hpp"
#include "thirdq/error.hpp"
#include "thirdq/ising.hpp"
#include "thirdq/ness.hpp"
#include "thirdq/pfaffian.hpp"
#include "thirdq/spectral.hpp"
#include "thirdq/xy_chain.hpp"

using namespace thirdq;

struct thirdq_chain {
  XYChainSpec spec;
};
struct thirdq_model {
  QuadraticHamiltonian h;
  BathSpec bath;
};
struct thirdq_modes {
  ShapeMatrix a;
  NormalMasterModes nmm;
};
struct thirdq_ness {
  NessCovariance cov;
};
struct thirdq_transport {
  TransportReport report;
};
struct thirdq_oracle {
  DenseModel model;
  DenseLiouvillean liou;
};
struct thirdq_disorder {
  DisorderSpec spec;
};
struct thirdq_ensemble {
  EnsembleSummary summary;
};

static_assert(static_cast<int>(ErrorCode::kParse) == THIRDQ_ERR_PARSE);
static_assert(static_cast<int>(ErrorCode::kInvalidArgument) == THIRDQ_ERR_INVALID_ARGUMENT);

namespace {

thread_local std::string g_last_error;

struct BufferTooSmall {
  std::size_t needed;
};
struct NullArgument {};

template <class F>
thirdq_status guard(F&& body) {
  try {
    body();
    g_last_error.clear();
    return THIRDQ_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return static_cast<thirdq_status>(static_cast<int>(e.code()));
  } catch (const BufferTooSmall& b) {
    g_last_error = "output buffer too small, need " + std::to_string(b.needed) + " elements";
    return THIRDQ_ERR_BUFFER;
  } catch (const NullArgument&) {
    g_last_error = "required pointer argument is NULL";
    return THIRDQ_ERR_NULL;
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return THIRDQ_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return THIRDQ_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown failure";
    return THIRDQ_ERR_INTERNAL;
  }
}

template <class... T>
void not_null(const T*... p) {
  if (((p == nullptr) || ...)) throw NullArgument{};
}

void need(std::size_t capacity, std::size_t required) {
  if (capacity < required) throw BufferTooSmall{required};
}

Complex in(thirdq_complex c) { return {c.re, c.im}; }
thirdq_complex out_c(Complex c) { return {c.real(), c.imag()}; }

void write_matrix(const CMatrix& m, thirdq_complex* out, std::size_t capacity) {
  need(capacity, static_cast<std::size_t>(m.size()));
  std::size_t k = 0;
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) out[k++] = out_c(m(r, c));
  }
}

CMatrix read_matrix(const thirdq_complex* data, Eigen::Index rows, Eigen::Index cols) {
  CMatrix m(rows, cols);
  std::size_t k = 0;
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = in(data[k++]);
  }
  return m;
}

void write_list(const std::vector<Complex>& v, thirdq_complex* out, std::size_t capacity) {
  need(capacity, v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = out_c(v[i]);
}

char* dup_string(const std::string& s) {
  char* p = new char[s.size() + 1];
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

IsingParams to_params(const thirdq_ising_params* p) {
  IsingParams q;
  q.J = p->J;
  q.h = p->h;
  q.gammaPlusL = p->gamma_plus_l;
  q.gammaMinusL = p->gamma_minus_l;
  q.gammaPlusR = p->gamma_plus_r;
  q.gammaMinusR = p->gamma_minus_r;
  return q;
}

BathSide to_side(thirdq_side s) { return s == THIRDQ_RIGHT ? BathSide::kRight : BathSide::kLeft; }
NessRoute to_route(thirdq_route r) {
  return r == THIRDQ_ROUTE_LYAPUNOV ? NessRoute::kLyapunov : NessRoute::kNormalModes;
}

void fill_summary(const SpectrumSummary& s, thirdq_spectrum_summary* out) {
  out->gap = s.gap;
  out->zero_rapidities = s.zero_rapidities;
  out->cancelling_pairs = s.cancelling_pairs;
  out->unique_ness = s.unique_ness ? 1 : 0;
  out->converges = s.converges ? 1 : 0;
  out->zero_tol = s.zero_tol;
  out->ness_degeneracy = s.ness_degeneracy();
}

std::vector<Complex> read_list(const thirdq_complex* data, std::size_t count) {
  std::vector<Complex> v(count);
  for (std::size_t i = 0; i < count; ++i) v[i] = in(data[i]);
  return v;
}

}  // namespace

extern "C" {

const char* thirdq_version(void) { return "0.1.0"; }
const char* thirdq_last_error(void) { return g_last_error.c_str(); }

int thirdq_status_is_numerical(thirdq_status status) {
  switch (status) {
    case THIRDQ_ERR_NEAR_DEFECTIVE:
    case THIRDQ_ERR_PAIRING_FAILURE:
    case THIRDQ_ERR_NON_UNIQUE_NESS:
    case THIRDQ_ERR_DEGENERATE_KERNEL:
    case THIRDQ_ERR_TAU_ZERO:
    case THIRDQ_ERR_BRANCH_AMBIGUITY:
      return 1;
    default:
      return 0;
  }
}

void thirdq_string_free(char* s) { delete[] s; }

/* chains */

thirdq_status thirdq_chain_from_json(const char* json, thirdq_chain** out) {
  return guard([&] {
    not_null(json, out);
    *out = new thirdq_chain{parse_chain_json(json)};
  });
}

thirdq_status thirdq_chain_from_file(const char* path, thirdq_chain** out) {
  return guard([&] {
    not_null(path, out);
    *out = new thirdq_chain{load_chain_file(path)};
  });
}

thirdq_status thirdq_chain_homogeneous(size_t n, double jx, double jy, double h, double gamma_l1,
                                       double gamma_l2, double gamma_r1, double gamma_r2,
                                       thirdq_chain** out) {
  return guard([&] {
    not_null(out);
    *out = new thirdq_chain{
        homogeneous_chain(n, jx, jy, h, gamma_l1, gamma_l2, gamma_r1, gamma_r2)};
  });
}

size_t thirdq_chain_sites(const thirdq_chain* chain) { return chain ? chain->spec.n : 0; }

thirdq_status thirdq_chain_to_json(const thirdq_chain* chain, char** out) {
  return guard([&] {
    not_null(chain, out);
    *out = dup_string(chain_to_json(chain->spec));
  });
}

void thirdq_chain_free(thirdq_chain* chain) { delete chain; }

/* models */

thirdq_status thirdq_model_create(size_t n, thirdq_model** out) {
  return guard([&] {
    not_null(out);
    if (n == 0) throw Error(ErrorCode::kInvalidArgument, "model needs at least one site");
    *out = new thirdq_model{QuadraticHamiltonian(n), BathSpec(n)};
  });
}

thirdq_status thirdq_model_set_hamiltonian(thirdq_model* model, const thirdq_complex* h,
                                           double* ingest_defect) {
  return guard([&] {
    not_null(model, h);
    const auto dim = static_cast<Eigen::Index>(2 * model->h.n());
    model->h = QuadraticHamiltonian(read_matrix(h, dim, dim));
    if (ingest_defect) *ingest_defect = model->h.ingest_defect();
  });
}

thirdq_status thirdq_model_add_term(thirdq_model* model, size_t a, size_t b, thirdq_complex c) {
  return guard([&] {
    not_null(model);
    model->h.add_term(a, b, in(c));
  });
}

thirdq_status thirdq_model_add_bath(thirdq_model* model, const thirdq_complex* l) {
  return guard([&] {
    not_null(model, l);
    const auto dim = static_cast<Eigen::Index>(2 * model->h.n());
    CVector v(dim);
    for (Eigen::Index j = 0; j < dim; ++j) v(j) = in(l[j]);
    model->bath.add(v);
  });
}

thirdq_status thirdq_model_from_chain(const thirdq_chain* chain, thirdq_model** out) {
  return guard([&] {
    not_null(chain, out);
    ChainModel m = build_chain(chain->spec);
    *out = new thirdq_model{std::move(m.hamiltonian), std::move(m.bath)};
  });
}

thirdq_status thirdq_model_random(size_t n, uint64_t seed, uint64_t index, thirdq_model** out) {
  return guard([&] {
    not_null(out);
    if (n == 0) throw Error(ErrorCode::kInvalidArgument, "model needs at least one site");
    RandomModel m = random_quadratic_model(n, seed, index);
    *out = new thirdq_model{std::move(m.hamiltonian), std::move(m.bath)};
  });
}

size_t thirdq_model_sites(const thirdq_model* model) { return model ? model->h.n() : 0; }

thirdq_status thirdq_model_bath_matrix(const thirdq_model* model, thirdq_complex* m,
                                       size_t capacity) {
  return guard([&] {
    not_null(model, m);
    write_matrix(induced_bath_matrix(model->bath), m, capacity);
  });
}

thirdq_status thirdq_model_shape_matrix(const thirdq_model* model, thirdq_complex* a,
                                        size_t capacity, double* a0) {
  return guard([&] {
    not_null(model, a);
    const ShapeMatrix s = build_shape_matrix(model->h, model->bath);
    write_matrix(s.A, a, capacity);
    if (a0) *a0 = s.A0;
  });
}

thirdq_status thirdq_model_rapidities(const thirdq_model* model, thirdq_complex* out,
                                      size_t capacity) {
  return guard([&] {
    not_null(model, out);
    need(capacity, 2 * model->h.n());
    write_list(shape_rapidities(build_shape_matrix(model->h, model->bath)), out, capacity);
  });
}

void thirdq_model_free(thirdq_model* model) { delete model; }

/* modes */

thirdq_status thirdq_modes_compute(const thirdq_model* model, thirdq_modes** out) {
  return guard([&] {
    not_null(model, out);
    ShapeMatrix a = build_shape_matrix(model->h, model->bath);
    NormalMasterModes nmm = diagonalize_shape(a);
    *out = new thirdq_modes{std::move(a), std::move(nmm)};
  });
}

size_t thirdq_modes_count(const thirdq_modes* modes) {
  return modes ? modes->nmm.rapidities.size() : 0;
}

thirdq_status thirdq_modes_rapidities(const thirdq_modes* modes, thirdq_complex* out,
                                      size_t capacity) {
  return guard([&] {
    not_null(modes, out);
    write_list(modes->nmm.rapidities, out, capacity);
  });
}

thirdq_status thirdq_modes_vectors(const thirdq_modes* modes, thirdq_complex* out,
                                   size_t capacity) {
  return guard([&] {
    not_null(modes, out);
    write_matrix(modes->nmm.V, out, capacity);
  });
}

thirdq_status thirdq_modes_diagnostics(const thirdq_modes* modes, thirdq_mode_diagnostics* out) {
  return guard([&] {
    not_null(modes, out);
    out->eigen_residual = eigen_residual(modes->a, modes->nmm);
    out->normalization_defect = normalization_defect(modes->nmm);
    out->canonical_residual = verify_canonical_form(modes->a, modes->nmm);
    out->antisymmetry_defect = antisymmetry_defect(modes->a.A);
    out->condition = modes->nmm.condition;
    out->a_norm = modes->nmm.a_norm;
    out->a0 = modes->a.A0;
  });
}

thirdq_status thirdq_modes_classify(const thirdq_modes* modes, double zero_tol,
                                    thirdq_spectrum_summary* out) {
  return guard([&] {
    not_null(modes, out);
    fill_summary(classify(modes->nmm, zero_tol), out);
  });
}

thirdq_status thirdq_rapidities_classify(const thirdq_complex* rapidities, size_t count,
                                         double a_norm, double zero_tol,
                                         thirdq_spectrum_summary* out) {
  return guard([&] {
    not_null(out);
    if (count > 0) not_null(rapidities);
    const auto r = read_list(rapidities, count);
    fill_summary(classify(r, a_norm, zero_tol), out);
  });
}

void thirdq_modes_free(thirdq_modes* modes) { delete modes; }

thirdq_status thirdq_liouville_full(const thirdq_complex* rapidities, size_t count, int even_only,
                                    thirdq_complex* out, size_t capacity) {
  return guard([&] {
    not_null(out);
    if (count > 0) not_null(rapidities);
    const auto r = read_list(rapidities, count);
    write_list(liouville_eigenvalues_full(r, even_only ? SectorFilter::kEven : SectorFilter::kAll),
               out, capacity);
  });
}

thirdq_status thirdq_liouville_slowest(const thirdq_complex* rapidities, size_t count, size_t k,
                                       thirdq_complex* out, size_t capacity) {
  return guard([&] {
    not_null(out);
    if (count > 0) not_null(rapidities);
    const auto r = read_list(rapidities, count);
    write_list(liouville_eigenvalues_slowest(r, k), out, capacity);
  });
}

/* steady state */

thirdq_status thirdq_ness_from_modes(const thirdq_modes* modes, double zero_tol,
                                     thirdq_ness** out) {
  return guard([&] {
    not_null(modes, out);
    *out = new thirdq_ness{ness_covariance(modes->nmm, zero_tol)};
  });
}

thirdq_status thirdq_ness_lyapunov(const thirdq_model* model, thirdq_ness** out) {
  return guard([&] {
    not_null(model, out);
    *out = new thirdq_ness{ness_covariance_lyapunov(model->h, induced_bath_matrix(model->bath))};
  });
}

thirdq_status thirdq_ness_covariance(const thirdq_ness* ness, thirdq_complex* out,
                                     size_t capacity) {
  return guard([&] {
    not_null(ness, out);
    write_matrix(ness->cov.C, out, capacity);
  });
}

thirdq_status thirdq_ness_monomial(const thirdq_ness* ness, const size_t* indices, size_t count,
                                   thirdq_complex* out) {
  return guard([&] {
    not_null(ness, out);
    if (count > 0) not_null(indices);
    std::vector<std::size_t> idx(indices, indices + count);
    *out = out_c(expect_monomial(ness->cov, idx));
  });
}

void thirdq_ness_free(thirdq_ness* ness) { delete ness; }

thirdq_status thirdq_pfaffian(const thirdq_complex* a, size_t dim, thirdq_complex* out) {
  return guard([&] {
    not_null(out);
    if (dim > 0) not_null(a);
    const auto d = static_cast<Eigen::Index>(dim);
    *out = out_c(pfaffian(read_matrix(a, d, d)));
  });
}

/* transport */

thirdq_status thirdq_transport_compute(const thirdq_chain* chain, thirdq_route route,
                                       thirdq_transport** out) {
  return guard([&] {
    not_null(chain, out);
    *out = new thirdq_transport{transport_report(chain->spec, to_route(route))};
  });
}

static const std::vector<double>* series_of(const thirdq_transport* t, thirdq_series s) {
  switch (s) {
    case THIRDQ_ENERGY_DENSITY:
      return &t->report.energy_density;
    case THIRDQ_ENERGY_CURRENT:
      return &t->report.energy_current;
    case THIRDQ_SPIN_DENSITY:
      return &t->report.spin_density;
    case THIRDQ_SPIN_CURRENT:
      return &t->report.spin_current;
  }
  return nullptr;
}

size_t thirdq_transport_length(const thirdq_transport* t, thirdq_series series) {
  if (!t) return 0;
  const auto* v = series_of(t, series);
  return v ? v->size() : 0;
}

thirdq_status thirdq_transport_get(const thirdq_transport* t, thirdq_series series, double* out,
                                   size_t capacity) {
  return guard([&] {
    not_null(t, out);
    const auto* v = series_of(t, series);
    if (!v) throw Error(ErrorCode::kInvalidArgument, "unknown transport series");
    need(capacity, v->size());
    std::copy(v->begin(), v->end(), out);
  });
}

thirdq_status thirdq_transport_scalars_get(const thirdq_transport* t,
                                           thirdq_transport_scalars* out) {
  return guard([&] {
    not_null(t, out);
    out->gap = t->report.gap;
    out->gap_clamped = t->report.gap_clamped ? 1 : 0;
    out->mean_spin_current = t->report.mean_spin_current;
    out->spin_current_conserved = t->report.spin_current_conserved ? 1 : 0;
    out->total_energy = t->report.total_energy;
    out->max_imag_residue = t->report.max_imag_residue;
  });
}

void thirdq_transport_free(thirdq_transport* t) { delete t; }

thirdq_status thirdq_profile_bulk(const double* profile, size_t len, double* out) {
  return guard([&] {
    not_null(profile, out);
    *out = bulk_value(std::span<const double>(profile, len));
  });
}

thirdq_status thirdq_profile_edge_slope(const double* profile, size_t len, size_t first,
                                        size_t last, double* out) {
  return guard([&] {
    not_null(profile, out);
    *out = edge_log_slope(std::span<const double>(profile, len), first, last);
  });
}

/* Ising analytics */

thirdq_status thirdq_ising_from_rates(double j, double h, double gamma_l1, double gamma_l2,
                                      double gamma_r1, double gamma_r2, thirdq_ising_params* out) {
  return guard([&] {
    not_null(out);
    const IsingParams p = IsingParams::from_rates(j, h, gamma_l1, gamma_l2, gamma_r1, gamma_r2);
    *out = {p.J, p.h, p.gammaPlusL, p.gammaMinusL, p.gammaPlusR, p.gammaMinusR};
  });
}

thirdq_status thirdq_ising_dispersion(const thirdq_ising_params* p, thirdq_complex beta,
                                      thirdq_complex* xi_minus, thirdq_complex* xi_plus,
                                      thirdq_complex* omega) {
  return guard([&] {
    not_null(p);
    const Dispersion d = dispersion(to_params(p), in(beta));
    if (xi_minus) *xi_minus = out_c(d.xi_minus);
    if (xi_plus) *xi_plus = out_c(d.xi_plus);
    if (omega) *omega = out_c(d.omega);
  });
}

thirdq_status thirdq_ising_tau_left(const thirdq_ising_params* p, thirdq_complex beta,
                                    thirdq_complex* out) {
  return guard([&] {
    not_null(p, out);
    *out = out_c(tau_left(to_params(p), in(beta)));
  });
}

thirdq_status thirdq_ising_s_matrix_left(const thirdq_ising_params* p, thirdq_complex beta,
                                         thirdq_complex out[4]) {
  return guard([&] {
    not_null(p, out);
    const Eigen::Matrix2cd s = s_matrix_left(to_params(p), in(beta));
    out[0] = out_c(s(0, 0));
    out[1] = out_c(s(0, 1));
    out[2] = out_c(s(1, 0));
    out[3] = out_c(s(1, 1));
  });
}

thirdq_status thirdq_ising_poly(const thirdq_ising_params* p, thirdq_side side,
                                thirdq_complex beta, thirdq_complex* out) {
  return guard([&] {
    not_null(p, out);
    *out = out_c(evanescent_poly(to_params(p), to_side(side), in(beta)));
  });
}

thirdq_status thirdq_ising_evanescent(const thirdq_ising_params* p, thirdq_side side,
                                      thirdq_complex out[4], size_t* count) {
  return guard([&] {
    not_null(p, out, count);
    const auto roots = evanescent_rapidities(to_params(p), to_side(side));
    write_list(roots, out, 4);
    *count = roots.size();
  });
}

thirdq_status thirdq_ising_gap_asymptotic(const thirdq_ising_params* p, int printed_variant,
                                          double* out) {
  return guard([&] {
    not_null(p, out);
    *out = gap_asymptotic(to_params(p),
                          printed_variant ? GapFormula::kPrinted : GapFormula::kCorrected);
  });
}

/* dense oracle */

thirdq_status thirdq_oracle_build(const thirdq_model* model, thirdq_oracle** out) {
  return guard([&] {
    not_null(model, out);
    DenseModel dm = lift_quadratic(model->h, model->bath);
    DenseLiouvillean liou = build_superoperator(dm);
    *out = new thirdq_oracle{std::move(dm), std::move(liou)};
  });
}

size_t thirdq_oracle_hilbert_dim(const thirdq_oracle* oracle) {
  return oracle ? oracle->liou.hilbert_dim() : 0;
}

thirdq_status thirdq_oracle_trace_defect(const thirdq_oracle* oracle, double* out) {
  return guard([&] {
    not_null(oracle, out);
    *out = oracle->liou.trace_defect();
  });
}

thirdq_status thirdq_oracle_parity_leak(const thirdq_oracle* oracle, double* out) {
  return guard([&] {
    not_null(oracle, out);
    *out = oracle->liou.parity_leak();
  });
}

thirdq_status thirdq_oracle_eigenvalues(const thirdq_oracle* oracle, int even_only,
                                        thirdq_complex* out, size_t capacity, size_t* written) {
  return guard([&] {
    not_null(oracle, out, written);
    const auto ev = oracle_eigenvalues(oracle->liou, even_only ? SectorFilter::kEven : SectorFilter::kAll);
    write_list(ev, out, capacity);
    *written = ev.size();
  });
}

thirdq_status thirdq_oracle_ness(const thirdq_oracle* oracle, thirdq_complex* out,
                                 size_t capacity) {
  return guard([&] {
    not_null(oracle, out);
    write_matrix(oracle_ness(oracle->liou), out, capacity);
  });
}

thirdq_status thirdq_oracle_ness_covariance(const thirdq_oracle* oracle, thirdq_complex* out,
                                            size_t capacity) {
  return guard([&] {
    not_null(oracle, out);
    const CMatrix rho = oracle_ness(oracle->liou);
    write_matrix(oracle_covariance(rho, realize_majorana(oracle->liou.n)), out, capacity);
  });
}

thirdq_status thirdq_oracle_evolve(const thirdq_oracle* oracle, const thirdq_complex* rho0,
                                   const thirdq_complex* x, double t, thirdq_complex* out) {
  return guard([&] {
    not_null(oracle, rho0, x, out);
    const auto dim = static_cast<Eigen::Index>(oracle->liou.hilbert_dim());
    *out = out_c(oracle_evolve(oracle->liou, read_matrix(rho0, dim, dim), read_matrix(x, dim, dim), t));
  });
}

void thirdq_oracle_free(thirdq_oracle* oracle) { delete oracle; }

thirdq_status thirdq_oracle_trial_run(size_t n, uint64_t seed, uint64_t index,
                                      thirdq_oracle_trial* out) {
  return guard([&] {
    not_null(out);
    const OracleTrial t = oracle_trial(n, seed, index);
    *out = {t.n, t.index, t.covariance_dev, t.spectrum_dev, t.wick_dev, t.trace_defect};
  });
}

/* disorder */

thirdq_status thirdq_disorder_from_json(const char* json, thirdq_disorder** out) {
  return guard([&] {
    not_null(json, out);
    *out = new thirdq_disorder{parse_disorder_json(json)};
  });
}

thirdq_status thirdq_disorder_from_file(const char* path, thirdq_disorder** out) {
  return guard([&] {
    not_null(path, out);
    *out = new thirdq_disorder{load_disorder_file(path)};
  });
}

thirdq_status thirdq_disorder_set_seed(thirdq_disorder* d, uint64_t seed) {
  return guard([&] {
    not_null(d);
    d->spec.seed = seed;
  });
}

thirdq_status thirdq_disorder_set_realizations(thirdq_disorder* d, size_t count) {
  return guard([&] {
    not_null(d);
    if (count == 0) throw Error(ErrorCode::kInvalidArgument, "realizations must be >= 1");
    d->spec.realizations = count;
  });
}

thirdq_status thirdq_disorder_to_json(const thirdq_disorder* d, char** out) {
  return guard([&] {
    not_null(d, out);
    *out = dup_string(disorder_to_json(d->spec));
  });
}

thirdq_status thirdq_disorder_sample(const thirdq_disorder* d, size_t index, size_t n,
                                     thirdq_chain** out) {
  return guard([&] {
    not_null(d, out);
    *out = new thirdq_chain{sample_chain(d->spec, index, n)};
  });
}

void thirdq_disorder_free(thirdq_disorder* d) { delete d; }

thirdq_status thirdq_ensemble_run(const thirdq_disorder* d, const size_t* n_values, size_t count,
                                  thirdq_route route, size_t threads, double fit_fraction,
                                  thirdq_ensemble** out) {
  return guard([&] {
    not_null(d, n_values, out);
    EnsembleOptions opts;
    opts.route = to_route(route);
    opts.threads = threads;
    opts.fit_fraction = fit_fraction;
    std::vector<std::size_t> ns(n_values, n_values + count);
    *out = new thirdq_ensemble{ensemble_summary(d->spec, ns, opts)};
  });
}

size_t thirdq_ensemble_sizes(const thirdq_ensemble* e) { return e ? e->summary.sizes.size() : 0; }

thirdq_status thirdq_ensemble_size_stats(const thirdq_ensemble* e, size_t k,
                                         thirdq_size_stats* out) {
  return guard([&] {
    not_null(e, out);
    if (k >= e->summary.sizes.size()) throw Error(ErrorCode::kInvalidArgument, "size index out of range");
    const SizeSummary& s = e->summary.sizes[k];
    *out = {s.n, s.mean_gap, s.sem_gap, s.mean_current, s.sem_current, s.clamped,
            mid_chain_max_slope(s), s.unresolved};
  });
}

thirdq_status thirdq_ensemble_profile(const thirdq_ensemble* e, size_t k, double* x, double* y,
                                      size_t capacity) {
  return guard([&] {
    not_null(e, x, y);
    if (k >= e->summary.sizes.size()) throw Error(ErrorCode::kInvalidArgument, "size index out of range");
    const SizeSummary& s = e->summary.sizes[k];
    need(capacity, s.scaled_x.size());
    std::copy(s.scaled_x.begin(), s.scaled_x.end(), x);
    std::copy(s.mean_profile.begin(), s.mean_profile.end(), y);
  });
}

thirdq_status thirdq_ensemble_fits(const thirdq_ensemble* e, thirdq_fit* exponential,
                                   thirdq_fit* power_law) {
  return guard([&] {
    not_null(e);
    const auto& a = e->summary.gap_exponential;
    const auto& b = e->summary.gap_power_law;
    if (exponential) *exponential = {a.amplitude, a.rate, a.r2, a.points};
    if (power_law) *power_law = {b.amplitude, b.rate, b.r2, b.points};
  });
}

thirdq_status thirdq_ensemble_csv(const thirdq_ensemble* e, thirdq_csv_kind kind, char** out) {
  return guard([&] {
    not_null(e, out);
    *out = dup_string(kind == THIRDQ_CSV_PROFILE ? profile_csv(e->summary) : summary_csv(e->summary));
  });
}

void thirdq_ensemble_free(thirdq_ensemble* e) { delete e; }

}  // extern "C"
