/*
 * thirdq C interface.
 *
 * Every object is an opaque handle created by a *_create / *_compute style
 * call and released with the matching *_free function (NULL is accepted).
 * Functions return THIRDQ_OK or an error status; the message of the most
 * recent failure on the calling thread is available from thirdq_last_error().
 *
 * Matrices cross the boundary as row-major arrays. Output buffers are passed
 * with their capacity in elements; a too-small buffer yields
 * THIRDQ_ERR_BUFFER and nothing is written. Majorana indices are zero-based.
 */
#ifndef THIRDQ_H
#define THIRDQ_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define THIRDQ_API __declspec(dllexport)
#else
#define THIRDQ_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum thirdq_status {
  THIRDQ_OK = 0,
  THIRDQ_ERR_INVALID_ARGUMENT = 1,
  THIRDQ_ERR_DIMENSION_MISMATCH = 2,
  THIRDQ_ERR_NEAR_DEFECTIVE = 3,
  THIRDQ_ERR_PAIRING_FAILURE = 4,
  THIRDQ_ERR_NON_UNIQUE_NESS = 5,
  THIRDQ_ERR_SIZE_CAP = 6,
  THIRDQ_ERR_DEGENERATE_KERNEL = 7,
  THIRDQ_ERR_TAU_ZERO = 8,
  THIRDQ_ERR_BRANCH_AMBIGUITY = 9,
  THIRDQ_ERR_IO = 10,
  THIRDQ_ERR_PARSE = 11,
  THIRDQ_ERR_BUFFER = 12,
  THIRDQ_ERR_NULL = 13,
  THIRDQ_ERR_INTERNAL = 99
} thirdq_status;

typedef struct thirdq_complex {
  double re;
  double im;
} thirdq_complex;

THIRDQ_API const char* thirdq_version(void);
THIRDQ_API const char* thirdq_last_error(void);
/* 1 for failures of the numerics (defective, non-unique, ...), 0 otherwise. */
THIRDQ_API int thirdq_status_is_numerical(thirdq_status status);
THIRDQ_API void thirdq_string_free(char* s);

/* ---- XY chain specifications ------------------------------------------ */

typedef struct thirdq_chain thirdq_chain;

THIRDQ_API thirdq_status thirdq_chain_from_json(const char* json, thirdq_chain** out);
THIRDQ_API thirdq_status thirdq_chain_from_file(const char* path, thirdq_chain** out);
THIRDQ_API thirdq_status thirdq_chain_homogeneous(size_t n, double jx, double jy, double h,
                                                  double gamma_l1, double gamma_l2,
                                                  double gamma_r1, double gamma_r2,
                                                  thirdq_chain** out);
THIRDQ_API size_t thirdq_chain_sites(const thirdq_chain* chain);
/* Caller releases *out with thirdq_string_free. */
THIRDQ_API thirdq_status thirdq_chain_to_json(const thirdq_chain* chain, char** out);
THIRDQ_API void thirdq_chain_free(thirdq_chain* chain);

/* ---- Quadratic models: Hamiltonian matrix plus linear baths ----------- */

typedef struct thirdq_model thirdq_model;

THIRDQ_API thirdq_status thirdq_model_create(size_t n, thirdq_model** out);
/* h is 2n x 2n; it is antisymmetrized and the dropped symmetric part's max
 * magnitude is stored in *ingest_defect (may be NULL). */
THIRDQ_API thirdq_status thirdq_model_set_hamiltonian(thirdq_model* model, const thirdq_complex* h,
                                                      double* ingest_defect);
/* Adds c * w_a w_b. */
THIRDQ_API thirdq_status thirdq_model_add_term(thirdq_model* model, size_t a, size_t b,
                                               thirdq_complex c);
/* Appends L = sum_j l_j w_j, l has 2n entries. */
THIRDQ_API thirdq_status thirdq_model_add_bath(thirdq_model* model, const thirdq_complex* l);
THIRDQ_API thirdq_status thirdq_model_from_chain(const thirdq_chain* chain, thirdq_model** out);
THIRDQ_API thirdq_status thirdq_model_random(size_t n, uint64_t seed, uint64_t index,
                                             thirdq_model** out);
THIRDQ_API size_t thirdq_model_sites(const thirdq_model* model);
/* M is 2n x 2n. */
THIRDQ_API thirdq_status thirdq_model_bath_matrix(const thirdq_model* model, thirdq_complex* m,
                                                  size_t capacity);
/* A is 4n x 4n; *a0 may be NULL. */
THIRDQ_API thirdq_status thirdq_model_shape_matrix(const thirdq_model* model, thirdq_complex* a,
                                                   size_t capacity, double* a0);
/* Rapidities only (2n values), skipping eigenvectors. */
THIRDQ_API thirdq_status thirdq_model_rapidities(const thirdq_model* model, thirdq_complex* out,
                                                 size_t capacity);
THIRDQ_API void thirdq_model_free(thirdq_model* model);

/* ---- Normal master modes ---------------------------------------------- */

typedef struct thirdq_modes thirdq_modes;

typedef struct thirdq_mode_diagnostics {
  double eigen_residual;       /* max ||A v - lambda v|| / ||v|| */
  double normalization_defect; /* max |V V^T - J| */
  double canonical_residual;   /* max |A - V^T Lambda V| */
  double antisymmetry_defect;  /* max |A + A^T| */
  double condition;            /* 2-norm condition number of V */
  double a_norm;               /* ||A||_inf */
  double a0;
} thirdq_mode_diagnostics;

typedef struct thirdq_spectrum_summary {
  double gap;
  size_t zero_rapidities;
  size_t cancelling_pairs;
  int unique_ness;
  int converges;
  double zero_tol;
  double ness_degeneracy;
} thirdq_spectrum_summary;

THIRDQ_API thirdq_status thirdq_modes_compute(const thirdq_model* model, thirdq_modes** out);
THIRDQ_API size_t thirdq_modes_count(const thirdq_modes* modes); /* 2n */
THIRDQ_API thirdq_status thirdq_modes_rapidities(const thirdq_modes* modes, thirdq_complex* out,
                                                 size_t capacity);
/* V is 4n x 4n. */
THIRDQ_API thirdq_status thirdq_modes_vectors(const thirdq_modes* modes, thirdq_complex* out,
                                              size_t capacity);
THIRDQ_API thirdq_status thirdq_modes_diagnostics(const thirdq_modes* modes,
                                                  thirdq_mode_diagnostics* out);
/* zero_tol <= 0 selects the default 1e-10 * max(1, ||A||). */
THIRDQ_API thirdq_status thirdq_modes_classify(const thirdq_modes* modes, double zero_tol,
                                               thirdq_spectrum_summary* out);
THIRDQ_API thirdq_status thirdq_rapidities_classify(const thirdq_complex* rapidities, size_t count,
                                                    double a_norm, double zero_tol,
                                                    thirdq_spectrum_summary* out);
THIRDQ_API void thirdq_modes_free(thirdq_modes* modes);

/* Liouvillean eigenvalues -2 sum_j beta_j nu_j. The full list has 2^count
 * entries (2^(count-1) with even_only); count <= 24. */
THIRDQ_API thirdq_status thirdq_liouville_full(const thirdq_complex* rapidities, size_t count,
                                               int even_only, thirdq_complex* out,
                                               size_t capacity);
THIRDQ_API thirdq_status thirdq_liouville_slowest(const thirdq_complex* rapidities, size_t count,
                                                  size_t k, thirdq_complex* out, size_t capacity);

/* ---- Steady state ----------------------------------------------------- */

typedef struct thirdq_ness thirdq_ness;

THIRDQ_API thirdq_status thirdq_ness_from_modes(const thirdq_modes* modes, double zero_tol,
                                                thirdq_ness** out);
THIRDQ_API thirdq_status thirdq_ness_lyapunov(const thirdq_model* model, thirdq_ness** out);
/* C is 2n x 2n, C_jk = <w_j w_k>. */
THIRDQ_API thirdq_status thirdq_ness_covariance(const thirdq_ness* ness, thirdq_complex* out,
                                                size_t capacity);
THIRDQ_API thirdq_status thirdq_ness_monomial(const thirdq_ness* ness, const size_t* indices,
                                              size_t count, thirdq_complex* out);
THIRDQ_API void thirdq_ness_free(thirdq_ness* ness);

/* Pfaffian of an antisymmetric dim x dim matrix. */
THIRDQ_API thirdq_status thirdq_pfaffian(const thirdq_complex* a, size_t dim, thirdq_complex* out);

/* ---- Transport observables -------------------------------------------- */

typedef enum thirdq_route { THIRDQ_ROUTE_NORMAL_MODES = 0, THIRDQ_ROUTE_LYAPUNOV = 1 } thirdq_route;

typedef enum thirdq_series {
  THIRDQ_ENERGY_DENSITY = 0, /* n-1 values */
  THIRDQ_ENERGY_CURRENT = 1, /* n-2 values */
  THIRDQ_SPIN_DENSITY = 2,   /* n values */
  THIRDQ_SPIN_CURRENT = 3    /* n-1 values */
} thirdq_series;

typedef struct thirdq_transport_scalars {
  double gap;
  int gap_clamped;
  double mean_spin_current;
  int spin_current_conserved;
  double total_energy;
  double max_imag_residue;
} thirdq_transport_scalars;

typedef struct thirdq_transport thirdq_transport;

THIRDQ_API thirdq_status thirdq_transport_compute(const thirdq_chain* chain, thirdq_route route,
                                                  thirdq_transport** out);
THIRDQ_API size_t thirdq_transport_length(const thirdq_transport* t, thirdq_series series);
THIRDQ_API thirdq_status thirdq_transport_get(const thirdq_transport* t, thirdq_series series,
                                              double* out, size_t capacity);
THIRDQ_API thirdq_status thirdq_transport_scalars_get(const thirdq_transport* t,
                                                      thirdq_transport_scalars* out);
THIRDQ_API void thirdq_transport_free(thirdq_transport* t);

/* Median of the middle third of a profile. */
THIRDQ_API thirdq_status thirdq_profile_bulk(const double* profile, size_t len, double* out);
/* Slope of log|profile_m - bulk| over one-based sites first..last. */
THIRDQ_API thirdq_status thirdq_profile_edge_slope(const double* profile, size_t len, size_t first,
                                                   size_t last, double* out);

/* ---- Homogeneous transverse Ising analytics --------------------------- */

typedef struct thirdq_ising_params {
  double J;
  double h;
  double gamma_plus_l, gamma_minus_l;
  double gamma_plus_r, gamma_minus_r;
} thirdq_ising_params;

typedef enum thirdq_side { THIRDQ_LEFT = 0, THIRDQ_RIGHT = 1 } thirdq_side;

THIRDQ_API thirdq_status thirdq_ising_from_rates(double j, double h, double gamma_l1,
                                                 double gamma_l2, double gamma_r1,
                                                 double gamma_r2, thirdq_ising_params* out);
THIRDQ_API thirdq_status thirdq_ising_dispersion(const thirdq_ising_params* p, thirdq_complex beta,
                                                 thirdq_complex* xi_minus, thirdq_complex* xi_plus,
                                                 thirdq_complex* omega);
THIRDQ_API thirdq_status thirdq_ising_tau_left(const thirdq_ising_params* p, thirdq_complex beta,
                                               thirdq_complex* out);
/* out receives S11, S12, S21, S22. */
THIRDQ_API thirdq_status thirdq_ising_s_matrix_left(const thirdq_ising_params* p,
                                                    thirdq_complex beta, thirdq_complex out[4]);
THIRDQ_API thirdq_status thirdq_ising_poly(const thirdq_ising_params* p, thirdq_side side,
                                           thirdq_complex beta, thirdq_complex* out);
/* Up to 4 roots, leading one first. */
THIRDQ_API thirdq_status thirdq_ising_evanescent(const thirdq_ising_params* p, thirdq_side side,
                                                 thirdq_complex out[4], size_t* count);
/* printed_variant != 0 evaluates the alternative mixed-term weighting. */
THIRDQ_API thirdq_status thirdq_ising_gap_asymptotic(const thirdq_ising_params* p,
                                                     int printed_variant, double* out);

/* ---- Dense oracle (n <= 4) -------------------------------------------- */

typedef struct thirdq_oracle thirdq_oracle;

THIRDQ_API thirdq_status thirdq_oracle_build(const thirdq_model* model, thirdq_oracle** out);
THIRDQ_API size_t thirdq_oracle_hilbert_dim(const thirdq_oracle* oracle);
THIRDQ_API thirdq_status thirdq_oracle_trace_defect(const thirdq_oracle* oracle, double* out);
THIRDQ_API thirdq_status thirdq_oracle_parity_leak(const thirdq_oracle* oracle, double* out);
/* 4^n eigenvalues (half of them with even_only); *written receives the count. */
THIRDQ_API thirdq_status thirdq_oracle_eigenvalues(const thirdq_oracle* oracle, int even_only,
                                                   thirdq_complex* out, size_t capacity,
                                                   size_t* written);
/* Stationary density matrix, 2^n x 2^n. */
THIRDQ_API thirdq_status thirdq_oracle_ness(const thirdq_oracle* oracle, thirdq_complex* out,
                                            size_t capacity);
THIRDQ_API thirdq_status thirdq_oracle_ness_covariance(const thirdq_oracle* oracle,
                                                       thirdq_complex* out, size_t capacity);
/* tr(X exp(t L) rho0) for n <= 3; rho0 and x are 2^n x 2^n. */
THIRDQ_API thirdq_status thirdq_oracle_evolve(const thirdq_oracle* oracle,
                                              const thirdq_complex* rho0, const thirdq_complex* x,
                                              double t, thirdq_complex* out);
THIRDQ_API void thirdq_oracle_free(thirdq_oracle* oracle);

typedef struct thirdq_oracle_trial {
  size_t n;
  uint64_t index;
  double covariance_dev;
  double spectrum_dev;
  double wick_dev;
  double trace_defect;
} thirdq_oracle_trial;

/* Random model (seed, index) solved both ways. */
THIRDQ_API thirdq_status thirdq_oracle_trial_run(size_t n, uint64_t seed, uint64_t index,
                                                 thirdq_oracle_trial* out);

/* ---- Disorder ensembles ----------------------------------------------- */

typedef struct thirdq_disorder thirdq_disorder;
typedef struct thirdq_ensemble thirdq_ensemble;

typedef struct thirdq_size_stats {
  size_t n;
  double mean_gap, sem_gap;
  double mean_current, sem_current;
  size_t clamped;
  double mid_chain_max_slope;
  size_t unresolved;
} thirdq_size_stats;

typedef struct thirdq_fit {
  double amplitude;
  double rate;
  double r2;
  size_t points;
} thirdq_fit;

typedef enum thirdq_csv_kind { THIRDQ_CSV_SUMMARY = 0, THIRDQ_CSV_PROFILE = 1 } thirdq_csv_kind;

THIRDQ_API thirdq_status thirdq_disorder_from_json(const char* json, thirdq_disorder** out);
THIRDQ_API thirdq_status thirdq_disorder_from_file(const char* path, thirdq_disorder** out);
THIRDQ_API thirdq_status thirdq_disorder_set_seed(thirdq_disorder* d, uint64_t seed);
THIRDQ_API thirdq_status thirdq_disorder_set_realizations(thirdq_disorder* d, size_t count);
THIRDQ_API thirdq_status thirdq_disorder_to_json(const thirdq_disorder* d, char** out);
THIRDQ_API thirdq_status thirdq_disorder_sample(const thirdq_disorder* d, size_t index, size_t n,
                                                thirdq_chain** out);
THIRDQ_API void thirdq_disorder_free(thirdq_disorder* d);

/* threads == 0 uses THIRDQ_THREADS or the hardware concurrency. */
THIRDQ_API thirdq_status thirdq_ensemble_run(const thirdq_disorder* d, const size_t* n_values,
                                             size_t count, thirdq_route route, size_t threads,
                                             double fit_fraction, thirdq_ensemble** out);
THIRDQ_API size_t thirdq_ensemble_sizes(const thirdq_ensemble* e);
THIRDQ_API thirdq_status thirdq_ensemble_size_stats(const thirdq_ensemble* e, size_t k,
                                                    thirdq_size_stats* out);
/* Scaled coordinates and averaged energy density of size k (n-1 values each). */
THIRDQ_API thirdq_status thirdq_ensemble_profile(const thirdq_ensemble* e, size_t k, double* x,
                                                 double* y, size_t capacity);
THIRDQ_API thirdq_status thirdq_ensemble_fits(const thirdq_ensemble* e, thirdq_fit* exponential,
                                              thirdq_fit* power_law);
THIRDQ_API thirdq_status thirdq_ensemble_csv(const thirdq_ensemble* e, thirdq_csv_kind kind,
                                             char** out);
THIRDQ_API void thirdq_ensemble_free(thirdq_ensemble* e);

#ifdef __cplusplus
}
#endif

#endif /* THIRDQ_H */
