#include <doctest.h>

#include <cmath>
#include <cstring>
#include <string>
#include <vector>

#include "thirdq/thirdq.h"

namespace {

double cabs(thirdq_complex z) { return std::hypot(z.re, z.im); }

struct Chain {
  thirdq_chain* p = nullptr;
  ~Chain() { thirdq_chain_free(p); }
};
struct ModelH {
  thirdq_model* p = nullptr;
  ~ModelH() { thirdq_model_free(p); }
};
struct Modes {
  thirdq_modes* p = nullptr;
  ~Modes() { thirdq_modes_free(p); }
};
struct Ness {
  thirdq_ness* p = nullptr;
  ~Ness() { thirdq_ness_free(p); }
};

}  // namespace

TEST_CASE("version and error plumbing") {
  CHECK(std::string(thirdq_version()) == "0.1.0");
  CHECK(thirdq_chain_from_json(nullptr, nullptr) == THIRDQ_ERR_NULL);
  thirdq_chain* c = nullptr;
  CHECK(thirdq_chain_from_json("{oops", &c) == THIRDQ_ERR_PARSE);
  CHECK(c == nullptr);
  CHECK(std::strlen(thirdq_last_error()) > 0);
  CHECK(thirdq_chain_from_file("/no/such/file.json", &c) == THIRDQ_ERR_IO);
  CHECK(thirdq_status_is_numerical(THIRDQ_ERR_NON_UNIQUE_NESS));
  CHECK_FALSE(thirdq_status_is_numerical(THIRDQ_ERR_PARSE));
  thirdq_chain_free(nullptr);
  thirdq_string_free(nullptr);
}

TEST_CASE("single fermion through the C interface") {
  ModelH m;
  REQUIRE(thirdq_model_create(1, &m.p) == THIRDQ_OK);
  REQUIRE(thirdq_model_add_term(m.p, 0, 1, thirdq_complex{0.0, -0.5}) == THIRDQ_OK);
  const double g1 = 0.8, g2 = 0.2;
  const thirdq_complex l1[2] = {{0.5 * std::sqrt(g1), 0.0}, {0.0, -0.5 * std::sqrt(g1)}};
  const thirdq_complex l2[2] = {{0.5 * std::sqrt(g2), 0.0}, {0.0, 0.5 * std::sqrt(g2)}};
  REQUIRE(thirdq_model_add_bath(m.p, l1) == THIRDQ_OK);
  REQUIRE(thirdq_model_add_bath(m.p, l2) == THIRDQ_OK);

  Modes modes;
  REQUIRE(thirdq_modes_compute(m.p, &modes.p) == THIRDQ_OK);
  REQUIRE(thirdq_modes_count(modes.p) == 2);
  thirdq_complex r[2];
  CHECK(thirdq_modes_rapidities(modes.p, r, 1) == THIRDQ_ERR_BUFFER);
  REQUIRE(thirdq_modes_rapidities(modes.p, r, 2) == THIRDQ_OK);
  CHECK(r[0].re == doctest::Approx(0.5));
  CHECK(r[0].im == doctest::Approx(0.5));

  thirdq_mode_diagnostics diag;
  REQUIRE(thirdq_modes_diagnostics(modes.p, &diag) == THIRDQ_OK);
  CHECK(diag.canonical_residual < 1e-12);
  CHECK(diag.a0 == doctest::Approx(1.0));

  thirdq_spectrum_summary sum;
  REQUIRE(thirdq_modes_classify(modes.p, 0.0, &sum) == THIRDQ_OK);
  CHECK(sum.unique_ness == 1);
  CHECK(sum.gap == doctest::Approx(1.0));

  Ness ness;
  REQUIRE(thirdq_ness_from_modes(modes.p, 0.0, &ness.p) == THIRDQ_OK);
  const size_t idx[2] = {0, 1};
  thirdq_complex w1w2;
  REQUIRE(thirdq_ness_monomial(ness.p, idx, 2, &w1w2) == THIRDQ_OK);
  // <sigma^z> = -i <w1 w2>, occupation (1 + <sigma^z>)/2 = g2/(g1+g2).
  CHECK(0.5 * (1.0 + w1w2.im) == doctest::Approx(g2 / (g1 + g2)));

  thirdq_complex lam[4];
  REQUIRE(thirdq_liouville_full(r, 2, 0, lam, 4) == THIRDQ_OK);
  CHECK(cabs(lam[3]) == doctest::Approx(2.0));
}

TEST_CASE("chain transport through the C interface") {
  Chain c;
  REQUIRE(thirdq_chain_homogeneous(20, 1.5, 0.0, 1.0, 1.0, 0.6, 1.0, 0.3, &c.p) == THIRDQ_OK);
  CHECK(thirdq_chain_sites(c.p) == 20);
  thirdq_transport* t = nullptr;
  REQUIRE(thirdq_transport_compute(c.p, THIRDQ_ROUTE_LYAPUNOV, &t) == THIRDQ_OK);
  const size_t len = thirdq_transport_length(t, THIRDQ_ENERGY_CURRENT);
  REQUIRE(len == 18);
  std::vector<double> q(len);
  REQUIRE(thirdq_transport_get(t, THIRDQ_ENERGY_CURRENT, q.data(), q.size()) == THIRDQ_OK);
  for (double v : q) CHECK(v == doctest::Approx(q[0]).epsilon(1e-8));
  thirdq_transport_scalars s;
  REQUIRE(thirdq_transport_scalars_get(t, &s) == THIRDQ_OK);
  CHECK(s.gap > 0.0);
  thirdq_transport_free(t);

  char* text = nullptr;
  REQUIRE(thirdq_chain_to_json(c.p, &text) == THIRDQ_OK);
  Chain back;
  CHECK(thirdq_chain_from_json(text, &back.p) == THIRDQ_OK);
  thirdq_string_free(text);
}

TEST_CASE("closed model reports a non-unique steady state") {
  ModelH m;
  REQUIRE(thirdq_model_create(2, &m.p) == THIRDQ_OK);
  REQUIRE(thirdq_model_add_term(m.p, 0, 3, thirdq_complex{0.0, 1.0}) == THIRDQ_OK);
  REQUIRE(thirdq_model_add_term(m.p, 1, 2, thirdq_complex{0.0, -0.7}) == THIRDQ_OK);
  Modes modes;
  REQUIRE(thirdq_modes_compute(m.p, &modes.p) == THIRDQ_OK);
  Ness ness;
  CHECK(thirdq_ness_from_modes(modes.p, 0.0, &ness.p) == THIRDQ_ERR_NON_UNIQUE_NESS);
  CHECK(ness.p == nullptr);
}

TEST_CASE("analytics and oracle entry points") {
  thirdq_ising_params p;
  REQUIRE(thirdq_ising_from_rates(1.5, 1.0, 1.0, 0.6, 1.0, 0.3, &p) == THIRDQ_OK);
  thirdq_complex roots[4];
  size_t count = 0;
  REQUIRE(thirdq_ising_evanescent(&p, THIRDQ_LEFT, roots, &count) == THIRDQ_OK);
  REQUIRE(count >= 1);
  CHECK(roots[0].re == doctest::Approx(0.4387385718).epsilon(1e-8));
  double gap = 0.0;
  REQUIRE(thirdq_ising_gap_asymptotic(&p, 0, &gap) == THIRDQ_OK);
  CHECK(gap == doctest::Approx(10.820692).epsilon(1e-6));
  CHECK(thirdq_ising_from_rates(0.0, 1.0, 1, 1, 1, 1, &p) == THIRDQ_ERR_INVALID_ARGUMENT);

  thirdq_oracle_trial trial;
  REQUIRE(thirdq_oracle_trial_run(2, 5, 0, &trial) == THIRDQ_OK);
  CHECK(trial.covariance_dev < 1e-9);
  CHECK(thirdq_oracle_trial_run(9, 5, 0, &trial) == THIRDQ_ERR_SIZE_CAP);

  const thirdq_complex a[4] = {{0, 0}, {2, 1}, {-2, -1}, {0, 0}};
  thirdq_complex pf;
  REQUIRE(thirdq_pfaffian(a, 2, &pf) == THIRDQ_OK);
  CHECK(pf.re == doctest::Approx(2.0));
  CHECK(pf.im == doctest::Approx(1.0));
}

TEST_CASE("disorder ensemble through the C interface") {
  thirdq_disorder* d = nullptr;
  REQUIRE(thirdq_disorder_from_json(
              R"({"disorder": {"Jx": 0.5, "h": [1, 2]}, "gamma": {"L1": 1, "L2": 0.6, "R1": 1, "R2": 0.3}})",
              &d) == THIRDQ_OK);
  REQUIRE(thirdq_disorder_set_realizations(d, 4) == THIRDQ_OK);
  REQUIRE(thirdq_disorder_set_seed(d, 3) == THIRDQ_OK);
  const size_t ns[2] = {8, 10};
  thirdq_ensemble* e = nullptr;
  REQUIRE(thirdq_ensemble_run(d, ns, 2, THIRDQ_ROUTE_LYAPUNOV, 2, 1.0, &e) == THIRDQ_OK);
  CHECK(thirdq_ensemble_sizes(e) == 2);
  thirdq_size_stats st;
  REQUIRE(thirdq_ensemble_size_stats(e, 1, &st) == THIRDQ_OK);
  CHECK(st.n == 10);
  CHECK(st.mean_gap > 0.0);
  CHECK(thirdq_ensemble_size_stats(e, 2, &st) == THIRDQ_ERR_INVALID_ARGUMENT);
  char* csv = nullptr;
  REQUIRE(thirdq_ensemble_csv(e, THIRDQ_CSV_SUMMARY, &csv) == THIRDQ_OK);
  CHECK(std::string(csv).rfind("n,mean_gap", 0) == 0);
  thirdq_string_free(csv);
  thirdq_ensemble_free(e);
  thirdq_disorder_free(d);
}
