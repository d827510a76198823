#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <cstring>
#include <string>
#include <vector>

#include "doctest.h"
#include "rnlw/rnlw.h"

namespace {

std::string take(char* s) {
  std::string out = s ? s : "";
  rnlw_string_free(s);
  return out;
}

}  // namespace

TEST_CASE("grid and field handles") {
  rnlw_grid* g = nullptr;
  REQUIRE(rnlw_grid_create(0.0, 10.0, 1001, 0, &g) == RNLW_OK);
  CHECK(rnlw_grid_size(g) == 1001);
  CHECK(rnlw_grid_node(g, 1000) == doctest::Approx(10.0));
  CHECK(std::isnan(rnlw_grid_node(g, 5000)));

  std::vector<double> u(1001), ut(1001, 0.0);
  for (size_t i = 0; i < u.size(); ++i) u[i] = std::exp(-std::pow(rnlw_grid_node(g, i), 2));
  rnlw_field* f = nullptr;
  REQUIRE(rnlw_field_create(g, u.data(), nullptr, &f) == RNLW_OK);
  rnlw_field* h = nullptr;
  REQUIRE(rnlw_field_gaussian(g, 1.0, 1.0, 0.0, &h) == RNLW_OK);
  std::vector<double> back(rnlw_field_size(h));
  REQUIRE(rnlw_field_samples(h, nullptr, back.data(), ut.data()) == RNLW_OK);
  for (size_t i = 0; i < u.size(); ++i) CHECK(back[i] == doctest::Approx(u[i]).epsilon(1e-15));

  // closed-form focusing p = 4 Gaussian energy (frozen oracle)
  double e = 0.0;
  REQUIRE(rnlw_energy(f, 4.0, 1, &e) == RNLW_OK);
  CHECK(e == doctest::Approx(2.8534425854475062).epsilon(1e-6));

  rnlw_field_free(f);
  rnlw_field_free(h);
  rnlw_grid_free(g);
}

TEST_CASE("errors map to status codes and a thread-local message") {
  rnlw_grid* g = nullptr;
  CHECK(rnlw_grid_create(1.0, 0.5, 10, 0, &g) == RNLW_ERR_INVALID_ARGUMENT);
  CHECK(g == nullptr);
  CHECK(std::strlen(rnlw_last_error()) > 0);
  CHECK(rnlw_grid_create(0.0, 1.0, 10, 0, nullptr) == RNLW_ERR_INVALID_ARGUMENT);
  CHECK(std::string(rnlw_last_error()).find("out") != std::string::npos);
  rnlw_field* f = nullptr;
  CHECK(rnlw_field_read_csv("/nonexistent/field.csv", &f) == RNLW_ERR_IO);

  REQUIRE(rnlw_grid_create(0.0, 10.0, 101, 0, &g) == RNLW_OK);
  CHECK(std::strlen(rnlw_last_error()) == 0);
  REQUIRE(rnlw_field_gaussian(g, 1.0, 1.0, 0.0, &f) == RNLW_OK);
  rnlw_field* out = nullptr;
  // Gaussian tail touches r_max: refusing is a truncation, not a crash
  CHECK(rnlw_free_propagate(f, 50.0, &out) == RNLW_ERR_TRUNCATION);
  rnlw_field_free(f);
  rnlw_grid_free(g);
}

TEST_CASE("soliton and analysis entry points return JSON") {
  rnlw_profile* s = nullptr;
  char* tail = nullptr;
  REQUIRE(rnlw_soliton_construct(5.0, 10.0, 1e-3, &s, &tail) == RNLW_OK);
  CHECK(take(tail).find("contraction_bound") != std::string::npos);
  double v = 0.0;
  REQUIRE(rnlw_profile_value(s, 1.0, &v) == RNLW_OK);
  CHECK(v == doctest::Approx(std::sqrt(3.0) / 2.0).epsilon(1e-10));
  CHECK(rnlw_profile_value(s, 1e-6, &v) == RNLW_ERR_OUT_OF_DOMAIN);
  rnlw_profile_free(s);

  char* js = nullptr;
  REQUIRE(rnlw_exponent_report(4.0, &js) == RNLW_OK);
  CHECK(take(js).find("\"5/6\"") != std::string::npos);
  CHECK(rnlw_exponent_report(5.5, &js) == RNLW_ERR_INVALID_ARGUMENT);

  int ok = 0;
  REQUIRE(rnlw_channel_suite(3, 1, 1e-8, &ok, &js) == RNLW_OK);
  CHECK(ok == 1);
  take(js);
}

TEST_CASE("evolution through the C API") {
  rnlw_grid* g = nullptr;
  REQUIRE(rnlw_grid_create(0.0, 12.0, 601, 0, &g) == RNLW_OK);
  rnlw_field* f = nullptr;
  REQUIRE(rnlw_field_gaussian(g, 1.0, 1.0, 0.0, &f) == RNLW_OK);
  rnlw_evolve_config c;
  rnlw_evolve_config_default(&c);
  c.t_final = 1.0;
  c.snapshot_every = 0.5;
  rnlw_trajectory* t = nullptr;
  REQUIRE(rnlw_evolve(f, &c, &t) == RNLW_OK);
  CHECK(rnlw_trajectory_status(t) == 0);
  CHECK(rnlw_trajectory_snapshot_count(t) == 3);
  double time = -1.0;
  rnlw_field* last = nullptr;
  REQUIRE(rnlw_trajectory_snapshot(t, 2, &time, &last) == RNLW_OK);
  CHECK(time == doctest::Approx(1.0));
  double e0 = 0.0, e1 = 0.0;
  rnlw_energy(f, 4.0, 0, &e0);
  rnlw_energy(last, 4.0, 0, &e1);
  CHECK(e1 == doctest::Approx(e0).epsilon(1e-3));
  double norm = 0.0, err = 0.0;
  REQUIRE(rnlw_spacetime_norm(t, 1, 0.0, 0.0, 0.0, 0.0, 1.0, &norm, &err) == RNLW_OK);
  CHECK(norm > 0.0);
  CHECK(rnlw_trajectory_snapshot(t, 9, &time, &last) == RNLW_ERR_OUT_OF_DOMAIN);
  c.scheme = 7;
  rnlw_trajectory* bad = nullptr;
  CHECK(rnlw_evolve(f, &c, &bad) == RNLW_ERR_INVALID_ARGUMENT);
  rnlw_field_free(last);
  rnlw_trajectory_free(t);
  rnlw_field_free(f);
  rnlw_grid_free(g);
}
