#include <chrono>
#include <cmath>
#include <sstream>

#include "doctest.h"
#include "rnlw/soliton.hpp"

using namespace rnlw;

namespace {

double ground_state(double r) { return std::sqrt(3.0) / std::sqrt(1.0 + 3.0 * r * r); }

double sup_rel_error(const SolitonProfile& s, double lo, double hi) {
  double worst = 0.0;
  for (std::size_t i = 0; i < s.grid.size(); ++i) {
    const double r = s.grid[i];
    if (r < lo || r > hi) continue;
    worst = std::max(worst, std::abs(s.y[i] / ground_state(r) - 1.0));
  }
  return worst;
}

}  // namespace

TEST_CASE("tail fixed point at p = 5") {
  auto t = soliton::tail_fixed_point(5.0, 10.0);
  // phi = sqrt(3) r (1 + 3 r^2)^{-1/2} - 1, mpmath
  CHECK(t.phi[0] == doctest::Approx(-0.0016625115404173227).epsilon(1e-10));
  CHECK(t.phi[0] == doctest::Approx(-1.0 / 600.0).epsilon(3e-3));
  CHECK(numerics::interpolate(t.grid, t.phi, 20.0) ==
        doctest::Approx(-0.00041640643071314015).epsilon(1e-9));
  const std::size_t i100 = t.grid.nearest(100.0);
  CHECK(t.phi[i100] == doctest::Approx(-1.6666250011573737e-5).epsilon(1e-9));
  CHECK(t.contraction_factor <= t.contraction_bound);
  CHECK(t.contraction_bound < 0.5);
  CHECK(t.envelope_slope <= 3.0 - 5.0 + 0.05);
}

TEST_CASE("tail fixed point rejects small R") {
  try {
    soliton::tail_fixed_point(4.0, 2.0);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Divergence);
  }
  CHECK_THROWS_AS(soliton::tail_fixed_point(3.0, 100.0), Error);
}

TEST_CASE("envelope slope for p < 5") {
  for (double p : {3.5, 4.0, 4.5}) {
    auto t = soliton::tail_fixed_point(p, soliton::default_tail_radius(p));
    CHECK(t.envelope_slope <= 3.0 - p + 0.05);
    CHECK(t.contraction_factor <= t.contraction_bound);
  }
}

TEST_CASE("p = 5 pipeline reproduces the ground state") {
  const auto t0 = std::chrono::steady_clock::now();
  auto tail = soliton::tail_fixed_point(5.0, 10.0);
  auto s = soliton::extend_inward(tail, 1e-3);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  CHECK(s.grid.r_min() <= 1e-2);
  CHECK(s.grid.r_max() >= 1e2);
  CHECK(sup_rel_error(s, 1e-2, 1e2) < 1e-6);
  CHECK(secs < 10.0);
  CHECK(s.lyapunov_violations == 0);
  CHECK(s.provenance == Provenance::BackwardExtension);
  // value() between nodes and beyond r_max
  for (double r : {0.0123, 0.5, 3.3, 77.7, 5e4})
    CHECK(s.value(r) == doctest::Approx(ground_state(r)).epsilon(1e-8));
  CHECK_THROWS_AS(s.value(1e-5), Error);
}

TEST_CASE("backward integration error shrinks under tolerance tightening") {
  // coarse lattice so the step control, not the output spacing, sets the steps
  soliton::TailOptions topt;
  topt.nodes_per_decade = 10;
  auto tail = soliton::tail_fixed_point(4.0, 40.0, topt);
  soliton::ExtendOptions tight;
  tight.rel_tol = 1e-13;
  tight.abs_tol = 1e-15;
  const auto ref = soliton::extend_inward(tail, 4e-3, tight);
  double prev = 1.0;
  for (double tol : {1e-7, 1e-9, 1e-11}) {
    soliton::ExtendOptions o;
    o.rel_tol = tol;
    o.abs_tol = tol * 1e-2;
    const auto s = soliton::extend_inward(tail, 4e-3, o);
    double e = 0.0;
    for (std::size_t i = 0; i < s.grid.size(); ++i)
      e = std::max(e, std::abs(s.y[i] / ref.y[i] - 1.0));
    CHECK(e < prev);
    CHECK(e > 0.0);
    prev = e;
  }
}

TEST_CASE("constructed profiles for p < 5") {
  for (double p : {3.5, 4.0, 4.5}) {
    const double R = soliton::default_tail_radius(p);
    auto s = soliton::extend_inward(soliton::tail_fixed_point(p, R), 1e-4 * R);
    CHECK(s.lyapunov_violations == 0);
    CHECK(s.ode_residual() < 1e-8);
    auto d = soliton::diagnostics(s);
    CHECK(d.nontrivial);
    CHECK(d.positive);
    CHECK(std::isfinite(d.tail_deviation));
    CHECK(std::isfinite(d.derivative_decay));
    CHECK(d.v_nonvanishing);
    CHECK(d.annulus_diverges);
    CHECK(d.v_monotone_outer);
    CHECK_FALSE(d.critical_case);
  }
}

TEST_CASE("diagnostics of the explicit p = 5 state and the zero profile") {
  auto d = soliton::diagnostics(soliton::aubin_talenti(1.0 / 3.0, 1));
  CHECK(d.critical_case);
  CHECK_FALSE(d.v_nonvanishing);
  CHECK_FALSE(d.annulus_diverges);
  CHECK(d.tail_deviation == doctest::Approx(1.0 / 6.0).epsilon(1e-3));

  auto z = soliton::aubin_talenti(1.0, 1);
  std::fill(z.y.begin(), z.y.end(), 0.0);
  std::fill(z.yp.begin(), z.yp.end(), 0.0);
  auto dz = soliton::diagnostics(z);
  CHECK_FALSE(dz.nontrivial);
  CHECK(dz.tail_deviation == 0.0);
  CHECK(dz.derivative_decay == 0.0);

  CHECK_THROWS_AS(soliton::diagnostics(soliton::aubin_talenti(
                      1.0, 1, make_grid(1.0, 100.0, 200, Spacing::Geometric))),
                  Error);
}

TEST_CASE("explicit singular family") {
  const double expected[] = {0.48044977359257249, 0.60570686427737989, 0.66899725092524545};
  int k = 0;
  for (double p : {3.5, 4.0, 4.5}) {
    CHECK(soliton::singular_constant(p) == doctest::Approx(expected[k++]).epsilon(1e-14));
    auto s = soliton::explicit_singular(p);
    CHECK(s.ode_residual() < 1e-12);
    // lambda^theta W(lambda r) = W(r)
    const double theta = 2.0 / (p - 1.0);
    for (double lam : {0.5, 3.0})
      for (double r : {0.01, 1.0, 40.0})
        CHECK(std::pow(lam, theta) * s.value(lam * r) == doctest::Approx(s.value(r)).epsilon(1e-12));
  }
  CHECK(soliton::singular_constant(4.0) == doctest::Approx(std::cbrt(2.0 / 9.0)).epsilon(1e-15));
  CHECK_THROWS_AS(soliton::explicit_singular(5.0), Error);
  CHECK_THROWS_AS(soliton::explicit_singular(3.0), Error);
}

TEST_CASE("Aubin-Talenti family") {
  auto w = soliton::aubin_talenti(1.0, 1);
  CHECK(w.value(w.grid.r_min()) == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(w.ode_residual() < 1e-12);
  auto m = soliton::aubin_talenti(2.0, -1);
  CHECK(m.ode_residual() < 1e-12);
  // lambda^{-1/2} W_1(r / lambda)
  for (double r : {0.001, 0.7, 9.0, 300.0})
    CHECK(-m.value(r) == doctest::Approx(w.value(r / 2.0) / std::sqrt(2.0)).epsilon(1e-12));
  CHECK_THROWS_AS(soliton::aubin_talenti(0.0, 1), Error);
  CHECK_THROWS_AS(soliton::aubin_talenti(1.0, 0), Error);
}

TEST_CASE("truncated soliton") {
  auto w = soliton::aubin_talenti(1.0 / 3.0, 1);
  auto V = soliton::truncated_soliton(w, 5.0);
  CHECK(V(0.0, 0.0) == doctest::Approx(ground_state(5.0)));
  CHECK(V(6.0, -2.0) == doctest::Approx(ground_state(7.0)));
  CHECK(V(9.0, 2.0) == doctest::Approx(ground_state(9.0)));

  auto z = w;
  std::fill(z.y.begin(), z.y.end(), 0.0);
  std::fill(z.yp.begin(), z.yp.end(), 0.0);
  auto nz = soliton::truncated_soliton_norms(z, 10.0);
  CHECK(nz.y_norm == 0.0);
  CHECK(nz.companion_norm == 0.0);
  CHECK_THROWS_AS(soliton::truncated_soliton_norms(w, 1e-6), Error);
}

TEST_CASE("V_R norm scaling at p = 4") {
  auto s = soliton::extend_inward(soliton::tail_fixed_point(4.0, 40.0), 4e-3);
  auto sc = soliton::truncated_soliton_scaling(s, {100, 200, 400, 800, 1600});
  CHECK(sc.expected_y_slope == doctest::Approx(-1.0 / 3.0));
  CHECK(sc.rows.front().y_q == doctest::Approx(48.0 / 11.0));
  CHECK(sc.rows.front().y_r == doctest::Approx(48.0 / 7.0));
  CHECK(std::abs(sc.y_slope + 1.0 / 3.0) < 0.05);
  CHECK(std::abs(sc.companion_slope + 0.5) < 0.05);
  CHECK(sc.within(0.05));
}

TEST_CASE("profile CSV") {
  auto w = soliton::aubin_talenti(1.0, 1, make_grid(1.0, 2.0, 3, Spacing::Geometric));
  std::ostringstream os;
  w.write_csv(os);
  CHECK(os.str().rfind("r,y,yp\n1,", 0) == 0);
  CHECK(soliton::loglog_slope({1, 10, 100}, {1, 0.1, 0.01}) == doctest::Approx(-1.0));
}
