#include <cmath>
#include <sstream>

#include "doctest.h"
#include "rnlw/analysis.hpp"

using namespace rnlw;
using namespace rnlw::analysis;

TEST_CASE("rational conversion") {
  CHECK(to_rational(3.5) == Rational(7, 2));
  CHECK(to_rational(4.0) == Rational(4));
  CHECK(to_rational(0.1) == Rational(1, 10));
  CHECK(analysis::to_string(Rational(5, 6)) == "5/6");
  CHECK_THROWS_AS(to_rational(std::sqrt(2.0)), Error);
}

TEST_CASE("critical exponent") {
  CHECK(critical_exponent(4) == Rational(5, 6));
  CHECK(critical_exponent(5) == Rational(1));
  CHECK(critical_exponent(3) == Rational(1, 2));
  CHECK_THROWS_AS(critical_exponent(1), Error);
}

TEST_CASE("admissibility") {
  auto a = admissibility_check(Rational(1, 4), Rational(1, 4), Rational(1, 2));
  CHECK(a.admissible());
  auto b = admissibility_check(0, Rational(1, 6), 1);
  CHECK(b.admissible());
  // S pair at p = 4 is s_p-admissible
  auto c = admissibility_check(Rational(1, 6), Rational(1, 6), critical_exponent(4));
  CHECK(c.admissible());
  auto d = admissibility_check(Rational(1, 4), Rational(1, 4), Rational(1, 3));
  CHECK_FALSE(d.admissible());
  CHECK(d.sum_ok);
  CHECK(d.certificate().find("!=") != std::string::npos);
  auto e = admissibility_check(Rational(1, 2), Rational(1, 2), Rational(-1, 2));
  CHECK_FALSE(e.sum_ok);
  CHECK_THROWS_AS(admissibility_check(1, Rational(1, 4), 0), Error);
}

TEST_CASE("interpolation pair") {
  auto k = interpolation_kappa(4, Rational(5, 6));
  CHECK(k.kappa == Rational(1, 4));
  CHECK(k.inv_q == Rational(11, 36));
  CHECK(k.check.admissible());
  for (Rational p : {Rational(7, 2), Rational(4), Rational(9, 2), Rational(5)}) {
    const Rational sp = critical_exponent(p);
    for (Rational s : {sp, (sp + 1) / 2, Rational(99, 100)}) {
      if (s < sp || s >= 1) continue;
      auto kk = interpolation_kappa(p, s);
      CHECK(kk.check.admissible());
      CHECK(kk.inv_q > Rational(0));
      CHECK(kk.inv_q < Rational(1, 3));
      CHECK(kk.inv_r > Rational(1, 36));
      CHECK(kk.inv_r < Rational(1, 4));
    }
  }
  CHECK_THROWS_AS(interpolation_kappa(4, Rational(1, 2)), Error);
  CHECK_THROWS_AS(interpolation_kappa(4, 1), Error);
  CHECK_THROWS_AS(interpolation_kappa(6, Rational(9, 10)), Error);
}

TEST_CASE("regularity constants at p = 4") {
  auto e = regularity_constants(4);
  CHECK(e.s_p == Rational(5, 6));
  CHECK(e.kappa == Rational(1, 4));
  CHECK(e.sigma == Rational(3, 8));
  CHECK(e.sigma1 == Rational(1, 24));
  CHECK(e.sigma2 == Rational(1, 24));
  CHECK(e.s1 == Rational(5, 6) + Rational(99, 2400));
  CHECK(e.beta * (1 - Rational(1, 10000)) == Rational(2, 3));
  for (Rational p : {Rational(7, 2), Rational(4), Rational(9, 2), Rational(49, 10)}) {
    auto r = regularity_constants(p);
    CHECK(r.sigma2 <= r.sigma1);
    CHECK(r.kappa > 0);
    CHECK(r.kappa < Rational(2, 5));
  }
  CHECK(e.to_json().find("\"5/6\"") != std::string::npos);
  CHECK_THROWS_AS(regularity_constants(5), Error);
}

TEST_CASE("norm exponents") {
  auto [q, r] = norm_exponents({NormKind::Y, 5.0 / 6.0}, 4.0);
  CHECK(q == doctest::Approx(48.0 / 11.0));
  CHECK(r == doctest::Approx(48.0 / 7.0));
  auto [qs, rs] = norm_exponents({NormKind::S}, 4.0);
  CHECK(qs == 6.0);
  CHECK(rs == 6.0);
  auto [qz, rz] = norm_exponents({NormKind::Z, 1.0}, 4.0);
  CHECK(qz == 1.0);
  CHECK(rz == 2.0);
  // s + 1 - 6 (s - 5/6) < 0 for s > 6/5
  CHECK_THROWS_AS(norm_exponents({NormKind::Y, 1.5}, 4.0), Error);
  CHECK_THROWS_AS(norm_exponents({NormKind::Z, 2.0}, 4.0), Error);
}

namespace {

std::vector<Snapshot> separable(double amp, std::size_t nt) {
  auto g = make_grid(0.0, 8.0, 4001, Spacing::Uniform);
  std::vector<Snapshot> out;
  for (std::size_t j = 0; j < nt; ++j) {
    const double t = 2.0 * static_cast<double>(j) / static_cast<double>(nt - 1);
    const double a = amp * (1.0 + t * t);
    out.push_back({t, FieldPair::sample(g, [a](double r) { return a * std::exp(-r * r); })});
  }
  return out;
}

}  // namespace

TEST_CASE("space-time norms") {
  auto snaps = separable(1.0, 401);
  // ||e^{-r^2}||_{L^4}^4 = 4 pi int r^2 e^{-4 r^2} = pi^{3/2} / 8;
  // int_0^2 (1 + t^2)^4 dt = 2 + 32/3 + 192/5 + 512/7 + 512/9
  const double pi = 3.14159265358979323846;
  const double time_int = 2.0 + 32.0 / 3.0 + 192.0 / 5.0 + 512.0 / 7.0 + 512.0 / 9.0;
  const double expected = std::pow(time_int * std::pow(pi, 1.5) / 8.0, 0.25);
  auto n = spacetime_norm(snaps, {NormKind::W}, 4.0, 0.0, 2.0);
  CHECK(n.value == doctest::Approx(expected).epsilon(1e-6));
  CHECK(n.time_error < 1e-5 * n.value);
  // homogeneity
  auto n3 = spacetime_norm(separable(3.0, 401), {NormKind::W}, 4.0, 0.0, 2.0);
  CHECK(n3.value == doctest::Approx(3.0 * n.value).epsilon(1e-12));
  // zero trajectory
  auto z = separable(0.0, 5);
  for (NormKind k : {NormKind::S, NormKind::W, NormKind::Z, NormKind::Y})
    CHECK(spacetime_norm(z, {k, 5.0 / 6.0}, 4.0, 0.0, 2.0).value == 0.0);
  auto sup = spacetime_norm(snaps, {NormKind::LqLr, 0.0, INFINITY, 4.0}, 4.0, 0.0, 2.0);
  CHECK(sup.value == doctest::Approx(5.0 * std::pow(pi, 1.5 / 4.0) / std::pow(8.0, 0.25)).epsilon(1e-8));
  CHECK_THROWS_AS(spacetime_norm(snaps, {NormKind::W}, 4.0, 5.0, 6.0), Error);
}

TEST_CASE("ladder") {
  CHECK(ladder_g(1.0) == 1.0);
  CHECK(ladder_increment(1.0) == 0.0);
  CHECK(ladder_g(0.5) == doctest::Approx(0.96592582628906829).epsilon(1e-15));
  CHECK(ladder_increment(0.5) == doctest::Approx(0.024791109686524929).epsilon(1e-13));
  CHECK(ladder_g_convex(10000));
  for (double p : {3.5, 4.0, 4.5}) {
    auto st = decay_ladder(p, 2.0 / (p - 1.0));
    CHECK(st.reached);
    CHECK(st.increments_positive);
    CHECK(st.increment.size() < 100000);
    CHECK(st.beta.back() < 1.0);
  }
  std::ostringstream os;
  decay_ladder(4.0, 2.0 / 3.0).write_csv(os);
  CHECK(os.str().rfind("n,beta,g,increment\n0,", 0) == 0);
  CHECK_THROWS_AS(decay_ladder(4.0, 0.5), Error);
  CHECK_THROWS_AS(decay_ladder(4.0, 1.0), Error);
}

TEST_CASE("recurrence checker") {
  const double ln2 = std::log(2.0);
  const double omega = 0.04;
  auto power = LogLattice::sample([&](double x) { return -omega * x * ln2; }, 1.0, 20000.0);
  auto r = recurrence_decay_check(power, 1.0 / 3.0, 2.0 / 3.0, 3.0, omega, 1.0);
  CHECK(r.verdict == RecurrenceVerdict::Holds);
  CHECK(r.fitted_exponent == doctest::Approx(omega).epsilon(1e-9));
  CHECK(r.log2_A0.has_value());

  auto twice = LogLattice::sample([&](double x) { return std::log(2.0) - omega * x * ln2; }, 1.0,
                                  20000.0);
  auto r2 = recurrence_decay_check(twice, 1.0 / 3.0, 2.0 / 3.0, 3.0, omega, 2.0);
  CHECK(r2.verdict == RecurrenceVerdict::Holds);
  CHECK(r2.reached_exponent >= 0.99 * omega - 1e-12);

  auto slow = LogLattice::sample([&](double x) { return -std::log(x * ln2); }, 1.0, 20000.0);
  auto r3 = recurrence_decay_check(slow, 1.0 / 3.0, 2.0 / 3.0, 3.0, omega, 2.0);
  CHECK(r3.verdict == RecurrenceVerdict::PremiseViolated);
  REQUIRE(r3.witness_log2_A.has_value());
  CHECK(*r3.witness_log2_A > 1.0);

  CHECK_THROWS_AS(recurrence_decay_check(power, 0.1, 0.5, 3.0, omega, 1.0), Error);
}

TEST_CASE("f_beta profile") {
  auto g = make_grid(0.0, 64.0, 6401, Spacing::Uniform);
  std::vector<Snapshot> zero{{0.0, FieldPair::zero(g)}, {1.0, FieldPair::zero(g)}};
  auto fz = fbeta_profile(zero, 4.0, 0.5);
  for (double v : fz.f) CHECK(v == 0.0);
  CHECK(fz.fitted_C == 0.0);

  // static W_1 at p = 4: r^beta C r^{-2/3}
  const double C = std::cbrt(2.0 / 9.0);
  auto w1 = FieldPair::sample(g, [C](double r) { return r > 0 ? C * std::pow(r, -2.0 / 3.0) : 0.0; });
  std::vector<Snapshot> stat{{0.0, w1}, {1.0, w1}};
  auto f_low = fbeta_profile(stat, 4.0, 0.5);
  auto f_crit = fbeta_profile(stat, 4.0, 2.0 / 3.0);
  auto f_high = fbeta_profile(stat, 4.0, 0.9);
  CHECK(f_low.nonincreasing);
  CHECK(f_low.outer_slope < 0.0);
  CHECK(std::abs(f_crit.outer_slope) < 1e-9);
  CHECK(f_high.outer_slope == doctest::Approx(0.9 - 2.0 / 3.0).epsilon(1e-6));
  CHECK(f_crit.f.front() == doctest::Approx(C).epsilon(1e-12));
}
