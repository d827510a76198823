#include <cmath>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "json.hpp"
#include "rnlw/linear_wave.hpp"
#include "rnlw/nonlinear_wave.hpp"

using namespace rnlw;
using namespace rnlw::nonlinear;

namespace {

RadialGrid grid_h(double r_max, double h) {
  return make_grid(0.0, r_max, static_cast<std::size_t>(std::llround(r_max / h)) + 1, Spacing::Uniform);
}

FieldPair gaussian(const RadialGrid& g, double A) {
  return FieldPair::sample(g, [A](double r) { return A * std::exp(-r * r); });
}

double bump(double r, double a, double b) {
  if (r <= a || r >= b) return 0.0;
  const double x = (r - a) * (b - r) / ((b - a) * (b - a));
  return std::exp(-0.25 / x);
}

// u* = cos t e^{-r^2}; forcing = u*_tt - Lap u* - sigma |u*|^{p-1} u*
std::function<double(double, double)> manufactured(double p, Sign sign) {
  return [p, sign](double r, double t) {
    const double e = std::exp(-r * r), u = std::cos(t) * e;
    return -u - (4.0 * r * r - 6.0) * e * std::cos(t) - sign_value(sign) * std::pow(std::abs(u), p - 1.0) * u;
  };
}

}  // namespace

TEST_CASE("evolve: zero data stays zero") {
  auto g = grid_h(8.0, 0.05);
  EvolutionConfig c;
  c.t_final = 2.0;
  auto tr = evolve(FieldPair::zero(g), c);
  CHECK(tr.status == RunStatus::Completed);
  for (const auto& s : tr.snapshots)
    for (double v : s.field.u) CHECK(v == 0.0);
  CHECK(tr.final().t == doctest::Approx(2.0));
  CHECK(energy(FieldPair::zero(g), 4.0, Sign::Focusing) == 0.0);
}

TEST_CASE("energy: Gaussian oracle and the focusing zero-energy amplitude") {
  auto g = grid_h(8.0, 0.005);
  auto f = gaussian(g, 1.0);
  // mpmath oracle values (tests/oracles/oracles.py)
  CHECK(energy(f, 4.0, Sign::Defocusing) == doctest::Approx(3.0526611441984012).epsilon(1e-8));
  CHECK(energy(f, 4.0, Sign::Focusing) == doctest::Approx(2.8534425854475062).epsilon(1e-8));
  double lo = 1.0, hi = 5.0;
  CHECK(energy(gaussian(g, lo), 4.0, Sign::Focusing) > 0.0);
  CHECK(energy(gaussian(g, hi), 4.0, Sign::Focusing) < 0.0);
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    (energy(gaussian(g, mid), 4.0, Sign::Focusing) > 0.0 ? lo : hi) = mid;
  }
  CHECK(lo == doctest::Approx(3.0949746210460941).epsilon(1e-7));
}

TEST_CASE("configuration validation and CFL limit") {
  auto g = grid_h(4.0, 0.05);
  EvolutionConfig c;
  c.p = 3.0;
  CHECK_THROWS_AS(evolve(gaussian(g, 1.0), c), Error);
  c.p = 4.0;
  c.cfl = 1.2;
  CHECK_THROWS_AS(evolve(gaussian(g, 1.0), c), Error);
  // the origin row limits the stable Courant ratio to about 0.79
  const double lam = laplacian_spectral_radius(g) * g.step() * g.step();
  CHECK(lam > 6.0);
  CHECK(lam < 7.3);
  c.cfl = 0.95;
  CHECK_THROWS_AS(evolve(gaussian(g, 1.0), c), Error);
  c.cfl = 0.75;
  CHECK_NOTHROW(evolve(gaussian(g, 1.0), c));
}

TEST_CASE("manufactured solution converges at second order in both schemes") {
  for (auto scheme : {Scheme::LeapfrogU, Scheme::CharacteristicsW}) {
    for (auto sign : {Sign::Focusing, Sign::Defocusing}) {
      std::vector<double> errs;
      for (double h : {0.04, 0.02, 0.01}) {
        auto g = grid_h(8.0, h);
        EvolutionConfig c;
        c.p = 4.0;
        c.sign = sign;
        c.scheme = scheme;
        c.t_final = 2.0;
        c.forcing = manufactured(c.p, sign);
        auto tr = evolve(gaussian(g, 1.0), c);
        double e = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i)
          e = std::max(e, std::abs(tr.final().field.u[i] - std::cos(tr.final().t) * std::exp(-g[i] * g[i])));
        errs.push_back(e);
      }
      CHECK(std::log2(errs[0] / errs[1]) == doctest::Approx(2.0).epsilon(0.1));
      CHECK(std::log2(errs[1] / errs[2]) == doctest::Approx(2.0).epsilon(0.1));
    }
  }
}

TEST_CASE("the two schemes agree on an unforced run") {
  auto run = [](Scheme s, double h) {
    auto g = grid_h(10.0, h);
    EvolutionConfig c;
    c.p = 4.0;
    c.sign = Sign::Defocusing;
    c.scheme = s;
    c.t_final = 3.0;
    return evolve(gaussian(g, 1.5), c).final().field;
  };
  const auto a = run(Scheme::LeapfrogU, 0.01), b = run(Scheme::CharacteristicsW, 0.01);
  double diff = 0.0;
  for (std::size_t i = 0; i < a.u.size(); ++i) diff = std::max(diff, std::abs(a.u[i] - b.u[i]));
  CHECK(diff < 1e-3);
}

TEST_CASE("energy drift is second order") {
  std::vector<double> drift;
  for (double h : {0.04, 0.02, 0.01}) {
    auto g = grid_h(10.0, h);
    auto f = gaussian(g, 1.0);
    EvolutionConfig c;
    c.p = 4.0;
    c.t_final = 3.0;
    c.snapshot_every = 0.5;
    auto tr = evolve(f, c);
    const double e0 = energy(f, 4.0, c.sign);
    double d = 0.0;
    for (const auto& s : tr.snapshots) d = std::max(d, std::abs(energy(s.field, 4.0, c.sign) - e0));
    drift.push_back(d / std::max(e0, 1.0));
  }
  CHECK(drift[2] < 1e-4);
  CHECK(std::log2(drift[1] / drift[2]) == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("p = 5 ground state is stationary") {
  auto g = grid_h(60.0, 0.01);
  auto W = FieldPair::sample(g, [](double r) { return 1.0 / std::sqrt(1.0 + r * r / 3.0); });
  EvolutionConfig c;
  c.p = 5.0;
  c.sign = Sign::Focusing;
  c.t_final = 1.0;
  c.snapshot_every = 0.25;
  auto tr = evolve(W, c);
  CHECK(tr.status == RunStatus::Completed);
  const double e0 = ring_energy(W, 0.0, 10.0);
  for (const auto& s : tr.snapshots)
    CHECK(std::abs(ring_energy(s.field, 0.0, 10.0) - e0) / e0 < 1e-3);
}

TEST_CASE("time reversal returns the data at second order") {
  std::vector<double> errs;
  for (double h : {0.04, 0.02}) {
    auto g = grid_h(10.0, h);
    auto f = gaussian(g, 1.2);
    EvolutionConfig c;
    c.p = 4.0;
    c.t_final = 2.0;
    auto fwd = evolve(f, c).final().field;
    c.t_final = -2.0;
    auto back = evolve(fwd, c).final().field;
    double e = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) e = std::max(e, std::abs(back.u[i] - f.u[i]));
    errs.push_back(e);
  }
  CHECK(errs[1] < 1e-3);
  CHECK(errs[1] < errs[0]);
}

TEST_CASE("finite speed of propagation") {
  auto g = grid_h(12.0, 0.01);
  auto f = FieldPair::sample(g, [](double r) { return 0.5 * bump(r, 0.0, 2.0); });
  EvolutionConfig c;
  c.p = 4.0;
  c.sign = Sign::Focusing;
  c.t_final = 3.0;
  auto outer = [&](Scheme s) {
    c.scheme = s;
    auto last = evolve(f, c).final().field;
    double r = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i)
      if (std::abs(last.u[i]) > 1e-10) r = g[i];
    return r;
  };
  // the characteristic lattice is exactly causal; leapfrog at cfl 1/2 carries
  // dispersive precursors a few cells ahead of the cone
  CHECK(outer(Scheme::CharacteristicsW) <= 2.0 + 3.0 + g.step());
  CHECK(outer(Scheme::LeapfrogU) <= 2.0 + 3.0 + 20.0 * g.step());
}

TEST_CASE("classify: zero, defocusing bounded, focusing blow-up both directions") {
  auto g = grid_h(30.0, 0.04);
  EvolutionConfig c;
  c.p = 4.0;
  c.t_final = 20.0;
  c.snapshot_every = 5.0;
  CHECK(classify(evolve(FieldPair::zero(g), c), 10.0).verdict == Verdict::GlobalBounded);

  auto small = classify(evolve(gaussian(g, 1.0), c), 10.0);
  CHECK(small.verdict == Verdict::GlobalBounded);

  c.sign = Sign::Focusing;
  auto neg = gaussian(g, 4.0);
  CHECK(energy(neg, 4.0, Sign::Focusing) < 0.0);
  auto fwd = classify(evolve(neg, c), 10.0);
  CHECK(fwd.verdict == Verdict::Blowup);
  REQUIRE(fwd.t_est.has_value());
  CHECK(*fwd.t_est > 0.0);
  c.t_final = -20.0;
  auto bwd = classify(evolve(neg, c), 10.0);
  CHECK(bwd.verdict == Verdict::Blowup);
  REQUIRE(bwd.t_est.has_value());
  CHECK(*bwd.t_est < 0.0);
  CHECK(*bwd.t_est == doctest::Approx(-*fwd.t_est).epsilon(1e-6));

  // cap too small: not certified bounded
  c.sign = Sign::Defocusing;
  c.t_final = 2.0;
  CHECK(classify(evolve(gaussian(g, 1.0), c), 1e-3).verdict == Verdict::Undecided);
}

TEST_CASE("Morawetz report") {
  auto g = grid_h(20.0, 0.02);
  EvolutionConfig c;
  c.p = 4.0;
  c.t_final = 4.0;
  c.snapshot_every = 0.02;
  auto zero = morawetz_report(evolve(FieldPair::zero(g), c), 1.0);
  for (double t : zero.terms) CHECK(t == 0.0);
  CHECK(zero.sum_bounded);

  auto tr = evolve(gaussian(g, 1.5), c);
  double prev = 0.0;
  for (double R : {0.5, 1.0, 2.0}) {
    auto rep = morawetz_report(tr, R);
    CHECK(rep.terms.size() == 5);
    CHECK(rep.terms_nonnegative);
    CHECK(rep.sum_bounded);
    CHECK(rep.weighted_bounded);
    prev = rep.weighted_potential;
  }
  // weighted potential is nondecreasing in T
  Trajectory half = tr;
  half.snapshots.resize(tr.snapshots.size() / 2);
  CHECK(morawetz_report(half, 1.0).weighted_potential <= prev);
  auto j = nlohmann::json::parse(morawetz_report(tr, 1.0).to_json());
  CHECK(j["terms"].size() == 5);

  c.sign = Sign::Focusing;
  CHECK_THROWS_AS(morawetz_report(evolve(gaussian(g, 0.1), c), 1.0), Error);
}

TEST_CASE("perturbed evolution: trivial cases and the nonlinear scaling") {
  auto g = grid_h(12.0, 0.02);
  EvolutionConfig c;
  c.p = 4.0;
  c.sign = Sign::Focusing;
  c.t_final = 2.0;
  auto zero = perturbed_evolve({}, FieldPair::zero(g), c);
  CHECK(zero.deviation == 0.0);

  // V = 0 reduces to evolve
  auto h0 = gaussian(g, 0.3);
  auto pr = perturbed_evolve({}, h0, c);
  auto direct = evolve(h0, c).final().field;
  for (std::size_t i = 0; i < g.size(); ++i)
    CHECK(pr.h.back().field.u[i] == doctest::Approx(direct.u[i]).scale(1.0).epsilon(1e-12));

  std::vector<double> lx, ly;
  for (double d : {1e-1, 1e-2, 1e-3}) {
    auto r = perturbed_evolve({}, gaussian(g, d), c);
    lx.push_back(std::log(d));
    ly.push_back(std::log(r.ratio()));
  }
  const double slope = (ly[2] - ly[0]) / (lx[2] - lx[0]);
  CHECK(slope == doctest::Approx(3.0).epsilon(0.1));
}

TEST_CASE("support radius law") {
  // fine enough that sine-series aliasing of the bumps stays below 1e-10
  auto g = grid_h(20.0, 0.00125);
  std::vector<Snapshot> zero = {{0.0, FieldPair::zero(g)}, {1.0, FieldPair::zero(g)}};
  auto tz = support_radius_track(zero, 1e-10);
  CHECK(tz.samples[1].radius == 0.0);
  CHECK(tz.law_holds());

  auto f = FieldPair::sample(g, [](double r) { return r > 0 ? bump(r, 1.0, 2.0) / r : 0.0; },
                             [](double r) { return r > 0 ? 0.3 * bump(r, 1.2, 1.8) / r : 0.0; });
  std::vector<Snapshot> snaps;
  for (double t : {-4.0, -2.0, -1.0, 0.0, 0.5, 1.0, 3.0, 6.0}) snaps.push_back({t, linear::free_propagate(f, t)});
  auto tr = support_radius_track(snaps, 1e-10);
  CHECK(tr.forward_holds);
  CHECK(tr.backward_holds);

  // ingoing data w = F(r + t): the radius first shrinks
  auto in = FieldPair::sample(
      g, [](double r) { return r > 0 ? bump(r, 3.0, 4.0) / r : 0.0; },
      [](double r) {
        const double e = 1e-6;
        return r > 0 ? (bump(r + e, 3.0, 4.0) - bump(r - e, 3.0, 4.0)) / (2 * e) / r : 0.0;
      });
  std::vector<Snapshot> ins;
  for (double t : {0.0, 1.0, 2.0}) ins.push_back({t, linear::free_propagate(in, t)});
  auto ti = support_radius_track(ins, 1e-8);
  CHECK(ti.samples[1].radius < ti.samples[0].radius - 0.9);
  CHECK(!ti.forward_holds);

  auto wide = FieldPair::sample(g, [](double r) { return 1.0 / (1.0 + r); });
  CHECK_THROWS_AS(support_radius_track({{0.0, wide}}, 1e-10), Error);
}

TEST_CASE("trajectory persistence") {
  auto g = grid_h(8.0, 0.1);
  EvolutionConfig c;
  c.t_final = 0.5;
  c.snapshot_every = 0.25;
  auto tr = evolve(gaussian(g, 0.5), c);
  const auto dir = std::filesystem::temp_directory_path() / "rnlw_traj_test";
  std::filesystem::remove_all(dir);
  save_trajectory(tr, dir);
  std::ifstream st(dir / "status.json");
  auto j = nlohmann::json::parse(st);
  CHECK(j["status"] == "completed");
  std::ifstream cs(dir / "snapshots.csv");
  std::string header;
  std::getline(cs, header);
  CHECK(header == "t,r,u,ut");
  CHECK(std::filesystem::exists(dir / "config.json"));
  std::filesystem::remove_all(dir);
}
