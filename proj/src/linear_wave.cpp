#include "rnlw/linear_wave.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "json.hpp"
#include "rnlw/spectral.hpp"

namespace rnlw {

namespace {

constexpr double kPi = 3.14159265358979323846;

double sup_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

SupportAnnulus support_above(const FieldPair& f, double level) {
  SupportAnnulus s;
  for (std::size_t i = 0; i < f.grid.size(); ++i) {
    if (std::abs(f.u[i]) > level || std::abs(f.ut[i]) > level) {
      if (s.empty) s.inner = f.grid[i];
      s.empty = false;
      s.outer = f.grid[i];
    }
  }
  return s;
}

double data_scale(const FieldPair& f) { return std::max(sup_abs(f.u), sup_abs(f.ut)); }

void require_lattice_grid(const RadialGrid& g) {
  if (!(g.spacing() == Spacing::Uniform && g.r_min() == 0.0))
    fail(ErrorKind::InvalidArgument, "linear propagation needs a uniform grid starting at r = 0");
}

// u-domain samples of a w-domain source: h / r, with the r = 0 node unused by
// the lattice transform.
std::vector<double> divide_by_r(const RadialGrid& g, std::span<const double> h) {
  std::vector<double> out(g.size(), 0.0);
  for (std::size_t i = 1; i < g.size(); ++i) out[i] = h[i] / g[i];
  return out;
}

const LinearState& snapshot_at(const ReducedTrajectory& traj, double t) {
  for (const auto& s : traj)
    if (std::abs(s.t - t) <= 1e-9 * std::max(1.0, std::abs(t))) return s;
  fail(ErrorKind::OutOfDomain, "trajectory has no snapshot at t = " + io::format_double(t));
}

const std::vector<double>& gauss_nodes16() {
  static const std::vector<double> x = {
      -0.9894009349916499, -0.9445750230732326, -0.8656312023878318, -0.7554044083550030,
      -0.6178762444026438, -0.4580167776572274, -0.2816035507792589, -0.0950125098376374,
      0.0950125098376374,  0.2816035507792589,  0.4580167776572274,  0.6178762444026438,
      0.7554044083550030,  0.8656312023878318,  0.9445750230732326,  0.9894009349916499};
  return x;
}

const std::vector<double>& gauss_weights16() {
  static const std::vector<double> w = {
      0.0271524594117541, 0.0622535239386479, 0.0951585116824928, 0.1246289712555339,
      0.1495959888165767, 0.1691565193950025, 0.1826034150449236, 0.1894506104550685,
      0.1894506104550685, 0.1826034150449236, 0.1691565193950025, 0.1495959888165767,
      0.1246289712555339, 0.0951585116824928, 0.0622535239386479, 0.0271524594117541};
  return w;
}

}  // namespace

CharacteristicFields characteristic_fields(const ReducedPair& w) {
  const auto wr = numerics::derivative(w.grid, w.w);
  CharacteristicFields z{w.grid, std::vector<double>(wr.size()), std::vector<double>(wr.size())};
  for (std::size_t i = 0; i < wr.size(); ++i) {
    z.z1[i] = w.wt[i] - wr[i];
    z.z2[i] = w.wt[i] + wr[i];
  }
  return z;
}

double recombination_defect(const ReducedPair& w, const CharacteristicFields& z) {
  const auto wr = numerics::derivative(w.grid, w.w);
  double worst = 0.0;
  for (std::size_t i = 0; i < wr.size(); ++i)
    worst = std::max({worst, std::abs(z.z1[i] + z.z2[i] - 2.0 * w.wt[i]),
                      std::abs(z.z2[i] - z.z1[i] - 2.0 * wr[i])});
  return worst;
}

SupportAnnulus measured_support(const FieldPair& f, double tol) {
  const double scale = data_scale(f);
  if (scale == 0.0) return {};
  return support_above(f, tol * scale);
}

namespace linear {

FieldPair free_propagate(const FieldPair& f, double t, const PropagateOptions& opt) {
  require(std::isfinite(t), "free_propagate: time must be finite");
  if (t == 0.0) return f;
  const RadialGrid& g = f.grid;
  require_lattice_grid(g);
  const auto sup = measured_support(f, opt.support_tol);
  if (sup.empty) return FieldPair::zero(g);
  if (!opt.allow_truncation && sup.outer + std::abs(t) >= g.r_max() - g.step())
    fail(ErrorKind::Truncation, "free_propagate: data support " + io::format_double(sup.outer) +
                                    " plus |t| reaches r_max");
  const Spectrum a = spectral::radial_fourier(g, f.u);
  const Spectrum b = spectral::radial_fourier(g, f.ut);
  Spectrum u = a, ut = a;
  for (std::size_t k = 0; k < a.rho.size(); ++k) {
    const double q = a.rho[k], c = std::cos(q * t), s = std::sin(q * t);
    u.fhat[k] = c * a.fhat[k] + s / q * b.fhat[k];
    ut.fhat[k] = -q * s * a.fhat[k] + c * b.fhat[k];
  }
  return FieldPair(g, spectral::inverse_radial_fourier(g, u),
                   spectral::inverse_radial_fourier(g, ut));
}

double reduced_energy(const FieldPair& f) {
  const RadialGrid& g = f.grid;
  require_lattice_grid(g);
  // sine coefficient of w is rho_k fhat_k / (2 pi r_max)
  const Spectrum a = spectral::radial_fourier(g, f.u);
  const Spectrum b = spectral::radial_fourier(g, f.ut);
  const double c = 1.0 / (2.0 * kPi * g.r_max());
  double acc = 0.0;
  for (std::size_t k = 0; k < a.rho.size(); ++k) {
    const double q = a.rho[k], bw = c * q * a.fhat[k], bt = c * q * b.fhat[k];
    acc += q * q * bw * bw + bt * bt;
  }
  return 0.5 * g.r_max() * acc;
}

double dalembert_w(const std::function<double(double)>& w0,
                   const std::function<double(double)>& w1, double r, double t) {
  auto odd = [](const std::function<double(double)>& fn, double x) {
    return x >= 0.0 ? fn(x) : -fn(-x);
  };
  double out = 0.5 * (odd(w0, r + t) + odd(w0, r - t));
  if (w1) {
    // int_{r-t}^{r+t} of the odd extension, composite Gauss on unit panels.
    const double lo = std::min(r - t, r + t), hi = std::max(r - t, r + t);
    const int panels = std::max(1, static_cast<int>(std::ceil((hi - lo) * 16.0)));
    const double width = (hi - lo) / panels;
    double acc = 0.0;
    for (int p = 0; p < panels; ++p) {
      const double mid = lo + (p + 0.5) * width;
      for (std::size_t k = 0; k < 16; ++k)
        acc += gauss_weights16()[k] * odd(w1, mid + 0.5 * width * gauss_nodes16()[k]);
    }
    acc *= 0.5 * width;
    out += 0.5 * (t >= 0.0 ? acc : -acc);
  }
  return out;
}

namespace {

DuhamelResult duhamel_sum(const RadialGrid& g,
                          const std::function<std::vector<double>(std::size_t)>& sample,
                          const std::vector<double>& taus, const std::vector<double>& weights,
                          double t1) {
  require_lattice_grid(g);
  const std::size_t m = g.size() - 2;
  std::vector<double> A(m, 0.0), B(m, 0.0);
  Spectrum lattice;
  for (std::size_t j = 0; j < taus.size(); ++j) {
    const auto hj = sample(j);
    require(hj.size() == g.size(), "duhamel_integrate: source sample count mismatch");
    lattice = spectral::radial_fourier(g, divide_by_r(g, hj));
    for (std::size_t k = 0; k < m; ++k) {
      const double q = lattice.rho[k], lag = t1 - taus[j];
      A[k] += weights[j] * std::sin(q * lag) / q * lattice.fhat[k];
      B[k] += weights[j] * std::cos(q * lag) * lattice.fhat[k];
    }
  }
  DuhamelResult out;
  if (taus.empty()) {
    out.pair = FieldPair::zero(g);
    return out;
  }
  Spectrum sa = lattice, sb = lattice;
  sa.fhat = std::move(A);
  sb.fhat = std::move(B);
  out.pair = FieldPair(g, spectral::inverse_radial_fourier(g, sa),
                       spectral::inverse_radial_fourier(g, sb));
  return out;
}

}  // namespace

DuhamelResult duhamel_integrate(const SourceSamples& h, double t0, double t1) {
  const RadialGrid& g = h.grid;
  require(h.times.size() == h.h.size(), "duhamel_integrate: one sample row per time");
  require(t0 <= t1, "duhamel_integrate: need t0 <= t1");
  if (t0 == t1) return {FieldPair::zero(g), {}};
  const double eps = 1e-9 * std::max(1.0, std::abs(t1));
  std::size_t i0 = h.times.size(), i1 = h.times.size();
  for (std::size_t j = 0; j < h.times.size(); ++j) {
    if (j > 0) require(h.times[j] > h.times[j - 1], "duhamel_integrate: times must increase");
    if (std::abs(h.times[j] - t0) <= eps) i0 = j;
    if (std::abs(h.times[j] - t1) <= eps) i1 = j;
  }
  if (i0 == h.times.size() || i1 == h.times.size())
    fail(ErrorKind::OutOfDomain, "duhamel_integrate: t0 and t1 must be sample times");
  std::vector<double> taus, weights;
  double max_dt = 0.0;
  for (std::size_t j = i0; j <= i1; ++j) {
    const double left = j > i0 ? h.times[j] - h.times[j - 1] : 0.0;
    const double right = j < i1 ? h.times[j + 1] - h.times[j] : 0.0;
    taus.push_back(h.times[j]);
    weights.push_back(0.5 * (left + right));
    max_dt = std::max(max_dt, right);
  }
  auto out = duhamel_sum(
      g, [&](std::size_t j) { return h.h[i0 + j]; }, taus, weights, t1);
  if (max_dt > g.step())
    out.warnings.push_back("time step " + io::format_double(max_dt) +
                           " exceeds the grid spacing; oscillatory modes are under-resolved");
  return out;
}

DuhamelResult duhamel_integrate(const RadialGrid& g,
                                const std::function<double(double, double)>& h, double t0,
                                double t1, std::size_t steps) {
  require(t0 <= t1, "duhamel_integrate: need t0 <= t1");
  require(steps >= 1, "duhamel_integrate: need at least one step");
  if (t0 == t1) return {FieldPair::zero(g), {}};
  const double dt = (t1 - t0) / static_cast<double>(steps);
  std::vector<double> taus(steps), weights(steps, dt);
  for (std::size_t j = 0; j < steps; ++j) taus[j] = t0 + (j + 0.5) * dt;
  auto out = duhamel_sum(
      g,
      [&](std::size_t j) {
        std::vector<double> v(g.size());
        for (std::size_t i = 0; i < g.size(); ++i) v[i] = h(g[i], taus[j]);
        return v;
      },
      taus, weights, t1);
  if (dt > g.step())
    out.warnings.push_back("time step " + io::format_double(dt) +
                           " exceeds the grid spacing; oscillatory modes are under-resolved");
  return out;
}

double exterior_energy(const FieldPair& f, double t, double R) {
  require(R >= 0.0, "exterior_energy: R must be nonnegative");
  const double a = R + std::abs(t);
  if (a >= f.grid.r_max())
    fail(ErrorKind::OutOfDomain, "exterior_energy: R + |t| lies outside the grid");
  return ring_energy(free_propagate(f, t), a, f.grid.r_max());
}

std::string to_string(Direction d) {
  switch (d) {
    case Direction::Forward: return "forward";
    case Direction::Backward: return "backward";
    case Direction::Both: return "both";
    default: return "none";
  }
}

std::string ChannelReport::to_json() const {
  nlohmann::json j;
  j["R"] = R;
  j["direction"] = to_string(direction);
  j["worst_margin"] = worst_margin;
  j["margins"] = nlohmann::json::array();
  for (const auto& m : margins) j["margins"].push_back({{"t", m.t}, {"lhs", m.lhs}, {"rhs", m.rhs}});
  return j.dump();
}

FieldPair time_reversed(const FieldPair& f) {
  FieldPair out = f;
  for (auto& v : out.ut) v = -v;
  return out;
}

ChannelReport channel_check(const FieldPair& f, double R, const std::vector<double>& times,
                            double tol) {
  require(R >= 0.0 && R < f.grid.r_max(), "channel_check: R outside the grid");
  require(!times.empty(), "channel_check: no times given");
  for (double t : times) require(t > 0.0, "channel_check: times must be positive");
  const ReducedPair w = to_reduced(f);
  const auto wr = numerics::derivative(f.grid, w.w);
  std::vector<double> dens(wr.size());
  for (std::size_t i = 0; i < dens.size(); ++i) dens[i] = wr[i] * wr[i] + w.wt[i] * w.wt[i];
  const double rhs = 2.0 * kPi * numerics::integrate(f.grid, dens, R, f.grid.r_max());
  const double slack = tol * std::max(1.0, rhs);

  ChannelReport rep;
  rep.R = R;
  double fwd = INFINITY, bwd = INFINITY;
  for (double t : times) {
    const double lf = exterior_energy(f, t, R), lb = exterior_energy(f, -t, R);
    rep.margins.push_back({t, lf, rhs});
    rep.margins.push_back({-t, lb, rhs});
    fwd = std::min(fwd, lf - rhs);
    bwd = std::min(bwd, lb - rhs);
  }
  const bool ok_f = fwd >= -slack, ok_b = bwd >= -slack;
  rep.direction = ok_f && ok_b ? Direction::Both
                  : ok_f       ? Direction::Forward
                  : ok_b       ? Direction::Backward
                               : Direction::None;
  rep.worst_margin = std::max(fwd, bwd);
  if (rep.direction == Direction::None)
    fail(ErrorKind::Numerical, "channel_check: no time direction carries the channel energy (margin " +
                                   io::format_double(rep.worst_margin) + ")");
  return rep;
}

double transport_residual(const ReducedTrajectory& traj,
                          const std::function<double(double, double)>& h, double r0,
                          double t0, double M, Family which) {
  require(r0 > 0.0 && M >= 0.0, "transport_residual: need r0 > 0 and M >= 0");
  const double sign = which == Family::Z1 ? 1.0 : -1.0;
  const LinearState& early = snapshot_at(traj, t0);
  const LinearState& late = snapshot_at(traj, t0 + sign * M);
  const RadialGrid& g = early.pair.grid;
  if (r0 < g.r_min() || 4.0 * r0 + M > g.r_max())
    fail(ErrorKind::OutOfDomain, "transport_residual: window leaves the grid");

  auto window = [&](const ReducedPair& w, double a) {
    const auto z = characteristic_fields(w);
    const auto& zz = which == Family::Z1 ? z.z1 : z.z2;
    std::vector<double> sq(zz.size());
    for (std::size_t i = 0; i < zz.size(); ++i) sq[i] = zz[i] * zz[i];
    return std::sqrt(std::max(0.0, numerics::integrate(w.grid, sq, a, a + 3.0 * r0)));
  };
  const double before = window(early.pair, r0);
  const double after = window(late.pair, r0 + M);

  double bound = 0.0;
  if (h && M > 0.0) {
    const int panels = std::max(1, static_cast<int>(std::ceil(8.0 * M)));
    const double width = M / panels;
    std::vector<double> sq(g.size(), 0.0);
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double r = g[i];
      if (r < r0 - g.step() * 4 || r > 4.0 * r0 + g.step() * 4) continue;
      double acc = 0.0;
      for (int p = 0; p < panels; ++p) {
        const double mid = (p + 0.5) * width;
        for (std::size_t k = 0; k < 16; ++k) {
          const double s = mid + 0.5 * width * gauss_nodes16()[k];
          acc += gauss_weights16()[k] * h(r + s, t0 + sign * s);
        }
      }
      acc *= 0.5 * width;
      sq[i] = acc * acc;
    }
    bound = std::sqrt(std::max(0.0, numerics::integrate(g, sq, r0, 4.0 * r0)));
  }
  return std::abs(after - before) - bound;
}

SupportAnnulus huygens_support(const FieldPair& f, double t) {
  const double scale = data_scale(f);
  if (scale == 0.0) return {};
  const auto in = support_above(f, 1e-12 * scale);
  if (in.outer >= f.grid.r_max() - f.grid.step())
    fail(ErrorKind::InvalidArgument, "huygens_support: data is not compactly supported on the grid");
  if (t == 0.0) return in;
  return support_above(free_propagate(f, t), 1e-10 * scale);
}

namespace {

// C-infinity bump supported on [a, b]
double bump(double r, double a, double b) {
  if (r <= a || r >= b) return 0.0;
  const double x = (r - a) * (b - r) / ((b - a) * (b - a));
  return std::exp(-0.25 / x);
}

Direction mirrored(Direction d) {
  if (d == Direction::Forward) return Direction::Backward;
  if (d == Direction::Backward) return Direction::Forward;
  return d;
}

}  // namespace

std::string ChannelSuite::to_json() const {
  nlohmann::json j;
  j["seed"] = seed;
  j["count"] = entries.size();
  j["passed"] = passed;
  j["flipped"] = flipped;
  j["entries"] = nlohmann::json::array();
  for (const auto& e : entries) {
    nlohmann::json ej = nlohmann::json::parse(e.report.to_json());
    ej["reversed_direction"] = to_string(e.reversed);
    ej["passed"] = e.passed;
    ej["flipped"] = e.flipped;
    if (!e.error.empty()) ej["error"] = e.error;
    j["entries"].push_back(ej);
  }
  return j.dump(2);
}

ChannelSuite channel_suite(std::size_t n, std::uint64_t seed, double tol) {
  const auto g = make_grid(0.0, 24.0, 2049, Spacing::Uniform);
  const std::vector<double> times = {0.5, 1.0, 2.0, 4.0, 8.0};
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ud(-1.0, 1.0), ur(0.5, 2.0);
  ChannelSuite suite;
  suite.seed = seed;
  for (std::size_t k = 0; k < n; ++k) {
    const double a0 = ud(rng), a1 = ud(rng), c = 2.0 + ud(rng), R = ur(rng);
    auto f = FieldPair::sample(
        g, [&](double r) { return a0 * bump(r, 0.0, c) + 0.3 * bump(r, 1.0, 1.0 + c); },
        [&](double r) { return a1 * bump(r, 0.5, c + 0.5); });
    ChannelSuiteEntry e;
    try {
      e.report = channel_check(f, R, times, tol);
      e.passed = e.report.direction != Direction::None;
      e.reversed = channel_check(time_reversed(f), R, times, tol).direction;
      e.flipped = e.reversed == mirrored(e.report.direction);
    } catch (const Error& err) {
      if (err.kind() != ErrorKind::Numerical) throw;
      e.report.R = R;
      e.error = err.what();
    }
    suite.passed += e.passed;
    suite.flipped += e.flipped;
    suite.entries.push_back(std::move(e));
  }
  return suite;
}

}  // namespace linear

}  // namespace rnlw
