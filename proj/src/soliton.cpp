#include "rnlw/soliton.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <memory>
#include <ostream>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/numeric/odeint.hpp>

#include "json.hpp"

namespace rnlw {

namespace {

constexpr double kPi = 3.14159265358979323846;

double power_nl(double x, double p) { return std::pow(std::abs(x), p - 1.0) * x; }

// int_T^inf t^k dt for k < -1
double power_tail(double T, double k) { return std::pow(T, k + 1.0) / (-k - 1.0); }

// Integrals from x_i to the last node of uniformly spaced samples, fourth
// order: interior cells use the centred cubic, the end cells one-sided ones.
std::vector<double> reverse_cumulative(const std::vector<double>& f, double dx) {
  const std::size_t n = f.size();
  std::vector<double> c(n, 0.0);
  for (std::size_t i = n - 1; i-- > 0;) {
    double seg;
    if (i == 0)
      seg = dx / 24.0 * (9 * f[0] + 19 * f[1] - 5 * f[2] + f[3]);
    else if (i + 2 >= n)
      seg = dx / 24.0 * (f[i - 2] - 5 * f[i - 1] + 19 * f[i] + 9 * f[i + 1]);
    else
      seg = dx / 24.0 * (-f[i - 1] + 13 * f[i] + 13 * f[i + 1] - f[i + 2]);
    c[i] = c[i + 1] + seg;
  }
  return c;
}

double sup_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::nth_element(v.begin(), v.begin() + v.size() / 2, v.end());
  return v[v.size() / 2];
}

}  // namespace

std::string to_string(Provenance p) {
  switch (p) {
    case Provenance::FixedPointTail: return "fixed_point_tail";
    case Provenance::BackwardExtension: return "backward_extension";
    case Provenance::Explicit: return "explicit";
  }
  return "?";
}

double SolitonProfile::value(double r) const {
  require(grid.size() >= 2, "soliton profile is empty");
  if (r < grid.r_min()) fail(ErrorKind::OutOfDomain, "radius below the profile range");
  const std::size_t n = grid.size();
  if (r >= grid.r_max()) {
    const double T = grid.r_max();
    const double yT = y[n - 1], ypT = yp[n - 1];
    // r y = A + B r^{3-p}
    const double B = (yT + T * ypT) * std::pow(T, p - 2.0) / (3.0 - p);
    const double A = T * yT - B * std::pow(T, 3.0 - p);
    return (A + B * std::pow(r, 3.0 - p)) / r;
  }
  const std::size_t c = grid.cell_of(r);
  const double a = grid[c], b = grid[c + 1], h = b - a;
  const double s = (r - a) / h;
  const double h00 = (1 + 2 * s) * (1 - s) * (1 - s), h10 = s * (1 - s) * (1 - s);
  const double h01 = s * s * (3 - 2 * s), h11 = s * s * (s - 1);
  return h00 * y[c] + h10 * h * yp[c] + h01 * y[c + 1] + h11 * h * yp[c + 1];
}

double SolitonProfile::ode_residual() const {
  double worst = 0.0;
  for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
    const double r = grid[i];
    const double t1 = ypp[i], t2 = 2.0 * yp[i] / r, t3 = power_nl(y[i], p);
    const double scale = std::abs(t1) + std::abs(t2) + std::abs(t3);
    if (scale > 0.0) worst = std::max(worst, std::abs(t1 + t2 + t3) / scale);
  }
  return worst;
}

void SolitonProfile::write_csv(std::ostream& os) const {
  os << "r,y,yp\n";
  for (std::size_t i = 0; i < grid.size(); ++i)
    os << io::format_double(grid[i]) << ',' << io::format_double(y[i]) << ','
       << io::format_double(yp[i]) << '\n';
}

std::string TailProfile::to_json() const {
  nlohmann::json j{{"p", p},
                   {"R", R},
                   {"r_max", grid.r_max()},
                   {"nodes", grid.size()},
                   {"iterations", iterations},
                   {"contraction_bound", contraction_bound},
                   {"contraction_factor", contraction_factor},
                   {"envelope_C", envelope_C},
                   {"envelope_slope", envelope_slope}};
  return j.dump(2);
}

namespace soliton {

namespace {

double contraction_estimate(double p, double R, double delta) {
  return p * std::pow(1.0 + delta, p - 1.0) * std::pow(R, 3.0 - p) / ((p - 2.0) * (p - 3.0));
}

}  // namespace

double default_tail_radius(double p) {
  require(p > 3.0, "tail fixed point needs p > 3");
  for (double R = 10.0; R < 1e12; R *= 2.0) {
    // first iterate has size R^{3-p} / ((p-2)(p-3))
    const double delta = 2.0 * std::pow(R, 3.0 - p) / ((p - 2.0) * (p - 3.0));
    if (delta < 1.0 && contraction_estimate(p, R, delta) < 0.25) return R;
  }
  fail(ErrorKind::Divergence, "no tail radius found with a contraction bound below 1/4");
}

TailProfile tail_fixed_point(double p, double R, const TailOptions& opt) {
  require(p > 3.0, "tail fixed point needs p > 3");
  require(R > 0.0, "tail radius must be positive");
  require(opt.decades > 0.0 && opt.nodes_per_decade >= 10, "tail grid too coarse");
  require(opt.tol > 0.0, "tolerance must be positive");

  TailProfile tp;
  tp.p = p;
  tp.R = R;
  const auto n = static_cast<std::size_t>(std::llround(opt.decades * opt.nodes_per_decade)) + 1;
  tp.grid = make_grid(R, R * std::pow(10.0, opt.decades), n, Spacing::Geometric);
  const double dx = std::log(tp.grid.r_max() / R) / static_cast<double>(n - 1);
  const double T = tp.grid.r_max();

  std::vector<double> phi(n, 0.0), next(n), phip(n), f0(n), f1(n);
  auto apply = [&](const std::vector<double>& ph) {
    for (std::size_t i = 0; i < n; ++i) {
      const double t = tp.grid[i];
      const double g = power_nl(1.0 + ph[i], p) * std::pow(t, 1.0 - p);
      f0[i] = g * t;      // dt = t dx
      f1[i] = g * t * t;
    }
    auto I0 = reverse_cumulative(f0, dx);
    auto I1 = reverse_cumulative(f1, dx);
    // beyond T: phi(t) = phi_T (T/t)^{p-3}, F(1 + phi) to second order
    const double a1 = p * ph[n - 1] * std::pow(T, p - 3.0);
    const double a2 = 0.5 * p * (p - 1.0) * ph[n - 1] * ph[n - 1] * std::pow(T, 2.0 * p - 6.0);
    const double tail0 = power_tail(T, 1.0 - p) + a1 * power_tail(T, 4.0 - 2.0 * p) +
                         a2 * power_tail(T, 7.0 - 3.0 * p);
    const double tail1 = power_tail(T, 2.0 - p) + a1 * power_tail(T, 5.0 - 2.0 * p) +
                         a2 * power_tail(T, 8.0 - 3.0 * p);
    for (std::size_t i = 0; i < n; ++i) {
      const double i0 = I0[i] + tail0, i1 = I1[i] + tail1;
      next[i] = -i1 + tp.grid[i] * i0;
      phip[i] = i0;
    }
  };

  double prev_diff = 0.0;
  for (std::size_t it = 1; it <= opt.max_iterations; ++it) {
    apply(phi);
    double diff = 0.0;
    for (std::size_t i = 0; i < n; ++i) diff = std::max(diff, std::abs(next[i] - phi[i]));
    if (it == 1) {
      const double delta = 2.0 * sup_abs(next);
      tp.contraction_bound = delta < 1.0 ? contraction_estimate(p, R, delta)
                                         : std::numeric_limits<double>::infinity();
      if (!(tp.contraction_bound < 0.5))
        fail(ErrorKind::Divergence,
             "tail map is not a contraction at R = " + io::format_double(R) +
                 " (bound " + io::format_double(tp.contraction_bound) + "); raise R");
    } else if (prev_diff > 1e3 * opt.tol) {
      tp.contraction_factor = std::max(tp.contraction_factor, diff / prev_diff);
    }
    phi.swap(next);
    prev_diff = diff;
    tp.iterations = it;
    if (diff < opt.tol) break;
    if (it == opt.max_iterations)
      fail(ErrorKind::Divergence, "tail fixed point did not converge");
  }
  tp.phi = phi;
  tp.phip = phip;

  std::vector<double> lr, lphi;
  for (std::size_t i = 0; i < n; ++i) {
    tp.envelope_C = std::max(tp.envelope_C, std::abs(phi[i]) * std::pow(tp.grid[i], p - 3.0));
    if (phi[i] != 0.0) {
      lr.push_back(tp.grid[i]);
      lphi.push_back(std::abs(phi[i]));
    }
  }
  tp.envelope_slope = lr.size() >= 2 ? loglog_slope(lr, lphi) : 0.0;
  return tp;
}

SolitonProfile extend_inward(const TailProfile& tail, double r_min, const ExtendOptions& opt) {
  namespace odeint = boost::numeric::odeint;
  require(tail.grid.size() >= 4 && tail.phi.size() == tail.grid.size(), "invalid tail profile");
  require(r_min > 0.0 && r_min < tail.R, "r_min must lie in (0, R)");
  const double p = tail.p;
  const std::size_t nt = tail.grid.size();
  const double dx = std::log(tail.grid.r_max() / tail.R) / static_cast<double>(nt - 1);
  const auto k = static_cast<std::size_t>(std::ceil(std::log(tail.R / r_min) / dx - 1e-9));

  // x = ln r, state (rho, q) with rho = r W = 1 + phi and q = r rho'
  using State = std::array<double, 2>;
  auto rhs = [p](const State& s, State& d, double x) {
    const double r = std::exp(x);
    d[0] = s[1];
    d[1] = s[1] - std::pow(r, 3.0 - p) * power_nl(s[0], p);
  };
  std::vector<double> xs(k + 1);
  const double x0 = std::log(tail.R);
  for (std::size_t j = 0; j <= k; ++j) xs[j] = x0 - static_cast<double>(j) * dx;

  State s{1.0 + tail.phi[0], tail.R * tail.phip[0]};
  std::vector<State> states;
  states.reserve(k + 1);
  auto stepper =
      odeint::make_controlled<odeint::runge_kutta_dopri5<State>>(opt.abs_tol, opt.rel_tol);
  std::size_t steps = 0;
  try {
    steps = odeint::integrate_times(stepper, rhs, s, xs.begin(), xs.end(), -dx,
                                    [&](const State& st, double) {
                                      if (!std::isfinite(st[0]) || !std::isfinite(st[1]))
                                        fail(ErrorKind::Numerical,
                                             "backward integration produced a non-finite state");
                                      states.push_back(st);
                                    });
  } catch (const odeint::step_adjustment_error& e) {
    fail(ErrorKind::Numerical, std::string("backward integration broke down: ") + e.what());
  }
  if (states.size() != k + 1) fail(ErrorKind::Numerical, "backward integration stopped early");

  SolitonProfile out;
  out.p = p;
  out.provenance = Provenance::BackwardExtension;
  out.tail_index = k;
  out.ode_steps = steps;
  const double rmin_actual = std::exp(xs[k]);
  out.grid = make_grid(rmin_actual, tail.grid.r_max(), k + nt, Spacing::Geometric);
  const std::size_t n = out.grid.size();
  out.y.resize(n);
  out.yp.resize(n);

  // Lyapunov E = |rho|^{p+1}/(p+1) + r^{p-1} rho'^2 / 2 must not grow inward.
  auto lyap = [p](double r, double rho, double q) {
    return std::pow(std::abs(rho), p + 1.0) / (p + 1.0) + 0.5 * std::pow(r, p - 3.0) * q * q;
  };
  double e_prev = lyap(tail.R, states[0][0], states[0][1]);
  for (std::size_t j = 0; j <= k; ++j) {
    const double r = std::exp(xs[j]);
    const double rho = states[j][0], q = states[j][1];
    const double e = lyap(r, rho, q);
    const double excess = e - e_prev;
    if (excess > 1e3 * opt.rel_tol * std::max(std::abs(e_prev), 1e-300)) {
      ++out.lyapunov_violations;
      out.lyapunov_worst = std::max(out.lyapunov_worst, excess);
    }
    e_prev = e;
    const std::size_t i = k - j;
    out.y[i] = rho / r;
    out.yp[i] = (q - rho) / (r * r);
  }
  for (std::size_t i = 1; i < nt; ++i) {
    const double r = tail.grid[i];
    out.y[k + i] = (1.0 + tail.phi[i]) / r;
    out.yp[k + i] = (tail.phip[i] * r - (1.0 + tail.phi[i])) / (r * r);
  }
  if (out.lyapunov_violations > 0)
    fail(ErrorKind::Numerical, "Lyapunov quantity increased during the backward integration");
  out.ypp = numerics::derivative(out.grid, out.yp);
  return out;
}

RadialGrid default_explicit_grid() { return make_grid(1e-4, 1e4, 16001, Spacing::Geometric); }

double singular_constant(double p) {
  const double theta = 2.0 / (p - 1.0);
  return std::pow(theta * (1.0 - theta), 1.0 / (p - 1.0));
}

SolitonProfile explicit_singular(double p, const RadialGrid& g) {
  require(p > 3.0 && p < 5.0, "explicit singular soliton needs 3 < p < 5");
  require(g.size() >= 2 && g.r_min() > 0.0, "explicit singular soliton needs r > 0");
  const double theta = 2.0 / (p - 1.0), C = singular_constant(p);
  SolitonProfile s;
  s.grid = g;
  s.p = p;
  s.provenance = Provenance::Explicit;
  s.y.resize(g.size());
  s.yp.resize(g.size());
  s.ypp.resize(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double r = g[i];
    const double y = C * std::pow(r, -theta);
    s.y[i] = y;
    s.yp[i] = -theta * y / r;
    s.ypp[i] = theta * (theta + 1.0) * y / (r * r);
  }
  return s;
}

SolitonProfile aubin_talenti(double lambda, int sgn, const RadialGrid& g) {
  require(lambda > 0.0, "lambda must be positive");
  require(sgn == 1 || sgn == -1, "sign must be +1 or -1");
  require(g.size() >= 2, "empty grid");
  const double a = 1.0 / (3.0 * lambda * lambda);
  const double amp = sgn / std::sqrt(lambda);
  SolitonProfile s;
  s.grid = g;
  s.p = 5.0;
  s.provenance = Provenance::Explicit;
  s.y.resize(g.size());
  s.yp.resize(g.size());
  s.ypp.resize(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double r = g[i];
    const double b = 1.0 + a * r * r;
    s.y[i] = amp / std::sqrt(b);
    s.yp[i] = -amp * a * r * std::pow(b, -1.5);
    s.ypp[i] = -amp * a * (std::pow(b, -1.5) - 3.0 * a * r * r * std::pow(b, -2.5));
  }
  return s;
}

std::string Diagnostics::to_json() const {
  nlohmann::json ann = nlohmann::json::array();
  for (const auto& a : annulus) ann.push_back({{"eps", a.eps}, {"value", a.value}});
  nlohmann::json j{{"p", p},
                   {"nontrivial", nontrivial},
                   {"positive", positive},
                   {"tail_deviation", tail_deviation},
                   {"derivative_decay", derivative_decay},
                   {"v_floor", v_floor},
                   {"v_median", v_median},
                   {"v_nonvanishing", v_nonvanishing},
                   {"annulus", ann},
                   {"annulus_diverges", annulus_diverges},
                   {"v_monotone_inner", v_monotone_inner},
                   {"v_monotone_outer", v_monotone_outer},
                   {"bad_extrema", bad_extrema},
                   {"critical_case", critical_case}};
  return j.dump(2);
}

Diagnostics diagnostics(const SolitonProfile& s) {
  const RadialGrid& g = s.grid;
  require(g.size() >= 8 && g.r_min() > 0.0, "profile needs r > 0 and several nodes");
  const double rmin = g.r_min(), rmax = g.r_max();
  if (std::log10(rmax / rmin) < 4.0 - 1e-9)
    fail(ErrorKind::InvalidArgument, "profile must span at least four decades");

  Diagnostics d;
  d.p = s.p;
  d.critical_case = s.p == 5.0;
  d.nontrivial = sup_abs(s.y) > 0.0;
  if (!d.nontrivial) return d;
  d.positive = std::all_of(s.y.begin(), s.y.end(), [](double v) { return v > 0.0; });

  const double p = s.p, theta = 2.0 / (p - 1.0);
  std::vector<double> v(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) v[i] = std::pow(g[i], theta) * s.y[i];

  for (std::size_t i = 0; i < g.size(); ++i) {
    const double r = g[i];
    if (r < rmax / 100.0) continue;
    d.tail_deviation = std::max(d.tail_deviation, std::pow(r, p - 2.0) * std::abs(s.y[i] - 1.0 / r));
    d.derivative_decay = std::max(d.derivative_decay, r * r * std::abs(s.yp[i]));
  }

  // floor on the innermost decade, median over the one before; a positive
  // log-log slope of |v| there means v still decays to 0
  std::vector<double> inner_r, inner_v, prev;
  d.v_floor = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double r = g[i];
    if (r <= 10.0 * rmin) {
      d.v_floor = std::min(d.v_floor, std::abs(v[i]));
      inner_r.push_back(r);
      inner_v.push_back(std::max(std::abs(v[i]), 1e-300));
    } else if (r <= 100.0 * rmin) {
      prev.push_back(std::abs(v[i]));
    }
  }
  d.v_median = median(prev);
  const double inner_slope = loglog_slope(inner_r, inner_v);
  d.v_nonvanishing = d.v_floor > 0.1 * d.v_median && inner_slope < 0.1;

  // 4 pi int_eps^top r^2 |W|^{p_c} with eps one to four decades below top.
  // A convergent integral has per-decade increments that shrink
  // geometrically (by 10^{-3} for bounded W); the outer decades can still be
  // transitional, so the test compares the two innermost ones.
  const double pc = 1.5 * (p - 1.0);
  const double top = rmin * 1e4;
  std::vector<double> dens(g.size());
  for (std::size_t i = 0; i < g.size(); ++i)
    dens[i] = 4.0 * kPi * g[i] * g[i] * std::pow(std::abs(s.y[i]), pc);
  for (int kdec = 1; kdec <= 4; ++kdec) {
    const double eps = top * std::pow(10.0, -kdec);
    d.annulus.push_back({eps, numerics::integrate(g, dens, std::max(eps, rmin), top)});
  }
  const std::size_t m = d.annulus.size();
  const double last = d.annulus[m - 1].value - d.annulus[m - 2].value;
  const double before = d.annulus[m - 2].value - d.annulus[m - 3].value;
  d.annulus_diverges = last > 0.0 && last >= 0.25 * before;

  auto monotone = [&](double lo, double hi) {
    int sign = 0;
    bool ok = true;
    for (std::size_t i = 0; i + 1 < g.size(); ++i) {
      if (g[i] < lo || g[i + 1] > hi) continue;
      const double dv = v[i + 1] - v[i];
      if (std::abs(dv) <= 1e-12 * std::abs(v[i])) continue;
      const int sg = dv > 0 ? 1 : -1;
      if (sign != 0 && sg != sign) {
        ok = false;
        // v' changes sign at node i: positive maximum or negative minimum?
        if ((sign > 0 && v[i] > 0) || (sign < 0 && v[i] < 0)) ++d.bad_extrema;
      }
      sign = sg;
    }
    return ok;
  };
  d.v_monotone_inner = monotone(rmin, 10.0 * rmin);
  d.v_monotone_outer = monotone(rmax / 10.0, rmax);
  return d;
}

std::function<double(double, double)> truncated_soliton(const SolitonProfile& s, double R) {
  require(R >= s.grid.r_min(), "R below the profile range");
  auto prof = std::make_shared<const SolitonProfile>(s);
  return [prof, R](double r, double t) { return prof->value(std::max(std::abs(r), R + std::abs(t))); };
}

namespace {

// (int_R^inf ... ) L^q_t L^r_x norm of V_R over t in R
double vr_norm(const SolitonProfile& s, double R, double q, double rr) {
  boost::math::quadrature::exp_sinh<double> quad;
  // log of int |V_R(t)|^r dx at rho = R + |t|, scaled as
  // 4 pi W(rho)^r rho^3 (1/3 + int_1^inf s^2 (W(rho s)/W(rho))^r ds)
  auto log_spatial = [&](double rho) {
    const double w = std::abs(s.value(rho));
    if (w == 0.0) return -std::numeric_limits<double>::infinity();
    auto f = [&](double x) {
      const double sc = 1.0 + x;
      if (!std::isfinite(sc) || !std::isfinite(rho * sc)) return 0.0;
      const double ratio = std::abs(s.value(rho * sc)) / w;
      if (ratio == 0.0) return 0.0;
      return std::exp(2.0 * std::log(sc) + rr * std::log(ratio));
    };
    const double J = quad.integrate(f, 0.0, std::numeric_limits<double>::infinity());
    return std::log(4.0 * kPi) + rr * std::log(w) + 3.0 * std::log(rho) + std::log(1.0 / 3.0 + J);
  };
  auto temporal = [&](double x) {
    if (!std::isfinite(x) || !std::isfinite(R + x)) return 0.0;
    return std::exp(q / rr * log_spatial(R + x));
  };
  const double I = quad.integrate(temporal, 0.0, std::numeric_limits<double>::infinity());
  return std::pow(2.0 * I, 1.0 / q);
}

}  // namespace

VRNorms truncated_soliton_norms(const SolitonProfile& s, double R) {
  require(R >= s.grid.r_min(), "R below the profile range");
  const double p = s.p;
  require(p > 3.0, "V_R norms need p > 3");
  const double sp = 1.5 - 2.0 / (p - 1.0);
  VRNorms out;
  out.R = R;
  out.y_q = 2.0 * p / (sp + 1.0);
  out.y_r = 2.0 * p / (2.0 - sp);
  out.y_norm = vr_norm(s, R, out.y_q, out.y_r);
  out.companion_norm = vr_norm(s, R, 2.0 * p / (p - 3.0), 2.0 * p);
  return out;
}

bool VRScaling::within(double tol) const {
  return std::abs(y_slope - expected_y_slope) <= tol &&
         std::abs(companion_slope - expected_companion_slope) <= tol;
}

std::string VRScaling::to_json() const {
  nlohmann::json rs = nlohmann::json::array();
  for (const auto& r : rows)
    rs.push_back({{"R", r.R}, {"y_norm", r.y_norm}, {"companion_norm", r.companion_norm}});
  nlohmann::json j{{"rows", rs},
                   {"y_slope", y_slope},
                   {"expected_y_slope", expected_y_slope},
                   {"companion_slope", companion_slope},
                   {"expected_companion_slope", expected_companion_slope}};
  return j.dump(2);
}

VRScaling truncated_soliton_scaling(const SolitonProfile& s, const std::vector<double>& Rs) {
  require(Rs.size() >= 2, "scaling fit needs at least two radii");
  VRScaling sc;
  sc.expected_y_slope = 0.5 - (1.5 - 2.0 / (s.p - 1.0));
  std::vector<double> ys, cs;
  for (double R : Rs) {
    sc.rows.push_back(truncated_soliton_norms(s, R));
    ys.push_back(sc.rows.back().y_norm);
    cs.push_back(sc.rows.back().companion_norm);
  }
  sc.y_slope = loglog_slope(Rs, ys);
  sc.companion_slope = loglog_slope(Rs, cs);
  return sc;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  require(x.size() == y.size() && x.size() >= 2, "slope fit needs two matching samples");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    require(x[i] > 0.0 && y[i] > 0.0, "log-log fit needs positive samples");
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double den = n * sxx - sx * sx;
  require(den > 0.0, "slope fit needs distinct abscissae");
  return (n * sxy - sx * sy) / den;
}

}  // namespace soliton

}  // namespace rnlw
