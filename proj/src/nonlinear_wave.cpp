#include "rnlw/nonlinear_wave.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

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

bool all_finite(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

void require_origin_grid(const RadialGrid& g) {
  if (!(g.spacing() == Spacing::Uniform && g.r_min() == 0.0 && g.size() >= 4))
    fail(ErrorKind::InvalidArgument, "evolution needs a uniform grid starting at r = 0");
}

double power_nl(double u, double p) { return std::pow(std::abs(u), p - 1.0) * u; }

// Finite-volume radial Laplacian: fluxes r_{i+1/2}^2 (u_{i+1} - u_i) / h over
// the shell volumes m_i = r_i^2 h + h^3/12 (h^3/24 for the ball at the origin),
// so the operator is symmetric for the weights m_i, exact on r^2, and reduces
// to 6 (u_1 - u_0) / h^2 = 3 u_rr at r = 0. The last node is a Dirichlet boundary.
double cell_volume(const RadialGrid& g, std::size_t i) {
  const double h = g.step();
  return i == 0 ? h * h * h / 24.0 : g[i] * g[i] * h + h * h * h / 12.0;
}

void laplacian(const RadialGrid& g, std::span<const double> u, std::span<double> out) {
  const std::size_t n = g.size();
  const double h = g.step(), h2 = h * h;
  out[0] = 6.0 * (u[1] - u[0]) / h2;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double r = g[i], rp = r + 0.5 * h, rm = r - 0.5 * h;
    out[i] = (rp * rp * (u[i + 1] - u[i]) - rm * rm * (u[i] - u[i - 1])) /
             (h * (r * r * h + h2 * h / 12.0));
  }
  out[n - 1] = 0.0;
}

double field_scale(const FieldPair& f) { return std::max(sup_abs(f.u), sup_abs(f.ut)); }

// Change against the initial data on the outermost nodes.
bool boundary_active(const FieldPair& f0, std::span<const double> u, std::span<const double> v,
                     double scale) {
  const std::size_t n = u.size();
  const std::size_t lo = n > 6 ? n - 6 : 0;
  double m = 0.0;
  for (std::size_t i = lo; i + 1 < n; ++i)
    m = std::max({m, std::abs(u[i] - f0.u[i]), std::abs(v[i] - f0.ut[i])});
  return m > 1e-8 * std::max(scale, 1e-300);
}

struct Leapfrog {
  const RadialGrid& g;
  const EvolutionConfig& cfg;
  std::vector<double> lap;

  Leapfrog(const RadialGrid& grid, const EvolutionConfig& c) : g(grid), cfg(c), lap(grid.size()) {}

  void accel(const std::vector<double>& u, double t, std::vector<double>& a) {
    laplacian(g, u, lap);
    const double s = sign_value(cfg.sign);
    const std::size_t n = g.size();
    for (std::size_t i = 0; i + 1 < n; ++i) {
      a[i] = lap[i] + s * power_nl(u[i], cfg.p);
      if (cfg.forcing) a[i] += cfg.forcing(g[i], t);
    }
    a[n - 1] = 0.0;
  }
};

Trajectory evolve_leapfrog(const FieldPair& f0, const EvolutionConfig& cfg) {
  const RadialGrid& g = f0.grid;
  const double h = g.step();
  const double dt_base = cfg.cfl * h;
  const double lam = nonlinear::laplacian_spectral_radius(g);
  if (dt_base * std::sqrt(lam) >= 2.0)
    fail(ErrorKind::InvalidArgument,
         "CFL violation: dt = " + io::format_double(dt_base) + " exceeds the stability limit " +
             io::format_double(2.0 / std::sqrt(lam)));

  Trajectory traj;
  traj.config = cfg;
  traj.snapshots.push_back({0.0, f0});
  traj.dt_min = dt_base;
  const double dir = cfg.t_final >= 0.0 ? 1.0 : -1.0;
  const double t_end = std::abs(cfg.t_final);
  const double scale = field_scale(f0);
  const double sup0 = sup_abs(f0.u);
  const double threshold =
      cfg.blowup_threshold > 0.0 ? cfg.blowup_threshold : 1e6 * (sup0 > 0.0 ? sup0 : 1.0);
  const double every = cfg.snapshot_every > 0.0 ? cfg.snapshot_every : t_end;

  Leapfrog lf(g, cfg);
  const std::size_t n = g.size();
  // the outer node keeps its initial value
  std::vector<double> u = f0.u, v = f0.ut, a(n), un(n), vn(n), an(n);
  v[n - 1] = 0.0;
  double tau = 0.0;  // elapsed |t|
  lf.accel(u, 0.0, a);
  double next_snap = std::min(every, t_end);
  const double eps = 1e-12 * std::max(1.0, t_end);

  auto push = [&](double at) { traj.snapshots.push_back({dir * at, FieldPair(g, u, v)}); };

  while (tau < t_end - eps) {
    const double sup = sup_abs(u);
    double dt = dt_base;
    // keep the nonlinear time scale |u|^{-(p-1)/2} resolved, in proportion to cfl
    while (dt * std::pow(sup, 0.5 * (cfg.p - 1.0)) > 0.1 * cfg.cfl) dt *= 0.5;
    bool accepted = false;
    while (!accepted) {
      const double step = std::min(dt, next_snap - tau);
      const double sdt = dir * step;
      for (std::size_t i = 0; i < n; ++i) {
        const double vh = v[i] + 0.5 * sdt * a[i];
        un[i] = u[i] + sdt * vh;
        vn[i] = vh;
      }
      lf.accel(un, dir * (tau + step), an);
      for (std::size_t i = 0; i < n; ++i) vn[i] += 0.5 * sdt * an[i];
      if (!all_finite(un) || !all_finite(vn)) {
        traj.status = RunStatus::Blowup;
        traj.t_est = dir * tau;
        traj.diagnostics = "non-finite values after t = " + io::format_double(dir * tau) +
                           " (last sup " + io::format_double(sup) + ")";
        push(tau);
        return traj;
      }
      const double sup_new = sup_abs(un);
      if (sup > 0.0 && sup_new > 10.0 * sup) {
        dt *= 0.5;
        if (dt < 1e-13 * std::max(1.0, tau)) {
          traj.status = RunStatus::Blowup;
          traj.t_est = dir * tau;
          traj.diagnostics = "step size collapsed at sup " + io::format_double(sup);
          push(tau);
          return traj;
        }
        continue;
      }
      accepted = true;
      u.swap(un);
      v.swap(vn);
      a.swap(an);
      tau += step;
      ++traj.steps;
      traj.dt_min = std::min(traj.dt_min, step);
      if (sup_new > threshold) {
        traj.status = RunStatus::Blowup;
        traj.t_est = dir * tau;
        traj.diagnostics = "sup norm " + io::format_double(sup_new) + " crossed threshold " +
                           io::format_double(threshold);
        push(tau);
        return traj;
      }
    }
    if (tau >= next_snap - eps) {
      push(next_snap);
      tau = next_snap;
      if (boundary_active(f0, u, v, scale)) {
        traj.status = RunStatus::Truncated;
        traj.diagnostics = "solution reached the outer boundary at t = " + io::format_double(dir * tau);
        return traj;
      }
      next_snap = std::min(next_snap + every, t_end);
    }
  }
  if (traj.snapshots.back().t != dir * t_end) push(t_end);
  return traj;
}

// Second-order scheme on the characteristic lattice dt = h for w = r u:
// w_i^{n+1} = w_{i+1}^n + w_{i-1}^n - w_i^{n-1} + h^2 S_i^n, exact for the free
// 1D wave, with w(0) = 0 from the odd extension.
Trajectory evolve_characteristics(const FieldPair& f0, const EvolutionConfig& cfg) {
  const RadialGrid& g = f0.grid;
  const std::size_t n = g.size();
  const double h = g.step();
  const double dir = cfg.t_final >= 0.0 ? 1.0 : -1.0;
  const auto steps = static_cast<std::size_t>(std::llround(std::abs(cfg.t_final) / h));
  const std::size_t every =
      cfg.snapshot_every > 0.0
          ? std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(cfg.snapshot_every / h)))
          : std::max<std::size_t>(steps, 1);
  const double s = sign_value(cfg.sign);
  const double sup0 = sup_abs(f0.u);
  const double threshold =
      cfg.blowup_threshold > 0.0 ? cfg.blowup_threshold : 1e6 * (sup0 > 0.0 ? sup0 : 1.0);
  const double scale = field_scale(f0);

  auto source = [&](const std::vector<double>& w, double t, std::vector<double>& out) {
    out[0] = 0.0;
    for (std::size_t i = 1; i < n; ++i) {
      const double r = g[i];
      double val = s * power_nl(w[i] / r, cfg.p);
      if (cfg.forcing) val += cfg.forcing(r, t);
      out[i] = r * val;
    }
    out[n - 1] = 0.0;
  };

  const ReducedPair red = to_reduced(f0);
  std::vector<double> prev = red.w, cur(n), next(n), S(n);
  prev[0] = 0.0;
  prev[n - 1] = red.w[n - 1];
  source(prev, 0.0, S);
  for (std::size_t i = 1; i + 1 < n; ++i)
    cur[i] = 0.5 * (prev[i + 1] + prev[i - 1]) +
             dir * 0.25 * h * (red.wt[i - 1] + 2.0 * red.wt[i] + red.wt[i + 1]) + 0.5 * h * h * S[i];
  cur[0] = 0.0;
  cur[n - 1] = red.w[n - 1];

  Trajectory traj;
  traj.config = cfg;
  traj.snapshots.push_back({0.0, f0});
  traj.dt_min = h;
  auto advance = [&](std::size_t level) {
    source(cur, dir * h * level, S);
    next[0] = 0.0;
    next[n - 1] = red.w[n - 1];
    for (std::size_t i = 1; i + 1 < n; ++i) next[i] = cur[i + 1] + cur[i - 1] - prev[i] + h * h * S[i];
  };
  auto snapshot = [&](std::size_t level) {
    ReducedPair rp{g, cur, std::vector<double>(n)};
    for (std::size_t i = 0; i < n; ++i) rp.wt[i] = dir * (next[i] - prev[i]) / (2.0 * h);
    traj.snapshots.push_back({dir * h * level, from_reduced(rp)});
  };

  for (std::size_t level = 1; level <= steps; ++level) {
    advance(level);
    ++traj.steps;
    if (!all_finite(next)) {
      traj.status = RunStatus::Blowup;
      traj.t_est = dir * h * level;
      traj.diagnostics = "non-finite values at t = " + io::format_double(traj.t_est);
      return traj;
    }
    double sup = 0.0;
    for (std::size_t i = 1; i < n; ++i) sup = std::max(sup, std::abs(cur[i] / g[i]));
    if (sup > threshold) {
      traj.status = RunStatus::Blowup;
      traj.t_est = dir * h * level;
      traj.diagnostics = "sup norm " + io::format_double(sup) + " crossed threshold";
      snapshot(level);
      return traj;
    }
    if (level % every == 0 || level == steps) {
      snapshot(level);
      const auto& f = traj.snapshots.back().field;
      if (boundary_active(f0, f.u, f.ut, scale)) {
        traj.status = RunStatus::Truncated;
        traj.diagnostics = "solution reached the outer boundary";
        return traj;
      }
    }
    prev.swap(cur);
    cur.swap(next);
  }
  return traj;
}

}  // namespace

std::string to_string(Sign s) { return s == Sign::Focusing ? "focusing" : "defocusing"; }
std::string to_string(Scheme s) {
  return s == Scheme::LeapfrogU ? "leapfrog_u" : "characteristics_w";
}
std::string to_string(RunStatus s) {
  switch (s) {
    case RunStatus::Blowup: return "blowup";
    case RunStatus::Truncated: return "truncated";
    default: return "completed";
  }
}

void EvolutionConfig::validate() const {
  require(p > 3.0 && p <= 5.0, "exponent p must satisfy 3 < p <= 5");
  require(cfl > 0.0 && cfl <= 1.0, "cfl must lie in (0, 1]");
  require(std::isfinite(t_final), "t_final must be finite");
  require(snapshot_every >= 0.0, "snapshot_every must be nonnegative");
  require(blowup_threshold >= 0.0, "blowup_threshold must be nonnegative");
}

std::string EvolutionConfig::to_json() const {
  nlohmann::json j{{"p", p},
                   {"sign", to_string(sign)},
                   {"cfl", cfl},
                   {"scheme", to_string(scheme)},
                   {"blowup_threshold", blowup_threshold},
                   {"t_final", t_final},
                   {"snapshot_every", snapshot_every},
                   {"forcing", static_cast<bool>(forcing)}};
  return j.dump(2);
}

void save_trajectory(const Trajectory& traj, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  {
    std::ofstream os(dir / "config.json");
    os << traj.config.to_json() << "\n";
  }
  {
    std::ofstream os(dir / "snapshots.csv");
    os << "t,r,u,ut\n";
    for (const auto& s : traj.snapshots)
      for (std::size_t i = 0; i < s.field.grid.size(); ++i)
        os << io::format_double(s.t) << ',' << io::format_double(s.field.grid[i]) << ','
           << io::format_double(s.field.u[i]) << ',' << io::format_double(s.field.ut[i]) << '\n';
  }
  nlohmann::json st{{"status", to_string(traj.status)},
                    {"steps", traj.steps},
                    {"dt_min", traj.dt_min},
                    {"snapshots", traj.snapshots.size()},
                    {"diagnostics", traj.diagnostics}};
  if (traj.status == RunStatus::Blowup) st["t_est"] = traj.t_est;
  std::ofstream os(dir / "status.json");
  os << st.dump(2) << "\n";
  if (!os) fail(ErrorKind::Io, "could not write " + (dir / "status.json").string());
}

namespace nonlinear {

double potential_integral(const FieldPair& f, double p) {
  std::vector<double> d(f.grid.size());
  for (std::size_t i = 0; i < d.size(); ++i)
    d[i] = f.grid[i] * f.grid[i] * std::pow(std::abs(f.u[i]), p + 1.0);
  return 4.0 * kPi * numerics::integrate(f.grid, d);
}

double energy(const FieldPair& f, double p, Sign sign) {
  const double kin = 0.5 * ring_energy(f, f.grid.r_min(), f.grid.r_max());
  return kin - sign_value(sign) / (p + 1.0) * potential_integral(f, p);
}

double laplacian_spectral_radius(const RadialGrid& g) {
  require_origin_grid(g);
  // The top eigenvector is either localised at the origin or a bulk
  // checkerboard mode bounded by 4 / h^2; iterate on a leading block.
  const std::size_t m = std::min<std::size_t>(g.size(), 400);
  const RadialGrid block = make_grid(0.0, g.step() * static_cast<double>(m - 1), m, Spacing::Uniform);
  std::vector<double> x(m), y(m), wts(m);
  for (std::size_t i = 0; i < m; ++i) {
    x[i] = (i % 2 ? -1.0 : 1.0) / (1.0 + static_cast<double>(i));
    wts[i] = cell_volume(block, i);
  }
  double lam = 0.0;
  for (int it = 0; it < 4000; ++it) {
    laplacian(block, x, y);
    double num = 0.0, den = 0.0, norm = 0.0;
    for (std::size_t i = 0; i + 1 < m; ++i) {
      num += -y[i] * x[i] * wts[i];
      den += x[i] * x[i] * wts[i];
    }
    lam = num / den;
    for (std::size_t i = 0; i < m; ++i) {
      x[i] = -y[i];
      norm = std::max(norm, std::abs(x[i]));
    }
    for (auto& v : x) v /= norm;
  }
  const double h2 = g.step() * g.step();
  return std::max(lam, 4.0 / h2) * 1.001;
}

Trajectory evolve(const FieldPair& f0, const EvolutionConfig& cfg) {
  cfg.validate();
  require_origin_grid(f0.grid);
  if (cfg.scheme == Scheme::CharacteristicsW) return evolve_characteristics(f0, cfg);
  return evolve_leapfrog(f0, cfg);
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::GlobalBounded: return "global_bounded";
    case Verdict::Blowup: return "blowup";
    default: return "undecided";
  }
}

Classification classify(const Trajectory& traj, double sp_norm_cap) {
  Classification c;
  const auto& cfg = traj.config;
  if (traj.status == RunStatus::Blowup) {
    c.t_est_sequence.push_back(traj.t_est);
    EvolutionConfig rerun = cfg;
    rerun.snapshot_every = 0.0;
    for (int k = 1; k <= 2; ++k) {
      rerun.cfl = cfg.cfl / std::ldexp(1.0, k);
      const auto t2 = evolve(traj.initial().field, rerun);
      if (t2.status != RunStatus::Blowup) {
        c.reason = "rerun with cfl " + io::format_double(rerun.cfl) + " did not blow up";
        return c;
      }
      c.t_est_sequence.push_back(t2.t_est);
    }
    const auto& T = c.t_est_sequence;
    bool cauchy = true;
    for (std::size_t i = 1; i < T.size(); ++i)
      cauchy = cauchy && std::abs(T[i] - T[i - 1]) <= 0.05 * std::abs(T[i]);
    if (cauchy) {
      c.verdict = Verdict::Blowup;
      c.t_est = T.back();
      c.reason = "threshold crossed under two step halvings with consistent T_est";
    } else {
      c.reason = "T_est not Cauchy within 5% under step halving";
    }
    return c;
  }
  if (traj.status == RunStatus::Truncated) {
    c.reason = "run truncated at the outer boundary";
    return c;
  }
  const double sp = 1.5 - 2.0 / (cfg.p - 1.0);
  for (const auto& s : traj.snapshots)
    c.final_norm = std::max(c.final_norm, spectral::sobolev_norm(s.field, SobolevIndex(sp)).value);
  if (c.final_norm <= sp_norm_cap) {
    c.verdict = Verdict::GlobalBounded;
    c.reason = "reached t_final with the critical norm below the cap";
  } else {
    c.reason = "critical norm " + io::format_double(c.final_norm) + " exceeds the cap";
  }
  return c;
}

std::string MorawetzReport::to_json() const {
  nlohmann::json j{{"R", R},
                   {"T", T},
                   {"energy", energy},
                   {"terms", terms},
                   {"lhs_sum", lhs_sum},
                   {"weighted_potential", weighted_potential},
                   {"weighted_bound", weighted_bound},
                   {"terms_nonnegative", terms_nonnegative},
                   {"sum_bounded", sum_bounded},
                   {"weighted_bounded", weighted_bounded}};
  return j.dump();
}

MorawetzReport morawetz_report(const Trajectory& traj, double R, double tol) {
  const auto& cfg = traj.config;
  require(cfg.sign == Sign::Defocusing, "morawetz_report: the estimate holds for defocusing runs only");
  require(!traj.snapshots.empty(), "morawetz_report: empty trajectory");
  const RadialGrid& g = traj.initial().field.grid;
  require(R > g.r_min() && R < g.r_max(), "morawetz_report: R outside the grid");
  const double p = cfg.p;
  const std::size_t n = g.size();
  const std::size_t m = traj.snapshots.size();
  std::vector<double> interior(m), trace(m), pot_in(m), pot_out(m), weighted(m);
  std::vector<double> dens(n);
  for (std::size_t k = 0; k < m; ++k) {
    const FieldPair& f = traj.snapshots[k].field;
    interior[k] = ring_energy(f, g.r_min(), R);
    const double uR = numerics::interpolate(g, f.u, R);
    trace[k] = uR * uR;
    for (std::size_t i = 0; i < n; ++i) dens[i] = g[i] * g[i] * std::pow(std::abs(f.u[i]), p + 1.0);
    pot_in[k] = 4.0 * kPi * numerics::integrate(g, dens, g.r_min(), R);
    for (std::size_t i = 0; i < n; ++i) dens[i] = g[i] * std::pow(std::abs(f.u[i]), p + 1.0);
    pot_out[k] = 4.0 * kPi * numerics::integrate(g, dens, R, g.r_max());
    weighted[k] = 4.0 * kPi * numerics::integrate(g, dens);
  }
  auto time_integral = [&](const std::vector<double>& v) {
    double acc = 0.0;
    for (std::size_t k = 1; k < m; ++k)
      acc += 0.5 * (v[k] + v[k - 1]) * std::abs(traj.snapshots[k].t - traj.snapshots[k - 1].t);
    return acc;
  };
  MorawetzReport rep;
  rep.R = R;
  rep.T = std::abs(traj.final().t - traj.initial().t);
  rep.energy = energy(traj.initial().field, p, cfg.sign);
  const FieldPair& last = traj.final().field;
  for (std::size_t i = 0; i < n; ++i) dens[i] = g[i] * g[i] * last.u[i] * last.u[i];
  const double mass = 4.0 * kPi * numerics::integrate(g, dens, g.r_min(), R);
  rep.terms = {time_integral(interior) / (2.0 * R), 2.0 * kPi * time_integral(trace),
               (2.0 * p - 4.0) / (2.0 * R * (p + 1.0)) * time_integral(pot_in),
               (p - 1.0) / (p + 1.0) * time_integral(pot_out), 2.0 / (R * R) * mass};
  for (double t : rep.terms) {
    rep.lhs_sum += t;
    rep.terms_nonnegative = rep.terms_nonnegative && t >= 0.0;
  }
  rep.sum_bounded = rep.lhs_sum <= 2.0 * rep.energy + tol;
  rep.weighted_potential = time_integral(weighted);
  rep.weighted_bound = 2.0 * (p + 1.0) / (p - 1.0) * rep.energy;
  rep.weighted_bounded = rep.weighted_potential <= rep.weighted_bound + tol;
  return rep;
}

PerturbationResult perturbed_evolve(const std::function<double(double, double)>& V,
                                    const FieldPair& h0, const EvolutionConfig& cfg) {
  cfg.validate();
  const RadialGrid& g = h0.grid;
  require_origin_grid(g);
  const double dt_base = cfg.cfl * g.step();
  if (dt_base * std::sqrt(laplacian_spectral_radius(g)) >= 2.0)
    fail(ErrorKind::InvalidArgument, "perturbed_evolve: CFL violation");
  const std::size_t n = g.size();
  const double dir = cfg.t_final >= 0.0 ? 1.0 : -1.0;
  const double t_end = std::abs(cfg.t_final);
  const double every = cfg.snapshot_every > 0.0 ? cfg.snapshot_every : t_end;
  const double s = sign_value(cfg.sign);
  const double p = cfg.p;

  std::vector<double> hl = h0.u, vl = h0.ut, d(n, 0.0), vd(n, 0.0);
  hl[n - 1] = vl[n - 1] = 0.0;
  std::vector<double> al(n), ad(n), lap(n);
  auto accel = [&](double t) {
    laplacian(g, hl, al);
    laplacian(g, d, lap);
    for (std::size_t i = 0; i + 1 < n; ++i) {
      const double vb = V ? V(g[i], t) : 0.0;
      ad[i] = lap[i] + s * (power_nl(vb + hl[i] + d[i], p) - power_nl(vb, p));
    }
    al[n - 1] = ad[n - 1] = 0.0;
  };

  PerturbationResult out;
  out.data_norm = std::sqrt(ring_energy(h0, g.r_min(), g.r_max()));
  auto record = [&](double tau) {
    std::vector<double> hu(n), ht(n);
    for (std::size_t i = 0; i < n; ++i) {
      hu[i] = hl[i] + d[i];
      ht[i] = vl[i] + vd[i];
    }
    out.h.push_back({dir * tau, FieldPair(g, hu, ht)});
    out.h_linear.push_back({dir * tau, FieldPair(g, hl, vl)});
  };
  record(0.0);
  double tau = 0.0, next_snap = std::min(every, t_end);
  const double eps = 1e-12 * std::max(1.0, t_end);
  accel(0.0);
  while (tau < t_end - eps) {
    const double step = std::min(dt_base, next_snap - tau);
    const double sdt = dir * step;
    for (std::size_t i = 0; i < n; ++i) {
      vl[i] += 0.5 * sdt * al[i];
      vd[i] += 0.5 * sdt * ad[i];
      hl[i] += sdt * vl[i];
      d[i] += sdt * vd[i];
    }
    tau += step;
    accel(dir * tau);
    for (std::size_t i = 0; i < n; ++i) {
      vl[i] += 0.5 * sdt * al[i];
      vd[i] += 0.5 * sdt * ad[i];
    }
    if (!all_finite(d) || !all_finite(vd))
      fail(ErrorKind::Divergence, "perturbed_evolve: non-finite deviation at t = " + io::format_double(dir * tau));
    out.deviation = std::max(out.deviation, std::sqrt(ring_energy(FieldPair(g, d, vd), g.r_min(), g.r_max())));
    if (tau >= next_snap - eps) {
      tau = next_snap;
      record(tau);
      next_snap = std::min(next_snap + every, t_end);
    }
  }
  return out;
}

RadiusTrack support_radius_track(const std::vector<Snapshot>& h, double tol) {
  require(!h.empty(), "support_radius_track: no snapshots");
  const Snapshot* zero = nullptr;
  for (const auto& s : h)
    if (s.t == 0.0) zero = &s;
  require(zero != nullptr, "support_radius_track: snapshots must include t = 0");
  const RadialGrid& g = zero->field.grid;
  // Measured on the displacement r h; the velocity component only when the
  // initial displacement vanishes. Near a support edge h_t ~ h' is far larger
  // than h, so mixing the two would bias the radius outward.
  double scale_u = 0.0, scale_t = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    scale_u = std::max(scale_u, std::abs(g[i] * zero->field.u[i]));
    scale_t = std::max(scale_t, std::abs(g[i] * zero->field.ut[i]));
  }
  const bool use_u = scale_u > 0.0;
  const double scale = use_u ? scale_u : scale_t;
  auto radius = [&](const FieldPair& f) {
    const auto& v = use_u ? f.u : f.ut;
    double r = 0.0;
    for (std::size_t i = 0; i < f.grid.size(); ++i)
      if (std::abs(f.grid[i] * v[i]) > tol * scale) r = f.grid[i];
    return r;
  };
  RadiusTrack tr;
  tr.spacing = g.spacing() == Spacing::Uniform ? g.step() : g[g.size() - 1] - g[g.size() - 2];
  if (scale == 0.0) {
    for (const auto& s : h) tr.samples.push_back({s.t, 0.0, 0.0});
    tr.forward_holds = tr.backward_holds = true;
    return tr;
  }
  const double r0 = radius(zero->field);
  if (r0 >= g.r_max() - tr.spacing)
    fail(ErrorKind::InvalidArgument, "support_radius_track: initial perturbation is not compactly supported");
  bool fwd = true, bwd = true, any_f = false, any_b = false;
  for (const auto& s : h) {
    const double R = radius(s.field), pred = r0 + std::abs(s.t);
    tr.samples.push_back({s.t, R, pred});
    const bool ok = std::abs(R - pred) <= tr.spacing * (1.0 + 1e-9);
    if (s.t > 0.0) {
      any_f = true;
      fwd = fwd && ok;
    } else if (s.t < 0.0) {
      any_b = true;
      bwd = bwd && ok;
    }
  }
  tr.forward_holds = any_f && fwd;
  tr.backward_holds = any_b && bwd;
  return tr;
}

}  // namespace nonlinear

}  // namespace rnlw
