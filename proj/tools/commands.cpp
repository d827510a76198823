#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include "cli_common.hpp"

namespace cli {

namespace {

Grid uniform_grid(const Params& p, double r_max_def, std::int64_t n_def) {
  const double r_max = p.number("r_max", r_max_def);
  const std::int64_t n = p.integer("n", n_def);
  require_field(r_max > 0.0, p.field("r_max"), "must be positive");
  require_field(n >= 16, p.field("n"), "needs at least 16 nodes");
  rnlw_grid* g = nullptr;
  check(rnlw_grid_create(0.0, r_max, static_cast<size_t>(n), 0, &g), "grid");
  return Grid(g);
}

Field gaussian_data(const Params& p, const rnlw_grid* g) {
  const double width = p.number("width", 1.0);
  require_field(width > 0.0, p.field("width"), "must be positive");
  rnlw_field* f = nullptr;
  check(rnlw_field_gaussian(g, p.number("amp", 1.0), width, p.number("vel", 0.0), &f),
        "gaussian data");
  return Field(f);
}

int focusing_of(const Params& p) {
  const std::string s = p.string("sign", "defocusing");
  require_field(s == "focusing" || s == "defocusing", p.field("sign"),
                "expected focusing or defocusing");
  return s == "focusing" ? 1 : 0;
}

double energy_of(const rnlw_field* f, double p, int focusing) {
  double e = 0.0;
  check(rnlw_energy(f, p, focusing, &e), "energy");
  return e;
}

// exp(-1/(1-x^2)) on |x| < 1, zero outside
double smooth_bump(double x) { return std::abs(x) < 1.0 ? std::exp(-1.0 / (1.0 - x * x)) : 0.0; }

std::string csv_line(std::initializer_list<std::string> cells) {
  std::string s;
  for (const auto& c : cells) {
    if (!s.empty()) s += ',';
    s += c;
  }
  return s + '\n';
}

double loglog_fit(const std::vector<double>& x, const std::vector<double>& y) {
  double mx = 0, my = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += std::log(x[i]) / n;
    my += std::log(y[i]) / n;
  }
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (std::log(x[i]) - mx) * (std::log(y[i]) - my);
    sxx += (std::log(x[i]) - mx) * (std::log(x[i]) - mx);
  }
  return sxx > 0 ? sxy / sxx : std::nan("");
}

}  // namespace

Outcome cmd_simulate(const Params& p, std::uint64_t, const fs::path& out) {
  p.only({"p", "sign", "amp", "width", "vel", "r_max", "n", "cfl", "scheme", "t_final",
          "snapshot_every", "blowup_threshold", "norm_cap", "morawetz_R", "save_trajectory"});
  rnlw_evolve_config cfg;
  rnlw_evolve_config_default(&cfg);
  cfg.p = p.number("p", 4.0);
  require_field(cfg.p > 3.0 && cfg.p <= 5.0, p.field("p"), "must lie in (3, 5]");
  cfg.focusing = focusing_of(p);
  cfg.cfl = p.number("cfl", 0.5);
  require_field(cfg.cfl > 0.0 && cfg.cfl <= 1.0, p.field("cfl"), "must lie in (0, 1]");
  const std::string scheme = p.string("scheme", "leapfrog");
  require_field(scheme == "leapfrog" || scheme == "characteristics", p.field("scheme"),
                "expected leapfrog or characteristics");
  cfg.scheme = scheme == "characteristics" ? 1 : 0;
  cfg.t_final = p.number("t_final", 5.0);
  cfg.snapshot_every = p.number("snapshot_every", 0.5);
  require_field(cfg.snapshot_every >= 0.0, p.field("snapshot_every"), "must be nonnegative");
  cfg.blowup_threshold = p.number("blowup_threshold", 0.0);
  const double cap = p.number("norm_cap", 1e3);
  require_field(cap > 0.0, p.field("norm_cap"), "must be positive");

  Grid g = uniform_grid(p, 30.0, 1501);
  Field f0 = gaussian_data(p, g.get());
  rnlw_trajectory* raw = nullptr;
  check(rnlw_evolve(f0.get(), &cfg, &raw), "evolve");
  Traj traj(raw);

  Outcome o;
  const double e0 = energy_of(f0.get(), cfg.p, cfg.focusing);
  std::string energy_csv = "t,energy\n";
  double e_last = e0, t_last = 0.0;
  for (size_t i = 0; i < rnlw_trajectory_snapshot_count(traj.get()); ++i) {
    rnlw_field* s = nullptr;
    double t = 0.0;
    check(rnlw_trajectory_snapshot(traj.get(), i, &t, &s), "snapshot");
    Field sf(s);
    e_last = energy_of(sf.get(), cfg.p, cfg.focusing);
    t_last = t;
    energy_csv += csv_line({fmt(t), fmt(e_last)});
  }
  write_text(out / "energy.csv", energy_csv);
  o.artifacts.push_back("energy.csv");

  json cls = json::parse(take([&] {
    char* s = nullptr;
    check(rnlw_classify(traj.get(), cap, &s), "classify");
    return s;
  }()));
  write_text(out / "classify.json", cls.dump(2));
  o.artifacts.push_back("classify.json");

  if (p.has("morawetz_R")) {
    const double R = p.number("morawetz_R");
    char* s = nullptr;
    check(rnlw_morawetz(traj.get(), R, &s), "morawetz");
    write_text(out / "morawetz.json", take(s));
    o.artifacts.push_back("morawetz.json");
  }
  if (p.boolean("save_trajectory", false)) {
    check(rnlw_trajectory_save(traj.get(), (out / "trajectory").string().c_str()), "save");
    o.artifacts.push_back("trajectory");
  }

  static const char* kStatus[] = {"completed", "blowup", "truncated"};
  const int st = rnlw_trajectory_status(traj.get());
  json summary{{"p", cfg.p},
               {"sign", cfg.focusing ? "focusing" : "defocusing"},
               {"energy_initial", e0},
               {"energy_final", std::isfinite(e_last) ? json(e_last) : json(nullptr)},
               {"t_final_reached", t_last},
               {"relative_drift", std::isfinite(e_last) && e0 != 0.0
                                      ? json(std::abs(e_last - e0) / std::abs(e0))
                                      : json(nullptr)},
               {"status", st >= 0 && st <= 2 ? kStatus[st] : "unknown"},
               {"classification", cls}};
  write_text(out / "summary.json", summary.dump(2));
  o.artifacts.push_back("summary.json");

  o.summary["energy_initial"] = fmt(e0);
  o.summary["energy_final"] = fmt(e_last);
  o.summary["status"] = summary["status"].get<std::string>();
  o.summary["verdict"] = cls["verdict"].get<std::string>();
  o.summary["t_est"] = cls["t_est"].is_null() ? "" : fmt(cls["t_est"].get<double>());
  return o;
}

Outcome cmd_soliton(const Params& p, std::uint64_t, const fs::path& out) {
  p.only({"p", "R", "r_min", "explicit", "lambda", "vr_R", "tol"});
  const double pp = p.number("p", 5.0);
  require_field(pp > 3.0 && pp <= 5.0, p.field("p"), "must lie in (3, 5]");
  const bool expl = p.boolean("explicit", false);
  const double tol = p.number("tol", 1e-6);
  Outcome o;

  rnlw_profile* raw = nullptr;
  if (expl) {
    const double lambda = p.number("lambda", 1.0 / 3.0);
    require_field(lambda > 0.0, p.field("lambda"), "must be positive");
    check(rnlw_soliton_explicit(pp, lambda, &raw), "explicit profile");
  } else {
    const double R = p.number("R", pp == 5.0 ? 10.0 : 0.0);
    const double r_min = p.number("r_min", pp == 5.0 ? 1e-3 : 0.0);
    require_field(R >= 0.0, p.field("R"), "must be nonnegative (0 picks a default)");
    require_field(r_min >= 0.0, p.field("r_min"), "must be nonnegative (0 picks a default)");
    char* tail = nullptr;
    check(rnlw_soliton_construct(pp, R, r_min, &raw, &tail), "soliton construction");
    write_text(out / "tail.json", take(tail));
    o.artifacts.push_back("tail.json");
  }
  Profile prof(raw);
  check(rnlw_profile_write_csv(prof.get(), (out / "profile.csv").string().c_str()), "profile csv");
  o.artifacts.push_back("profile.csv");

  double residual = 0.0;
  check(rnlw_profile_residual(prof.get(), &residual), "residual");
  json report{{"p", pp}, {"explicit", expl}, {"ode_residual", residual}};
  {
    char* d = nullptr;
    if (rnlw_profile_diagnostics(prof.get(), &d) == RNLW_OK)
      report["diagnostics"] = json::parse(take(d));
    else
      report["diagnostics_error"] = rnlw_last_error();
  }

  if (pp == 5.0 && !expl) {
    // against the explicit ground state sqrt(3) / (1 + 3 r^2)^{1/2} on [1e-2, 1e2]
    double worst = 0.0, at = 0.0;
    for (int k = 0; k <= 400; ++k) {
      const double r = std::pow(10.0, -2.0 + 4.0 * k / 400.0);
      double v = 0.0;
      check(rnlw_profile_value(prof.get(), r, &v), "profile value");
      const double exact = std::sqrt(3.0) / std::sqrt(1.0 + 3.0 * r * r);
      const double err = std::abs(v - exact) / exact;
      if (err > worst) worst = err, at = r;
    }
    report["ground_state_check"] = {
        {"sup_relative_error", worst}, {"at_r", at}, {"tol", tol}, {"passed", worst < tol}};
    o.summary["sup_relative_error"] = fmt(worst);
    if (!(worst < tol)) {
      o.exit = kVerification;
      o.message = "profile deviates from the explicit ground state by " + fmt(worst);
    }
  }

  if (p.has("vr_R")) {
    const auto Rs = p.numbers("vr_R", {});
    for (double R : Rs) require_field(R > 0.0, p.field("vr_R"), "radii must be positive");
    std::string csv = "R,y_norm,companion_norm\n";
    for (double R : Rs) {
      double y = 0.0, c = 0.0;
      check(rnlw_truncated_soliton_norms(prof.get(), R, &y, &c), "V_R norms");
      csv += csv_line({fmt(R), fmt(y), fmt(c)});
      o.summary["y_norm"] = fmt(y);
      o.summary["companion_norm"] = fmt(c);
    }
    write_text(out / "vr_norms.csv", csv);
    o.artifacts.push_back("vr_norms.csv");
    if (Rs.size() >= 2) {
      char* s = nullptr;
      check(rnlw_truncated_soliton_scaling(prof.get(), Rs.data(), Rs.size(), &s), "V_R scaling");
      report["vr_scaling"] = json::parse(take(s));
    }
  }
  o.summary["ode_residual"] = fmt(residual);
  write_text(out / "soliton.json", report.dump(2));
  o.artifacts.push_back("soliton.json");
  return o;
}

Outcome cmd_norms(const Params& p, std::uint64_t, const fs::path& out) {
  p.only({"s", "pair", "amp", "width", "vel", "r_max", "n", "field"});
  const auto ss = p.numbers("s", {0.0, 0.5, 5.0 / 6.0, 1.0});
  const bool pair = p.boolean("pair", false);
  Field f;
  if (p.has("field")) {
    rnlw_field* raw = nullptr;
    check(rnlw_field_read_csv(p.string("field", "").c_str(), &raw), "read field");
    f.reset(raw);
  } else {
    Grid g = uniform_grid(p, 20.0, 4097);
    f = gaussian_data(p, g.get());
  }
  Outcome o;
  std::string csv = "s,value,est_error\n";
  for (std::size_t i = 0; i < ss.size(); ++i) {
    const double s = ss[i];
    require_field(s >= -1.0 && s < 1.5, p.field("s") + "[" + std::to_string(i) + "]",
                  "must lie in [-1, 3/2)");
    double v = 0.0, e = 0.0;
    check(rnlw_sobolev_norm(f.get(), s, pair ? 1 : 0, &v, &e), "sobolev norm");
    csv += csv_line({fmt(s), fmt(v), fmt(e)});
    o.summary["norm_s" + fmt(s)] = fmt(v);
  }
  write_text(out / "norms.csv", csv);
  o.artifacts.push_back("norms.csv");
  return o;
}

namespace {

Outcome verify_channel(const Params& p, std::uint64_t seed, const fs::path& out) {
  const std::int64_t n = p.integer("n", 100);
  require_field(n >= 0, p.field("n"), "must be nonnegative");
  const double tol = p.number("tol", 1e-8);
  int ok = 0;
  char* s = nullptr;
  check(rnlw_channel_suite(static_cast<size_t>(n), seed, tol, &ok, &s), "channel suite");
  write_text(out / "channel_report.json", take(s));
  Outcome o;
  o.artifacts.push_back("channel_report.json");
  o.summary["all_passed"] = ok ? "true" : "false";
  if (!ok) {
    o.exit = kVerification;
    o.message = "channel suite has failing entries";
  }
  return o;
}

Outcome verify_reduction(const Params& p, std::uint64_t seed, const fs::path& out) {
  const std::int64_t n = p.integer("n", 20);
  const std::int64_t nodes = p.integer("nodes", 4096);
  require_field(n >= 0, p.field("n"), "must be nonnegative");
  require_field(nodes >= 64, p.field("nodes"), "needs at least 64 nodes");
  const double tol = p.number("tol", 1e-6);
  rnlw_grid* graw = nullptr;
  check(rnlw_grid_create(0.0, 6.0, static_cast<size_t>(nodes), 0, &graw), "grid");
  Grid g(graw);
  const size_t m = rnlw_grid_size(g.get());
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> amp(-1.0, 1.0), cen(0.0, 3.0), wid(0.5, 1.5),
      lo(0.3, 2.0), len(0.5, 2.5);
  json entries = json::array();
  bool all = true;
  auto record = [&](const rnlw_field* f, double a, double b, const std::string& kind) {
    double res = 0.0;
    check(rnlw_reduction_residual(f, a, b, &res), "reduction residual");
    const bool pass = res < tol;
    all = all && pass;
    entries.push_back({{"kind", kind}, {"a", a}, {"b", b}, {"residual", res}, {"passed", pass}});
  };
  for (std::int64_t k = 0; k < n; ++k) {
    std::vector<double> u(m, 0.0), ut(m, 0.0);
    for (int term = 0; term < 3; ++term) {
      const double au = amp(rng), av = amp(rng), c = cen(rng), w = wid(rng);
      for (size_t i = 0; i < m; ++i) {
        const double x = (rnlw_grid_node(g.get(), i) - c) / w;
        u[i] += au * std::exp(-x * x);
        ut[i] += av * std::exp(-x * x);
      }
    }
    const double a = lo(rng), b = a + len(rng);
    rnlw_field* f = nullptr;
    check(rnlw_field_create(g.get(), u.data(), ut.data(), &f), "field");
    Field fh(f);
    record(fh.get(), a, b, "random");
  }
  {
    // u = 1/r on [1, 2]: both sides equal 1/2
    rnlw_grid* iraw = nullptr;
    check(rnlw_grid_create(0.5, 3.0, static_cast<size_t>(nodes), 0, &iraw), "grid");
    Grid ig(iraw);
    std::vector<double> u(rnlw_grid_size(ig.get()));
    for (size_t i = 0; i < u.size(); ++i) u[i] = 1.0 / rnlw_grid_node(ig.get(), i);
    rnlw_field* f = nullptr;
    check(rnlw_field_create(ig.get(), u.data(), nullptr, &f), "field");
    Field fh(f);
    record(fh.get(), 1.0, 2.0, "inverse_r");
  }
  json rep{{"seed", seed}, {"tol", tol}, {"nodes", nodes}, {"entries", entries},
           {"all_passed", all}};
  write_text(out / "reduction_report.json", rep.dump(2));
  Outcome o;
  o.artifacts.push_back("reduction_report.json");
  o.summary["all_passed"] = all ? "true" : "false";
  if (!all) {
    o.exit = kVerification;
    o.message = "reduction identity residual above tolerance";
  }
  return o;
}

Outcome verify_ladder(const Params& p, const fs::path& out) {
  const auto ps = p.numbers("p", {3.5, 4.0, 4.5});
  json rows = json::array();
  bool all = true;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    require_field(ps[i] > 3.0 && ps[i] < 5.0, p.field("p") + "[" + std::to_string(i) + "]",
                  "must lie in (3, 5)");
    char* s = nullptr;
    check(rnlw_ladder(ps[i], 2.0 / (ps[i] - 1.0), nullptr, &s), "ladder");
    json j = json::parse(take(s));
    all = all && j["reached"].get<bool>() && j["increments_positive"].get<bool>();
    rows.push_back(j);
  }
  write_text(out / "ladder_report.json", json{{"runs", rows}, {"all_passed", all}}.dump(2));
  Outcome o;
  o.artifacts.push_back("ladder_report.json");
  if (!all) {
    o.exit = kVerification;
    o.message = "ladder did not reach 1 with positive increments";
  }
  return o;
}

Outcome verify_constants(const Params& p, const fs::path& out) {
  const auto ps = p.numbers("p", {3.5, 4.0, 4.5});
  json rows = json::array();
  bool all = true;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    require_field(ps[i] > 3.0 && ps[i] < 5.0, p.field("p") + "[" + std::to_string(i) + "]",
                  "must lie in (3, 5)");
    char* s = nullptr;
    check(rnlw_exponent_report(ps[i], &s), "exponent report");
    json j = json::parse(take(s));
    all = all && j["pair"]["admissible"].get<bool>();
    rows.push_back(j);
  }
  write_text(out / "constants.json", json{{"reports", rows}, {"all_admissible", all}}.dump(2));
  Outcome o;
  o.artifacts.push_back("constants.json");
  if (!all) {
    o.exit = kVerification;
    o.message = "interpolation pair not admissible";
  }
  return o;
}

Outcome verify_recurrence(const Params& p, const fs::path& out) {
  const double c = p.number("c", 1.0), omega = p.number("omega", 0.04);
  require_field(c > 0.0, p.field("c"), "must be positive");
  // exact power law S(A) = c A^{-omega} on log2 A in [1, 20000]
  std::vector<double> log_s;
  for (double x = 1.0; x <= 20000.0; x += 0.25)
    log_s.push_back(std::log(c) - omega * x * std::log(2.0));
  char* s = nullptr;
  check(rnlw_recurrence_check(1.0, log_s.data(), log_s.size(), 1.0 / 3.0, 2.0 / 3.0, 3.0, omega,
                              c, &s),
        "recurrence check");
  const std::string text = take(s);
  write_text(out / "recurrence.json", text);
  Outcome o;
  o.artifacts.push_back("recurrence.json");
  json j = json::parse(text);
  o.summary["verdict"] = j.value("verdict", "");
  if (j.value("verdict", "") != "holds") {
    o.exit = kVerification;
    o.message = "power-law input not verified";
  }
  return o;
}

}  // namespace

Outcome cmd_verify(const Params& p, std::uint64_t seed, const fs::path& out) {
  p.only({"target", "n", "nodes", "tol", "p", "c", "omega"});
  require_field(p.has("target"), p.field("target"), "missing");
  const std::string t = p.string("target", "");
  if (t == "channel") return verify_channel(p, seed, out);
  if (t == "reduction") return verify_reduction(p, seed, out);
  if (t == "ladder") return verify_ladder(p, out);
  if (t == "constants") return verify_constants(p, out);
  if (t == "recurrence") return verify_recurrence(p, out);
  throw ValidationError(p.field("target") + ": unknown target '" + t +
                        "' (channel, reduction, ladder, constants, recurrence)");
}

Outcome cmd_ladder(const Params& p, std::uint64_t, const fs::path& out) {
  p.only({"p", "beta0"});
  const double pp = p.number("p", 4.0);
  require_field(pp > 3.0 && pp < 5.0, p.field("p"), "must lie in (3, 5)");
  const double b0 = p.number("beta0", 2.0 / (pp - 1.0));
  require_field(b0 >= 2.0 / (pp - 1.0) && b0 < 1.0, p.field("beta0"),
                "must lie in [2/(p-1), 1)");
  char* s = nullptr;
  check(rnlw_ladder(pp, b0, (out / "ladder.csv").string().c_str(), &s), "ladder");
  const std::string text = take(s);
  write_text(out / "ladder.json", text);
  Outcome o;
  o.artifacts = {"ladder.csv", "ladder.json"};
  json j = json::parse(text);
  o.summary["steps"] = std::to_string(j["steps"].get<std::size_t>());
  o.summary["reached"] = j["reached"].get<bool>() ? "true" : "false";
  if (!j["reached"].get<bool>() || !j["increments_positive"].get<bool>()) {
    o.exit = kVerification;
    o.message = "ladder did not reach 1 with positive increments";
  }
  return o;
}

Outcome cmd_channel(const Params& p, std::uint64_t, const fs::path& out) {
  p.only({"amp", "vel", "center", "width", "R", "times", "tol", "r_max", "n"});
  const double c = p.number("center", 3.0), w = p.number("width", 1.0);
  require_field(w > 0.0, p.field("width"), "must be positive");
  require_field(c - w >= 0.0, p.field("center"), "bump must stay in r >= 0");
  const double R = p.number("R", std::max(0.0, c - w));
  require_field(R >= 0.0, p.field("R"), "must be nonnegative");
  const auto times = p.numbers("times", {0.5, 1.0, 2.0, 4.0, 8.0});
  const double tol = p.number("tol", 1e-8);
  Grid g = uniform_grid(p, 24.0, 2049);
  const size_t m = rnlw_grid_size(g.get());
  const double a = p.number("amp", 1.0), v = p.number("vel", 0.0);
  std::vector<double> u(m), ut(m);
  for (size_t i = 0; i < m; ++i) {
    const double b = smooth_bump((rnlw_grid_node(g.get(), i) - c) / w);
    u[i] = a * b;
    ut[i] = v * b;
  }
  rnlw_field* raw = nullptr;
  check(rnlw_field_create(g.get(), u.data(), ut.data(), &raw), "field");
  Field f(raw);
  Outcome o;
  char* s = nullptr;
  const rnlw_status st = rnlw_channel_check(f.get(), R, times.data(), times.size(), tol, &s);
  if (st == RNLW_ERR_NUMERICAL) {
    write_text(out / "channel.json", json{{"error", rnlw_last_error()}}.dump(2));
    o.artifacts.push_back("channel.json");
    o.exit = kVerification;
    o.message = rnlw_last_error();
    return o;
  }
  check(st, "channel check");
  const std::string text = take(s);
  write_text(out / "channel.json", text);
  o.artifacts.push_back("channel.json");
  o.summary["direction"] = json::parse(text).value("direction", "");
  return o;
}

Outcome cmd_sweep(const Params& p, std::uint64_t seed, const fs::path& out) {
  p.only({"base", "axis", "values"});
  require_field(p.has("base"), p.field("base"), "missing");
  const json& base = p.raw()["base"];
  require_field(base.is_object() && base.contains("command") && base["command"].is_string(),
                p.field("base.command"), "missing");
  require_field(base["command"] != "sweep", p.field("base.command"), "sweeps do not nest");
  const json bparams = base.value("parameters", json::object());
  require_field(bparams.is_object(), p.field("base.parameters"), "expected a table");
  require_field(p.has("axis"), p.field("axis"), "missing");
  const std::string axis = p.string("axis", "");
  require_field(bparams.contains(axis), p.field("axis"),
                "axis '" + axis + "' not found in base parameters");
  require_field(bparams[axis].is_number(), p.field("axis"),
                "axis '" + axis + "' is not a scalar parameter");
  const auto values = p.numbers("values", {});

  struct Job {
    double value;
    Outcome outcome;
  };
  std::vector<Job> jobs(values.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < jobs.size();) {
      Job& job = jobs[i];
      job.value = values[i];
      json cfg{{"command", base["command"]}, {"parameters", bparams}, {"seed", seed}};
      cfg["parameters"][axis] = values[i];
      const fs::path dir = out / ("job_" + std::to_string(i));
      try {
        job.outcome = run_command(cfg, dir);
      } catch (const ValidationError& e) {
        job.outcome.exit = kValidation;
        job.outcome.message = e.what();
      } catch (const std::exception& e) {
        job.outcome.exit = kRuntime;
        job.outcome.message = e.what();
      }
    }
  };
  const unsigned nt = std::max(1u, std::min<unsigned>(thread_count(),
                                                     static_cast<unsigned>(jobs.size())));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < nt; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  std::set<std::string> keys;
  for (const auto& j : jobs)
    for (const auto& kv : j.outcome.summary) keys.insert(kv.first);
  std::string csv = axis + ",exit";
  for (const auto& k : keys) csv += "," + k;
  csv += ",message\n";
  Outcome o;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    const auto& j = jobs[i];
    csv += fmt(j.value) + "," + std::to_string(j.outcome.exit);
    for (const auto& k : keys) {
      auto it = j.outcome.summary.find(k);
      csv += "," + (it == j.outcome.summary.end() ? std::string() : it->second);
    }
    std::string msg = j.outcome.message;
    std::replace(msg.begin(), msg.end(), ',', ';');
    std::replace(msg.begin(), msg.end(), '\n', ' ');
    csv += "," + msg + "\n";
    for (const auto& a : j.outcome.artifacts)
      o.artifacts.push_back("job_" + std::to_string(i) + "/" + a);
    if (j.outcome.exit != kOk && (o.exit == kOk || j.outcome.exit < o.exit)) {
      o.exit = j.outcome.exit;
      o.message = "job " + std::to_string(i) + ": " + j.outcome.message;
    }
  }
  // log-log fit of every positive numeric column against a positive axis
  if (jobs.size() >= 2 &&
      std::all_of(jobs.begin(), jobs.end(), [](const Job& j) { return j.value > 0.0; })) {
    std::string fit = "fit_loglog_slope,";
    bool any = false;
    for (const auto& k : keys) {
      std::vector<double> x, y;
      for (const auto& j : jobs) {
        auto it = j.outcome.summary.find(k);
        if (it == j.outcome.summary.end()) break;
        char* end = nullptr;
        const double v = std::strtod(it->second.c_str(), &end);
        if (end == it->second.c_str() || *end != '\0' || !(v > 0.0)) break;
        x.push_back(j.value);
        y.push_back(v);
      }
      std::string cell;
      if (x.size() == jobs.size() && (k == "y_norm" || k == "companion_norm")) {
        cell = fmt(loglog_fit(x, y));
        any = true;
      }
      fit += "," + cell;
    }
    if (any) csv += fit + ",\n";
  }
  write_text(out / "summary.csv", csv);
  o.artifacts.insert(o.artifacts.begin(), "summary.csv");
  return o;
}

}  // namespace cli
