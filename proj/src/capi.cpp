#include "rnlw/rnlw.h"

#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <new>
#include <string>

#include "json.hpp"
#include "rnlw/analysis.hpp"
#include "rnlw/core.hpp"
#include "rnlw/error.hpp"
#include "rnlw/linear_wave.hpp"
#include "rnlw/nonlinear_wave.hpp"
#include "rnlw/soliton.hpp"
#include "rnlw/spectral.hpp"

struct rnlw_grid {
  rnlw::RadialGrid g;
};
struct rnlw_field {
  rnlw::FieldPair f;
};
struct rnlw_trajectory {
  rnlw::Trajectory t;
};
struct rnlw_profile {
  rnlw::SolitonProfile s;
};

namespace {

thread_local std::string last_error;

rnlw_status set_error(rnlw_status st, const std::string& msg) {
  last_error = msg;
  return st;
}

template <class F>
rnlw_status guarded(F&& body) {
  try {
    last_error.clear();
    body();
    return RNLW_OK;
  } catch (const rnlw::Error& e) {
    return set_error(static_cast<rnlw_status>(e.kind()), e.what());
  } catch (const std::bad_alloc&) {
    return set_error(RNLW_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return set_error(RNLW_ERR_INTERNAL, e.what());
  }
}

void need(const void* p, const char* name) {
  if (!p) rnlw::fail(rnlw::ErrorKind::InvalidArgument, std::string(name) + " is null");
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void emit(char** json, const std::string& s) {
  if (json) *json = dup_string(s);
}

rnlw::EvolutionConfig to_cpp(const rnlw_evolve_config& c) {
  rnlw::EvolutionConfig e;
  e.p = c.p;
  e.sign = c.focusing ? rnlw::Sign::Focusing : rnlw::Sign::Defocusing;
  e.cfl = c.cfl;
  if (c.scheme != 0 && c.scheme != 1)
    rnlw::fail(rnlw::ErrorKind::InvalidArgument, "scheme must be 0 or 1");
  e.scheme = c.scheme == 1 ? rnlw::Scheme::CharacteristicsW : rnlw::Scheme::LeapfrogU;
  e.blowup_threshold = c.blowup_threshold;
  e.t_final = c.t_final;
  e.snapshot_every = c.snapshot_every;
  e.validate();
  return e;
}

nlohmann::json num(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

}  // namespace

extern "C" {

const char* rnlw_version(void) { return "0.1.0"; }
const char* rnlw_last_error(void) { return last_error.c_str(); }
void rnlw_string_free(char* s) { std::free(s); }

rnlw_status rnlw_grid_create(double r_min, double r_max, size_t n, int geometric,
                             rnlw_grid** out) {
  return guarded([&] {
    need(out, "out");
    auto rule = geometric ? rnlw::Spacing::Geometric : rnlw::Spacing::Uniform;
    *out = new rnlw_grid{rnlw::make_grid(r_min, r_max, n, rule)};
  });
}
void rnlw_grid_free(rnlw_grid* g) { delete g; }
size_t rnlw_grid_size(const rnlw_grid* g) { return g ? g->g.size() : 0; }
double rnlw_grid_node(const rnlw_grid* g, size_t i) {
  if (!g || i >= g->g.size()) return std::numeric_limits<double>::quiet_NaN();
  return g->g[i];
}

rnlw_status rnlw_field_create(const rnlw_grid* g, const double* u, const double* ut,
                              rnlw_field** out) {
  return guarded([&] {
    need(g, "grid");
    need(u, "u");
    need(out, "out");
    const std::size_t n = g->g.size();
    std::vector<double> uv(u, u + n);
    std::vector<double> tv = ut ? std::vector<double>(ut, ut + n) : std::vector<double>(n, 0.0);
    *out = new rnlw_field{rnlw::FieldPair(g->g, std::move(uv), std::move(tv))};
  });
}

rnlw_status rnlw_field_gaussian(const rnlw_grid* g, double amp, double width, double vel_amp,
                                rnlw_field** out) {
  return guarded([&] {
    need(g, "grid");
    need(out, "out");
    rnlw::require(width > 0.0, "width must be positive");
    auto bump = [width](double r) { return std::exp(-(r * r) / (width * width)); };
    *out = new rnlw_field{rnlw::FieldPair::sample(
        g->g, [&](double r) { return amp * bump(r); },
        [&](double r) { return vel_amp * bump(r); })};
  });
}

rnlw_status rnlw_field_read_csv(const char* path, rnlw_field** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    std::ifstream is(path);
    if (!is) rnlw::fail(rnlw::ErrorKind::Io, std::string("cannot open ") + path);
    *out = new rnlw_field{rnlw::io::read_csv(is)};
  });
}

rnlw_status rnlw_field_write_csv(const rnlw_field* f, const char* path) {
  return guarded([&] {
    need(f, "field");
    need(path, "path");
    std::ofstream os(path);
    if (!os) rnlw::fail(rnlw::ErrorKind::Io, std::string("cannot write ") + path);
    rnlw::io::write_csv(os, f->f);
  });
}

size_t rnlw_field_size(const rnlw_field* f) { return f ? f->f.u.size() : 0; }

rnlw_status rnlw_field_samples(const rnlw_field* f, double* r, double* u, double* ut) {
  return guarded([&] {
    need(f, "field");
    const std::size_t n = f->f.u.size();
    for (std::size_t i = 0; i < n; ++i) {
      if (r) r[i] = f->f.grid[i];
      if (u) u[i] = f->f.u[i];
      if (ut) ut[i] = f->f.ut[i];
    }
  });
}

void rnlw_field_free(rnlw_field* f) { delete f; }

rnlw_status rnlw_sobolev_norm(const rnlw_field* f, double s, int pair, double* value,
                              double* est_error) {
  return guarded([&] {
    need(f, "field");
    need(value, "value");
    rnlw::NormValue v = pair ? rnlw::spectral::sobolev_norm(f->f, rnlw::SobolevIndex(s))
                             : rnlw::spectral::sobolev_norm(f->f.grid, f->f.u, s);
    *value = v.value;
    if (est_error) *est_error = v.est_error;
  });
}

rnlw_status rnlw_energy(const rnlw_field* f, double p, int focusing, double* out) {
  return guarded([&] {
    need(f, "field");
    need(out, "out");
    *out = rnlw::nonlinear::energy(f->f, p,
                                   focusing ? rnlw::Sign::Focusing : rnlw::Sign::Defocusing);
  });
}

rnlw_status rnlw_reduction_residual(const rnlw_field* f, double a, double b, double* out) {
  return guarded([&] {
    need(f, "field");
    need(out, "out");
    *out = rnlw::reduction_identity_residual(f->f, a, b);
  });
}

rnlw_status rnlw_free_propagate(const rnlw_field* f, double t, rnlw_field** out) {
  return guarded([&] {
    need(f, "field");
    need(out, "out");
    *out = new rnlw_field{rnlw::linear::free_propagate(f->f, t)};
  });
}

rnlw_status rnlw_channel_check(const rnlw_field* f, double R, const double* times,
                               size_t n_times, double tol, char** json) {
  return guarded([&] {
    need(f, "field");
    need(times, "times");
    auto rep = rnlw::linear::channel_check(f->f, R, std::vector<double>(times, times + n_times),
                                           tol);
    emit(json, rep.to_json());
  });
}

rnlw_status rnlw_channel_suite(size_t n, uint64_t seed, double tol, int* all_passed,
                               char** json) {
  return guarded([&] {
    auto suite = rnlw::linear::channel_suite(n, seed, tol);
    if (all_passed) *all_passed = suite.all_passed() ? 1 : 0;
    emit(json, suite.to_json());
  });
}

void rnlw_evolve_config_default(rnlw_evolve_config* cfg) {
  if (!cfg) return;
  rnlw::EvolutionConfig d;
  cfg->p = d.p;
  cfg->focusing = d.sign == rnlw::Sign::Focusing;
  cfg->cfl = d.cfl;
  cfg->scheme = d.scheme == rnlw::Scheme::CharacteristicsW ? 1 : 0;
  cfg->blowup_threshold = d.blowup_threshold;
  cfg->t_final = d.t_final;
  cfg->snapshot_every = d.snapshot_every;
}

rnlw_status rnlw_evolve_config_json(const rnlw_evolve_config* cfg, char** json) {
  return guarded([&] {
    need(cfg, "config");
    emit(json, to_cpp(*cfg).to_json());
  });
}

rnlw_status rnlw_evolve(const rnlw_field* f, const rnlw_evolve_config* cfg,
                        rnlw_trajectory** out) {
  return guarded([&] {
    need(f, "field");
    need(cfg, "config");
    need(out, "out");
    *out = new rnlw_trajectory{rnlw::nonlinear::evolve(f->f, to_cpp(*cfg))};
  });
}

void rnlw_trajectory_free(rnlw_trajectory* t) { delete t; }

int rnlw_trajectory_status(const rnlw_trajectory* t) {
  if (!t) return -1;
  switch (t->t.status) {
    case rnlw::RunStatus::Completed: return 0;
    case rnlw::RunStatus::Blowup: return 1;
    case rnlw::RunStatus::Truncated: return 2;
  }
  return -1;
}

size_t rnlw_trajectory_snapshot_count(const rnlw_trajectory* t) {
  return t ? t->t.snapshots.size() : 0;
}

rnlw_status rnlw_trajectory_snapshot(const rnlw_trajectory* t, size_t i, double* time,
                                     rnlw_field** out) {
  return guarded([&] {
    need(t, "trajectory");
    if (i >= t->t.snapshots.size())
      rnlw::fail(rnlw::ErrorKind::OutOfDomain, "snapshot index out of range");
    const auto& s = t->t.snapshots[i];
    if (time) *time = s.t;
    if (out) *out = new rnlw_field{s.field};
  });
}

rnlw_status rnlw_trajectory_save(const rnlw_trajectory* t, const char* dir) {
  return guarded([&] {
    need(t, "trajectory");
    need(dir, "dir");
    rnlw::save_trajectory(t->t, dir);
  });
}

rnlw_status rnlw_classify(const rnlw_trajectory* t, double norm_cap, char** json) {
  return guarded([&] {
    need(t, "trajectory");
    auto c = rnlw::nonlinear::classify(t->t, norm_cap);
    nlohmann::json j;
    j["verdict"] = rnlw::nonlinear::to_string(c.verdict);
    j["t_est"] = c.t_est ? num(*c.t_est) : nlohmann::json(nullptr);
    j["t_est_sequence"] = nlohmann::json::array();
    for (double v : c.t_est_sequence) j["t_est_sequence"].push_back(num(v));
    j["final_norm"] = num(c.final_norm);
    j["reason"] = c.reason;
    j["status"] = rnlw::to_string(t->t.status);
    emit(json, j.dump(2));
  });
}

rnlw_status rnlw_morawetz(const rnlw_trajectory* t, double R, char** json) {
  return guarded([&] {
    need(t, "trajectory");
    emit(json, rnlw::nonlinear::morawetz_report(t->t, R).to_json());
  });
}

rnlw_status rnlw_spacetime_norm(const rnlw_trajectory* t, int kind, double s, double q, double r,
                                double t0, double t1, double* value, double* time_error) {
  return guarded([&] {
    need(t, "trajectory");
    need(value, "value");
    if (kind < 0 || kind > 4) rnlw::fail(rnlw::ErrorKind::InvalidArgument, "unknown norm kind");
    rnlw::analysis::NormSpec ns;
    ns.kind = static_cast<rnlw::analysis::NormKind>(kind);
    ns.s = s;
    ns.q = q;
    ns.r = r;
    auto v = rnlw::analysis::spacetime_norm(t->t.snapshots, ns, t->t.config.p, t0, t1);
    *value = v.value;
    if (time_error) *time_error = v.time_error;
  });
}

rnlw_status rnlw_soliton_construct(double p, double R, double r_min, rnlw_profile** out,
                                   char** tail_json) {
  return guarded([&] {
    need(out, "out");
    if (R <= 0.0) R = rnlw::soliton::default_tail_radius(p);
    if (r_min <= 0.0) r_min = 1e-4 * R;
    auto tail = rnlw::soliton::tail_fixed_point(p, R);
    auto prof = rnlw::soliton::extend_inward(tail, r_min);
    emit(tail_json, tail.to_json());
    *out = new rnlw_profile{std::move(prof)};
  });
}

rnlw_status rnlw_soliton_explicit(double p, double lambda, rnlw_profile** out) {
  return guarded([&] {
    need(out, "out");
    if (p == 5.0)
      *out = new rnlw_profile{rnlw::soliton::aubin_talenti(lambda, 1)};
    else
      *out = new rnlw_profile{rnlw::soliton::explicit_singular(p)};
  });
}

void rnlw_profile_free(rnlw_profile* s) { delete s; }

rnlw_status rnlw_profile_write_csv(const rnlw_profile* s, const char* path) {
  return guarded([&] {
    need(s, "profile");
    need(path, "path");
    std::ofstream os(path);
    if (!os) rnlw::fail(rnlw::ErrorKind::Io, std::string("cannot write ") + path);
    s->s.write_csv(os);
  });
}

rnlw_status rnlw_profile_value(const rnlw_profile* s, double r, double* out) {
  return guarded([&] {
    need(s, "profile");
    need(out, "out");
    *out = s->s.value(r);
  });
}

rnlw_status rnlw_profile_residual(const rnlw_profile* s, double* out) {
  return guarded([&] {
    need(s, "profile");
    need(out, "out");
    *out = s->s.ode_residual();
  });
}

rnlw_status rnlw_profile_diagnostics(const rnlw_profile* s, char** json) {
  return guarded([&] {
    need(s, "profile");
    emit(json, rnlw::soliton::diagnostics(s->s).to_json());
  });
}

rnlw_status rnlw_truncated_soliton_norms(const rnlw_profile* s, double R, double* y_norm,
                                         double* companion_norm) {
  return guarded([&] {
    need(s, "profile");
    auto n = rnlw::soliton::truncated_soliton_norms(s->s, R);
    if (y_norm) *y_norm = n.y_norm;
    if (companion_norm) *companion_norm = n.companion_norm;
  });
}

rnlw_status rnlw_truncated_soliton_scaling(const rnlw_profile* s, const double* radii, size_t n,
                                           char** json) {
  return guarded([&] {
    need(s, "profile");
    need(radii, "radii");
    auto sc = rnlw::soliton::truncated_soliton_scaling(s->s, std::vector<double>(radii, radii + n));
    emit(json, sc.to_json());
  });
}

rnlw_status rnlw_exponent_report(double p, char** json) {
  return guarded([&] {
    emit(json, rnlw::analysis::regularity_constants(rnlw::analysis::to_rational(p)).to_json());
  });
}

rnlw_status rnlw_ladder(double p, double beta0, const char* csv_path, char** json) {
  return guarded([&] {
    auto st = rnlw::analysis::decay_ladder(p, beta0);
    if (csv_path) {
      std::ofstream os(csv_path);
      if (!os) rnlw::fail(rnlw::ErrorKind::Io, std::string("cannot write ") + csv_path);
      st.write_csv(os);
    }
    emit(json, st.to_json());
  });
}

rnlw_status rnlw_recurrence_check(double log2_a0, const double* log_s, size_t n, double alpha,
                                  double beta, double l, double omega, double c, char** json) {
  return guarded([&] {
    need(log_s, "log_s");
    rnlw::analysis::LogLattice lat;
    lat.log2_a0 = log2_a0;
    lat.log_s.assign(log_s, log_s + n);
    emit(json, rnlw::analysis::recurrence_decay_check(lat, alpha, beta, l, omega, c).to_json());
  });
}

}  // extern "C"
