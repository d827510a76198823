#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "rnlw/core.hpp"

namespace rnlw {

enum class Sign { Focusing, Defocusing };
enum class Scheme { LeapfrogU, CharacteristicsW };

std::string to_string(Sign s);
std::string to_string(Scheme s);

/// +1 for focusing, -1 for defocusing.
inline double sign_value(Sign s) { return s == Sign::Focusing ? 1.0 : -1.0; }

/// u_tt = Lap u + sigma |u|^{p-1} u + forcing(r, t).
struct EvolutionConfig {
  double p = 4.0;
  Sign sign = Sign::Defocusing;
  /// Courant ratio dt / h of the base step.
  double cfl = 0.5;
  Scheme scheme = Scheme::LeapfrogU;
  /// Absolute sup-norm level declared blow-up; 0 means 1e6 times the initial sup.
  double blowup_threshold = 0.0;
  double t_final = 1.0;
  /// Snapshot spacing in time; 0 stores only the initial and final states.
  double snapshot_every = 0.0;
  std::function<double(double, double)> forcing;

  void validate() const;
  std::string to_json() const;
};

enum class RunStatus { Completed, Blowup, Truncated };
std::string to_string(RunStatus s);

struct Snapshot {
  double t = 0.0;
  FieldPair field;
};

struct Trajectory {
  EvolutionConfig config;
  std::vector<Snapshot> snapshots;
  RunStatus status = RunStatus::Completed;
  /// Time at which the blow-up threshold was crossed (or the step collapsed).
  double t_est = 0.0;
  std::size_t steps = 0;
  double dt_min = 0.0;
  std::string diagnostics;

  const Snapshot& initial() const { return snapshots.front(); }
  const Snapshot& final() const { return snapshots.back(); }
};

/// Persist as a directory with config.json, snapshots.csv (long form
/// t,r,u,ut) and status.json.
void save_trajectory(const Trajectory& traj, const std::filesystem::path& dir);

namespace nonlinear {

/// E = (1/2) 4 pi int r^2 (u_t^2 + u_r^2) - sigma/(p+1) 4 pi int r^2 |u|^{p+1}.
double energy(const FieldPair& f, double p, Sign sign);
/// 4 pi int r^2 |u|^{p+1}
double potential_integral(const FieldPair& f, double p);

/// Largest eigenvalue of -L for the radial Laplacian on this grid; the
/// leapfrog step is stable for dt < 2 / sqrt(lambda).
double laplacian_spectral_radius(const RadialGrid& g);

/// Evolve the data to cfg.t_final (which may be negative). Needs a uniform grid
/// starting at r = 0; the outer node is held at its initial value.
Trajectory evolve(const FieldPair& f0, const EvolutionConfig& cfg);

enum class Verdict { GlobalBounded, Blowup, Undecided };
std::string to_string(Verdict v);

struct Classification {
  Verdict verdict = Verdict::Undecided;
  std::optional<double> t_est;
  /// T_est of the original run and of the reruns with halved steps.
  std::vector<double> t_est_sequence;
  double final_norm = 0.0;
  std::string reason;
};

/// Blow-up when the run and two reruns with cfl/2 and cfl/4 all cross the
/// threshold with successive T_est within 5%; global_bounded when the run
/// completed with Hdot^{s_p} x Hdot^{s_p - 1} norm below the cap at every
/// snapshot; undecided otherwise.
Classification classify(const Trajectory& traj, double sp_norm_cap);

struct MorawetzReport {
  double R = 0.0;
  double T = 0.0;
  double energy = 0.0;
  /// The five left-hand terms: interior energy, sphere trace, interior
  /// potential, weighted exterior potential, final interior mass.
  std::vector<double> terms;
  double lhs_sum = 0.0;
  /// int_0^T int |u|^{p+1} / |x| and its bound 2 (p+1)/(p-1) E.
  double weighted_potential = 0.0;
  double weighted_bound = 0.0;
  bool terms_nonnegative = true;
  bool sum_bounded = true;
  bool weighted_bounded = true;
  std::string to_json() const;
};

/// Time integrals use the trapezoid rule over the stored snapshots.
MorawetzReport morawetz_report(const Trajectory& traj, double R, double tol = 1e-6);

struct PerturbationResult {
  std::vector<Snapshot> h;
  std::vector<Snapshot> h_linear;
  /// ||(h0, h1)||_{Hdot^1 x L^2}
  double data_norm = 0.0;
  /// sup_t ||(h - h_L, d/dt (h - h_L))||_{Hdot^1 x L^2}
  double deviation = 0.0;
  double ratio() const { return data_norm > 0.0 ? deviation / data_norm : 0.0; }
};

/// h_tt - Lap h = F(V + h) - F(V) for a background V(r, t), alongside the free
/// evolution h_L of the same data. The difference h - h_L is evolved as its
/// own unknown so that it is not lost to cancellation.
PerturbationResult perturbed_evolve(const std::function<double(double, double)>& V,
                                    const FieldPair& h0, const EvolutionConfig& cfg);

struct RadiusSample {
  double t = 0.0;
  double radius = 0.0;     // measured essential radius
  double predicted = 0.0;  // R(0) + |t|
};

struct RadiusTrack {
  std::vector<RadiusSample> samples;
  double spacing = 0.0;
  bool forward_holds = false;
  bool backward_holds = false;
  bool law_holds() const { return forward_holds || backward_holds; }
};

/// Essential radius of each perturbation snapshot: the largest r where |r h|
/// exceeds tol times its initial sup (|r h_t| if the initial h vanishes). The law
/// R(t) = R(0) + |t| is checked within one grid spacing separately for t > 0
/// and t < 0. Snapshots must include t = 0; data reaching r_max is rejected.
RadiusTrack support_radius_track(const std::vector<Snapshot>& h, double tol);

}  // namespace nonlinear

}  // namespace rnlw
