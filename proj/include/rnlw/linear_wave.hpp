#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "rnlw/core.hpp"

namespace rnlw {

/// Reduced snapshot w = r u at time t.
struct LinearState {
  ReducedPair pair;
  double t = 0.0;
};

using ReducedTrajectory = std::vector<LinearState>;

/// z1 = w_t - w_r (outgoing), z2 = w_t + w_r (incoming).
struct CharacteristicFields {
  RadialGrid grid;
  std::vector<double> z1;
  std::vector<double> z2;
};

CharacteristicFields characteristic_fields(const ReducedPair& w);
/// max_i |z1 + z2 - 2 w_t| + |z2 - z1 - 2 w_r| over nodes.
double recombination_defect(const ReducedPair& w, const CharacteristicFields& z);

struct PropagateOptions {
  /// Samples with |u|, |u_t| at most this (relative to the sup) count as zero
  /// when the support of the data is measured.
  double support_tol = 1e-12;
  /// Propagate even if the data would reach r_max within |t|.
  bool allow_truncation = false;
};

/// Support [inner, outer] of a field above a threshold; empty if none.
struct SupportAnnulus {
  bool empty = true;
  double inner = 0.0;
  double outer = 0.0;
};

SupportAnnulus measured_support(const FieldPair& f, double tol);

namespace linear {

/// Free radial wave S(t)(u0, u1): d'Alembert for w = r u with the odd extension
/// at r = 0, evaluated exactly on the grid through its sine-series lattice.
/// Needs a uniform grid starting at r = 0. Throws Truncation when the data
/// support plus |t| reaches r_max.
FieldPair free_propagate(const FieldPair& f, double t, const PropagateOptions& opt = {});

/// int_0^{r_max} (w_r^2 + w_t^2) dr for the sine-series interpolant of w = r u
/// and w_t = r u_t; exactly conserved by free_propagate.
double reduced_energy(const FieldPair& f);

/// Pointwise d'Alembert formula with odd extensions of w0 = r u0 and w1 = r u1
/// given as callables on r >= 0; returns w(r, t). Reference evaluator.
double dalembert_w(const std::function<double(double)>& w0,
                   const std::function<double(double)>& w1, double r, double t);

/// Source for w_tt - w_rr = h sampled on the grid at increasing times.
struct SourceSamples {
  RadialGrid grid;
  std::vector<double> times;
  std::vector<std::vector<double>> h;
};

struct DuhamelResult {
  FieldPair pair;
  std::vector<std::string> warnings;
};

/// int_{t0}^{t1} S(t1 - tau)(0, h(tau)/r) dtau with the trapezoid rule over
/// the sample times (second order). Warns when the time step exceeds the
/// grid spacing.
DuhamelResult duhamel_integrate(const SourceSamples& h, double t0, double t1);

/// Same integral with h given as a callable h(r, t) and the midpoint rule on
/// `steps` equal subintervals.
DuhamelResult duhamel_integrate(const RadialGrid& g,
                                const std::function<double(double, double)>& h, double t0,
                                double t1, std::size_t steps);

/// Energy of free_propagate(f, t) on R + |t| < |x| < r_max.
double exterior_energy(const FieldPair& f, double t, double R);

enum class Direction { None, Forward, Backward, Both };
std::string to_string(Direction d);

struct ChannelMargin {
  double t = 0.0;  // signed time
  double lhs = 0.0;
  double rhs = 0.0;
};

struct ChannelReport {
  double R = 0.0;
  Direction direction = Direction::None;
  double worst_margin = 0.0;  // best direction's min over times of lhs - rhs
  std::vector<ChannelMargin> margins;
  std::string to_json() const;
};

/// Exterior energies at +t and -t against 2 pi int_R^inf (w_r^2 + w_t^2)(0).
/// A direction holds when lhs >= rhs - tol max(1, rhs) at all listed times.
/// Throws Numerical when neither direction holds.
ChannelReport channel_check(const FieldPair& f, double R, const std::vector<double>& times,
                            double tol = 1e-8);

struct ChannelSuiteEntry {
  ChannelReport report;
  Direction reversed = Direction::None;
  bool passed = false;   // some direction holds
  bool flipped = false;  // reversal swaps forward and backward
  std::string error;     // set when no direction holds
};

struct ChannelSuite {
  std::uint64_t seed = 0;
  std::vector<ChannelSuiteEntry> entries;
  std::size_t passed = 0;
  std::size_t flipped = 0;
  bool all_passed() const { return passed == entries.size() && flipped == entries.size(); }
  std::string to_json() const;
};

/// n random compactly supported data (smooth bumps with random amplitudes,
/// widths and channel radius, drawn from seed) checked at t = 0.5, 1, 2, 4, 8
/// together with their time reversals.
ChannelSuite channel_suite(std::size_t n, std::uint64_t seed, double tol = 1e-8);

/// (u, u_t) -> (u, -u_t)
FieldPair time_reversed(const FieldPair& f);

enum class Family { Z1, Z2 };

/// Window-norm transport check along characteristics. For Z1 compares
/// z1 on [r0, 4 r0] at t0 with z1 on [r0 + M, 4 r0 + M] at t0 + M; for Z2 the
/// later window is taken at t0 - M. Returns |difference| minus the source
/// bound (int_{r0}^{4r0} (int_0^M h(r + s, t0 +- s) ds)^2 dr)^{1/2}.
double transport_residual(const ReducedTrajectory& traj,
                          const std::function<double(double, double)>& h, double r0,
                          double t0, double M, Family which);

/// Support of free_propagate(f, t) above 1e-10 (relative). The data must be
/// compactly supported in the sense of measured_support at 1e-12.
SupportAnnulus huygens_support(const FieldPair& f, double t);

}  // namespace linear

}  // namespace rnlw
