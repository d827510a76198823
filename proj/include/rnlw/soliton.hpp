#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "rnlw/core.hpp"

namespace rnlw {

enum class Provenance { FixedPointTail, BackwardExtension, Explicit };
std::string to_string(Provenance p);

/// Radial solution of -Lap W = |W|^{p-1} W sampled on a geometric grid.
struct SolitonProfile {
  RadialGrid grid;
  std::vector<double> y;
  std::vector<double> yp;
  /// Second derivative: closed form for explicit families, the ODE right-hand
  /// side is never used for it (constructed profiles differentiate yp).
  std::vector<double> ypp;
  double p = 5.0;
  Provenance provenance = Provenance::Explicit;
  /// For backward extensions: index of the tail start R in the grid.
  std::size_t tail_index = 0;
  /// Lyapunov monotonicity record of the backward integration.
  std::size_t lyapunov_violations = 0;
  double lyapunov_worst = 0.0;
  std::size_t ode_steps = 0;

  /// W(r) inside the grid by cubic Hermite interpolation; beyond r_max by the
  /// two-term tail (A + B r^{3-p}) / r matched to y and yp at r_max.
  double value(double r) const;
  /// max over interior nodes of |y'' + 2y'/r + |y|^{p-1}y| divided by the sum
  /// of the magnitudes of the three terms.
  double ode_residual() const;

  void write_csv(std::ostream& os) const;  // r,y,yp
};

/// phi(r) = r W(r) - 1 on [R, r_max].
struct TailProfile {
  double p = 5.0;
  double R = 0.0;
  RadialGrid grid;
  std::vector<double> phi;
  std::vector<double> phip;
  std::size_t iterations = 0;
  /// A priori bound p (1 + delta)^{p-1} R^{3-p} / ((p-2)(p-3)) with delta
  /// twice the size of the first iterate.
  double contraction_bound = 0.0;
  /// Largest observed ratio d(phi_{n+1}, phi_n) / d(phi_n, phi_{n-1}).
  double contraction_factor = 0.0;
  /// Envelope |phi| <= C r^{3-p}: fitted C and log-log slope of |phi|.
  double envelope_C = 0.0;
  double envelope_slope = 0.0;
  std::string to_json() const;
};

namespace soliton {

struct TailOptions {
  double tol = 1e-14;
  /// r_max = R * 10^decades.
  double decades = 3.0;
  std::size_t nodes_per_decade = 2000;
  std::size_t max_iterations = 200;
};

/// Smallest R = 10 * 2^k with a contraction bound below 1/4.
double default_tail_radius(double p);

/// Iterate phi <- L(phi) from phi = 0, where
/// L(phi)(r) = -int_r^inf (t - r) |1 + phi|^{p-1} (1 + phi) t^{1-p} dt,
/// with the part beyond r_max in closed form. Throws Divergence when the
/// contraction bound is at least 1/2.
TailProfile tail_fixed_point(double p, double R, const TailOptions& opt = {});

struct ExtendOptions {
  double rel_tol = 1e-12;
  double abs_tol = 1e-14;
};

/// Integrate rho = 1 + phi inward from R to r_min (rounded down to a node of
/// the tail's geometric lattice) and join with the tail. Throws Numerical on
/// integrator breakdown or a Lyapunov monotonicity violation.
SolitonProfile extend_inward(const TailProfile& tail, double r_min,
                             const ExtendOptions& opt = {});

RadialGrid default_explicit_grid();

/// W_1 = C r^{-theta}, theta = 2/(p-1), C = (theta (1-theta))^{1/(p-1)}; 3 < p < 5.
SolitonProfile explicit_singular(double p, const RadialGrid& g = default_explicit_grid());
double singular_constant(double p);

/// +-lambda^{-1/2} (1 + r^2/(3 lambda^2))^{-1/2}, the p = 5 family.
SolitonProfile aubin_talenti(double lambda, int sgn,
                             const RadialGrid& g = default_explicit_grid());

struct AnnulusSample {
  double eps = 0.0;
  /// 4 pi int_eps^top r^2 |W|^{p_c} dr with top = 10^4 r_min and
  /// p_c = 3(p-1)/2, the Lebesgue exponent of the embedding of Hdot^{s_p}.
  double value = 0.0;
};

struct Diagnostics {
  double p = 0.0;
  bool nontrivial = false;
  bool positive = false;
  /// sup r^{p-2} |W - 1/r| and sup r^2 |W'| over the two outer decades.
  double tail_deviation = 0.0;
  double derivative_decay = 0.0;
  /// v = r^theta W: min |v| on the innermost decade against the median of
  /// |v| on the decade before it.
  double v_floor = 0.0;
  double v_median = 0.0;
  bool v_nonvanishing = false;
  std::vector<AnnulusSample> annulus;
  /// The innermost decade of eps adds at least a quarter of what the decade
  /// before it added (a convergent integral shrinks them geometrically).
  bool annulus_diverges = false;
  /// Sign changes of v' and interior extrema of v on the inner and outer decades.
  bool v_monotone_inner = false;
  bool v_monotone_outer = false;
  std::size_t bad_extrema = 0;
  bool critical_case = false;
  std::string to_json() const;
};

/// Needs a profile spanning at least four decades.
Diagnostics diagnostics(const SolitonProfile& s);

struct VRNorms {
  double R = 0.0;
  /// ||V_R||_{Y_{s_p}} over all time and its exponents.
  double y_norm = 0.0;
  double y_q = 0.0, y_r = 0.0;
  /// ||V_R||_{L^{2p/(p-3)} L^{2p}}
  double companion_norm = 0.0;
};

/// V_R(r, t) = W(R + |t|) for r <= R + |t| and W(r) beyond.
std::function<double(double, double)> truncated_soliton(const SolitonProfile& s, double R);

/// Space-time norms of V_R with the time integral taken over the whole line.
VRNorms truncated_soliton_norms(const SolitonProfile& s, double R);

struct VRScaling {
  std::vector<VRNorms> rows;
  double y_slope = 0.0;
  double companion_slope = 0.0;
  double expected_y_slope = 0.0;  // 1/2 - s_p
  double expected_companion_slope = -0.5;
  bool within(double tol) const;
  std::string to_json() const;
};

VRScaling truncated_soliton_scaling(const SolitonProfile& s, const std::vector<double>& Rs);

/// Least-squares slope of log y against log x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace soliton

}  // namespace rnlw
