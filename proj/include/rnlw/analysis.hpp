#pragma once

#include <boost/rational.hpp>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rnlw/nonlinear_wave.hpp"

namespace rnlw {

using Rational = boost::rational<long long>;

namespace analysis {

/// Exact rational for a double with a short terminating expansion (3.5 -> 7/2).
Rational to_rational(double x);
double to_double(const Rational& q);
std::string to_string(const Rational& q);

/// s_p = 3/2 - 2/(p-1); p > 1.
Rational critical_exponent(const Rational& p);

/// Strichartz-type conditions 1/q + 1/r <= 1/2 and 1/q + 3/r = 3/2 - s + rho,
/// given inverse exponents so that q = inf is 1/q = 0.
struct Admissibility {
  Rational inv_q, inv_r, s, rho;
  Rational sum;       // 1/q + 1/r
  Rational scaling;   // 1/q + 3/r
  Rational target;    // 3/2 - s + rho
  bool sum_ok = false;
  bool scaling_ok = false;
  bool admissible() const { return sum_ok && scaling_ok; }
  std::string certificate() const;
};

/// Needs q, r >= 2.
Admissibility admissibility_check(const Rational& inv_q, const Rational& inv_r,
                                  const Rational& s, const Rational& rho = 0);

struct KappaPair {
  Rational kappa;
  Rational inv_q, inv_r;
  Admissibility check;
};

/// kappa = 1 - 3/p and the pair solving the two interpolation identities;
/// 3 < p <= 5 and s_p <= s < 1.
KappaPair interpolation_kappa(const Rational& p, const Rational& s);

struct ExponentReport {
  Rational p, s_p, kappa, sigma, sigma1, sigma2;
  /// One regularity step min{1, s_p + (99/100) sigma2}.
  Rational s1;
  /// beta with (1 - eps1) beta = 2/3, eps1 = 1/10000.
  Rational beta;
  KappaPair pair;  // at s = s_p
  std::string to_json() const;
};

/// sigma = 3 min{p-3, 1}/(2p), sigma1 = kappa/6, sigma2 = min{sigma/3, sigma1, 3/5}; 3 < p < 5.
ExponentReport regularity_constants(const Rational& p);

enum class NormKind { S, W, Z, Y, LqLr };
std::string to_string(NormKind k);

struct NormSpec {
  NormKind kind = NormKind::S;
  double s = 0.0;                     // Z_s, Y_s
  double q = 2.0, r = 2.0;            // LqLr; q may be infinity
};

/// Time and space exponents of a norm at exponent p. S = L^{2(p-1)} L^{2(p-1)},
/// W = L^4 L^4, Z_s = L^{2/(s+1)} L^{2/(2-s)},
/// Y_s = L^{2p/(s+1-(2p-2)(s-s_p))} L^{2p/(2-s)}. Throws OutOfDomain when a
/// denominator is not positive.
std::pair<double, double> norm_exponents(const NormSpec& k, double p);

struct SpacetimeNorm {
  double value = 0.0;
  double q = 0.0, r = 0.0;
  /// |Simpson - trapezoid| in time, propagated to the norm.
  double time_error = 0.0;
  std::size_t snapshots = 0;
};

/// (int_{t0}^{t1} (4 pi int r^2 |u|^r dr)^{q/r} dt)^{1/q} over the stored
/// snapshots, Simpson in time (unequal steps allowed); q = inf takes the sup
/// over snapshots.
SpacetimeNorm spacetime_norm(const std::vector<Snapshot>& snaps, const NormSpec& k, double p,
                         double t0, double t1);

/// g(beta) = ((3/2)^{1-beta} + (1/2)^{1-beta}) / 2
double ladder_g(double beta);
double ladder_increment(double beta);

struct LadderState {
  double p = 0.0;
  std::vector<double> beta;
  std::vector<double> g;
  std::vector<double> increment;
  bool reached = false;  // beta >= 1 - 1e-6
  bool increments_positive = true;
  std::string to_json() const;
  void write_csv(std::ostream& os) const;  // n,beta,g,increment
};

/// beta_{n+1} = beta_n + log2(2/(1 + g(beta_n))) from beta0 in [2/(p-1), 1)
/// until 1 - 1e-6 or max_steps.
LadderState decay_ladder(double p, double beta0, std::size_t max_steps = 100000);

/// Second differences of g on n + 1 equally spaced points of [0, 1] are
/// nonnegative, g < 1 inside and g = 1 at the ends.
bool ladder_g_convex(std::size_t n);

/// log S sampled at log2 A = log2_a0 + k/4.
struct LogLattice {
  double log2_a0 = 1.0;
  std::vector<double> log_s;

  static LogLattice sample(const std::function<double(double)>& log_s_of_log2a,
                           double log2_a0, double log2_a1);
  double log2_a(std::size_t k) const { return log2_a0 + 0.25 * static_cast<double>(k); }
  /// Linear interpolation of log S in log2 A; nullopt outside the lattice.
  std::optional<double> at(double log2a) const;
};

enum class RecurrenceVerdict { Holds, Fails, PremiseViolated };
std::string to_string(RecurrenceVerdict v);

struct RecurrenceResult {
  RecurrenceVerdict verdict = RecurrenceVerdict::Fails;
  /// Least-squares decay exponent of S over the upper half of the lattice.
  double fitted_exponent = 0.0;
  /// log2 of the induction start A0 (nullopt when none was found).
  std::optional<double> log2_A0;
  /// log2 A of the first violation of the premise or of a block bound.
  std::optional<double> witness_log2_A;
  /// Exponent reached by the block induction.
  double reached_exponent = 0.0;
  std::string reason;
  std::string to_json() const;
};

/// Premise S(A) <= c (S(A^beta) S^l(A^alpha) + A^{-omega}) with l alpha + beta > 1,
/// checked on the lattice; then the block induction with l' = 0.99 l and
/// omega' = 0.99 omega. Holds when every block bound S(A) <= A^{-omega_n}
/// is met and the induction reaches omega'.
RecurrenceResult recurrence_decay_check(const LogLattice& S, double alpha, double beta, double l,
                                        double omega, double c);

struct FbetaProfile {
  double beta = 0.0;
  double p = 0.0;
  double window_t0 = 0.0, window_t1 = 0.0;
  std::vector<double> radii;  // dyadic, decreasing
  std::vector<double> f;
  bool nonincreasing = true;
  /// Smallest C with f(r0) <= g f(r0/2) + C f(r0/2)^p r0^{2-(p-1) beta} at every dyadic r0.
  double fitted_C = 0.0;
  /// Log-log slope of max_t r^beta |u| over the outer decade of the grid;
  /// positive values mean r^beta |u| grows with r.
  double outer_slope = 0.0;
  /// More than half of the radii take their sup at the last snapshot.
  bool window_too_short = false;
  std::string to_json() const;
};

/// f_beta(r) = sup over the snapshots and |x| >= r of |x|^beta |u| on dyadic
/// radii below r_max / 2 down to the first positive node.
FbetaProfile fbeta_profile(const std::vector<Snapshot>& snaps, double p, double beta);

}  // namespace analysis

}  // namespace rnlw
