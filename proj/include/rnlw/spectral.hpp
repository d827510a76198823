#pragma once

#include <span>
#include <string>
#include <vector>

#include "rnlw/core.hpp"

namespace rnlw {

/// Samples of the 3D Fourier transform of a radial function,
/// fhat(xi) = int f(x) e^{-i xi.x} dx, at |xi| = rho.
struct Spectrum {
  std::vector<double> rho;
  std::vector<double> fhat;
  /// 4 pi int r^2 |f| over the outer tenth of the grid, relative to the
  /// whole-grid value. Large values mean the truncation at r_max is not benign.
  double tail_fraction = 0.0;
  bool decaying() const { return tail_fraction <= 1e-6; }
};

/// Regularity exponent s of Hdot^s, restricted to [-1, 3/2).
class SobolevIndex {
 public:
  explicit SobolevIndex(double s);
  double value() const { return s_; }
  operator double() const { return s_; }

 private:
  double s_;
};

struct NormValue {
  double value = 0.0;
  double est_error = 0.0;
  bool converged = true;
  std::string to_json(const std::string& kind, double s) const;
};

enum class SpectralRoute {
  Auto,        // quadrature when affordable, lattice otherwise
  Quadrature,  // transform evaluated at graded Gauss nodes in rho
  Lattice,     // fast sine transform on rho_k = k pi / r_max
};

namespace spectral {

/// Transform at arbitrary frequencies by quadrature on the grid. On a uniform
/// grid starting at 0 the trapezoid rule is used (the odd-extended integrand is
/// smooth, so it converges spectrally); other grids use the cubic cell rule.
Spectrum radial_fourier(const RadialGrid& g, std::span<const double> f,
                        std::span<const double> rho);

/// Transform on the sine-transform lattice rho_k = k pi / r_max, k = 1..n-2.
/// Requires a uniform grid with r_min = 0.
Spectrum radial_fourier(const RadialGrid& g, std::span<const double> f);

/// Exact inverse of the lattice transform; samples at the grid nodes.
std::vector<double> inverse_radial_fourier(const RadialGrid& g, const Spectrum& lattice);

NormValue sobolev_norm(const RadialGrid& g, std::span<const double> f, double s,
                       SpectralRoute route = SpectralRoute::Auto);
NormValue sobolev_norm(const RadialGrid& g, std::span<const double> f, SobolevIndex s,
                       SpectralRoute route = SpectralRoute::Auto);
/// (||u||_{Hdot^s}^2 + ||ut||_{Hdot^{s-1}}^2)^{1/2}
NormValue sobolev_norm(const FieldPair& f, SobolevIndex s,
                       SpectralRoute route = SpectralRoute::Auto);

/// C-infinity monotone step: 0 for t <= 0, 1 for t >= 1.
double smooth_step(double t);
/// Low-pass multiplier: 1 for rho <= A/2, 0 for rho >= A.
double multiplier_below(double rho, double A);
/// Radial cutoff: 1 on B(0,1), 0 outside B(0,2).
double cutoff_ball(double r);

enum class Side { Below, Above };

/// Smooth Littlewood-Paley projection P_{<A} or P_{>A}.
std::vector<double> lp_project(const RadialGrid& g, std::span<const double> f, double A,
                               Side side);

/// sup_r r^{3/2-s} |f(r)| / ||f||_{Hdot^s}, for 1/2 < s < 3/2.
double pointwise_bound_ratio(const RadialGrid& g, std::span<const double> f, SobolevIndex s,
                             SpectralRoute route = SpectralRoute::Auto);

struct GlueResult {
  std::vector<double> glued;
  double ratio = 0.0;
  double norm_glued = 0.0;
  double norm_inner = 0.0;
  double norm_outer = 0.0;
};

/// f = cutoff_ball(r/R) f1 + (1 - cutoff_ball(r/R)) f2, so f = f1 on B(0,R) and
/// f = f2 outside B(0,2R); returns ||f|| / (||f1|| + ||f2||) in Hdot^s.
GlueResult glue_check(const RadialGrid& g, std::span<const double> f1,
                      std::span<const double> f2, double R, double s,
                      SpectralRoute route = SpectralRoute::Auto);

void write_csv(std::ostream& os, const Spectrum& s);

}  // namespace spectral

}  // namespace rnlw
