#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "rnlw/error.hpp"

namespace rnlw {

enum class Spacing { Uniform, Geometric };

/// Strictly increasing radial sample lattice on [r_min, r_max].
class RadialGrid {
 public:
  RadialGrid() = default;

  double r_min() const { return r_min_; }
  double r_max() const { return r_max_; }
  std::size_t size() const { return radii_.size(); }
  Spacing spacing() const { return spacing_; }
  /// Constant step of a uniform grid; geometric grids report the ratio - 1.
  double step() const { return step_; }
  double ratio() const { return ratio_; }

  double operator[](std::size_t i) const { return radii_[i]; }
  std::span<const double> radii() const { return radii_; }

  /// Index i of the cell [r_i, r_{i+1}] containing r (clamped to the grid).
  std::size_t cell_of(double r) const;
  /// Index of the node nearest to r.
  std::size_t nearest(double r) const;
  bool contains(double r, double slack = 0.0) const {
    return r >= r_min_ - slack && r <= r_max_ + slack;
  }

  bool operator==(const RadialGrid& o) const {
    return spacing_ == o.spacing_ && radii_ == o.radii_;
  }

  friend RadialGrid make_grid(double, double, std::size_t, Spacing);

 private:
  double r_min_ = 0.0;
  double r_max_ = 0.0;
  double step_ = 0.0;
  double ratio_ = 1.0;
  Spacing spacing_ = Spacing::Uniform;
  std::vector<double> radii_;
};

RadialGrid make_grid(double r_min, double r_max, std::size_t n, Spacing rule);

/// Snapshot (u, du/dt) of a radial field.
struct FieldPair {
  RadialGrid grid;
  std::vector<double> u;
  std::vector<double> ut;

  FieldPair() = default;
  FieldPair(RadialGrid g, std::vector<double> u_, std::vector<double> ut_);

  static FieldPair zero(const RadialGrid& g);
  static FieldPair sample(const RadialGrid& g,
                          const std::function<double(double)>& u,
                          const std::function<double(double)>& ut = {});
};

/// w = r u representation of a radial field.
struct ReducedPair {
  RadialGrid grid;
  std::vector<double> w;
  std::vector<double> wt;
};

/// How u(0) is recovered from w when the grid contains r = 0.
enum class OriginRule {
  Reject,      // dividing by r = 0 is an error
  Derivative,  // u(0) = dw/dr(0), valid when w(0) = 0
};

ReducedPair to_reduced(const FieldPair& f);
FieldPair from_reduced(const ReducedPair& g,
                       OriginRule rule = OriginRule::Derivative);

/// Constant extension of u and zero velocity inside the ball of radius R.
FieldPair center_cutoff(const FieldPair& f, double R);

/// 4 pi int_a^b r^2 (u_r^2 + u_t^2) dr.
double ring_energy(const FieldPair& f, double a, double b);

/// |(1/4pi) ring_energy - int_a^b (w_r^2 + w_t^2) dr - (a u(a)^2 - b u(b)^2)|
double reduction_identity_residual(const FieldPair& f, double a, double b);

namespace numerics {

/// Finite-difference weights for the m-th derivative at x0 (Fornberg).
std::vector<double> fd_weights(double x0, std::span<const double> x, int m);

/// d/dr of samples: five-point stencils, centred in the interior and
/// shifted one-sided near the ends (4th order on smooth data).
std::vector<double> derivative(const RadialGrid& g, std::span<const double> f);

/// Cubic Lagrange interpolation through the four nodes around r.
double interpolate(const RadialGrid& g, std::span<const double> f, double r);

/// int_a^b f dr using the local cubic interpolant of each cell, integrated
/// with 3-point Gauss-Legendre. a, b need not be nodes.
double integrate(const RadialGrid& g, std::span<const double> f, double a,
                 double b);
double integrate(const RadialGrid& g, std::span<const double> f);

/// F_i = int_{r_min}^{r_i} f dr with the same cell rule.
std::vector<double> cumulative(const RadialGrid& g, std::span<const double> f);

}  // namespace numerics

namespace io {

void write_csv(std::ostream& os, const FieldPair& f);
FieldPair read_csv(std::istream& is);
std::string to_json(const FieldPair& f);
FieldPair field_from_json(const std::string& text);
std::string format_double(double v);

}  // namespace io

}  // namespace rnlw
