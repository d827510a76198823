#include "rnlw/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <ostream>

#include <fftw3.h>

#include "json.hpp"

namespace rnlw {

namespace {

constexpr double kPi = 3.14159265358979323846;
// (2 pi)^{-3} * 4 pi
const double kNormConst = 4.0 * kPi / std::pow(2.0 * kPi, 3);

std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

// Y_k = 2 sum_j X_j sin(pi (j+1)(k+1)/(N+1)), k, j = 0..N-1.
std::vector<double> dst1(std::vector<double> x) {
  const int n = static_cast<int>(x.size());
  std::vector<double> y(x.size());
  if (n == 0) return y;
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    plan = fftw_plan_r2r_1d(n, x.data(), y.data(), FFTW_RODFT00, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    fftw_destroy_plan(plan);
  }
  return y;
}

bool is_origin_uniform(const RadialGrid& g) {
  return g.spacing() == Spacing::Uniform && g.r_min() == 0.0;
}

double tail_fraction(const RadialGrid& g, std::span<const double> f) {
  std::vector<double> dens(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) dens[i] = g[i] * g[i] * std::abs(f[i]);
  const double total = numerics::integrate(g, dens);
  if (total <= 0.0) return 0.0;
  const double lo = g.r_max() - 0.1 * (g.r_max() - g.r_min());
  return numerics::integrate(g, dens, lo, g.r_max()) / total;
}

// Gauss-Legendre nodes/weights on [-1, 1].
struct GaussRule {
  std::vector<double> x, w;
};

GaussRule gauss_legendre(int n) {
  GaussRule rule{std::vector<double>(n), std::vector<double>(n)};
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p1 = 1.0, p2 = 0.0;
      for (int j = 1; j <= n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
      }
      pp = n * (z * p1 - p2) / (z * z - 1.0);
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) < 1e-15) break;
    }
    rule.x[i] = -z;
    rule.x[n - 1 - i] = z;
    rule.w[i] = rule.w[n - 1 - i] = 2.0 / ((1.0 - z * z) * pp * pp);
  }
  return rule;
}

const GaussRule& gauss16() {
  static const GaussRule rule = gauss_legendre(16);
  return rule;
}

NormValue lattice_norm(const RadialGrid& g, std::span<const double> f, double s) {
  const Spectrum sp = spectral::radial_fourier(g, f);
  const double drho = kPi / g.r_max();
  double full = 0.0, coarse = 0.0, top = 0.0;
  const std::size_t m = sp.rho.size();
  for (std::size_t k = 0; k < m; ++k) {
    const double term = std::pow(sp.rho[k], 2.0 * s + 2.0) * sp.fhat[k] * sp.fhat[k];
    full += term;
    if (k % 2 == 1) coarse += term;
    if (k >= m - m / 10) top += term;
  }
  full *= drho * kNormConst;
  coarse *= 2.0 * drho * kNormConst;
  top *= drho * kNormConst;
  NormValue out;
  out.value = std::sqrt(std::max(full, 0.0));
  // The coarse sum samples every other lattice frequency: a Richardson-style
  // error proxy for the rho-quadrature, plus the band-edge content.
  const double err2 = std::abs(full - coarse) + top;
  out.est_error = out.value > 0.0 ? err2 / (2.0 * out.value) : std::sqrt(err2);
  out.converged = full <= 0.0 || (top <= 1e-6 * full && sp.decaying());
  return out;
}

NormValue quadrature_norm(const RadialGrid& g, std::span<const double> f, double s) {
  const double rho_ref = kPi / g.r_max();
  const bool lattice_tail = is_origin_uniform(g) && g.size() >= 3;
  const double rho_band = g.spacing() == Spacing::Uniform
                              ? kPi / g.step()
                              : kPi / (g[g.size() - 1] - g[g.size() - 2]);
  const auto& gl = gauss16();
  auto panel = [&](double a, double b) {
    std::vector<double> nodes(gl.x.size());
    for (std::size_t k = 0; k < nodes.size(); ++k)
      nodes[k] = 0.5 * (a + b) + 0.5 * (b - a) * gl.x[k];
    const Spectrum sp = spectral::radial_fourier(g, f, nodes);
    double acc = 0.0;
    for (std::size_t k = 0; k < nodes.size(); ++k)
      acc += gl.w[k] * std::pow(nodes[k], 2.0 * s + 2.0) * sp.fhat[k] * sp.fhat[k];
    return acc * 0.5 * (b - a);
  };
  double total = 0.0;
  // Graded panels towards rho = 0 resolve the rho^{2s+2} endpoint behaviour.
  for (int k = 40; k >= 1; --k)
    total += panel(rho_ref * std::ldexp(1.0, -k), rho_ref * std::ldexp(1.0, -k + 1));
  // Away from the origin the integrand is smooth; beyond kMaxPanels the
  // trapezoid sum over the sine-transform lattice takes over.
  constexpr int kMaxPanels = 128;
  double a = rho_ref;
  int quiet = 0, panels = 0;
  double last = 0.0;
  bool converged = false;
  while (a < rho_band) {
    if (lattice_tail && panels >= kMaxPanels) break;
    const double b = std::min(a + rho_ref, rho_band);
    last = panel(a, b);
    total += last;
    a = b;
    ++panels;
    if (std::abs(last) <= 1e-18 * std::abs(total)) {
      if (++quiet >= 4) {
        converged = true;
        break;
      }
    } else {
      quiet = 0;
    }
  }
  double band_edge = 0.0;
  if (!converged && lattice_tail && a < rho_band) {
    const Spectrum sp = spectral::radial_fourier(g, f);
    const std::size_t first = static_cast<std::size_t>(std::llround(a / rho_ref)) - 1;
    double tail = 0.0;
    const std::size_t m = sp.rho.size();
    for (std::size_t k = first; k < m; ++k) {
      const double term = std::pow(sp.rho[k], 2.0 * s + 2.0) * sp.fhat[k] * sp.fhat[k];
      // Gregory end weights keep the switch-over fourth order.
      const std::size_t j = k - first;
      tail += (j == 0 ? 3.0 / 8.0 : j == 1 ? 7.0 / 6.0 : j == 2 ? 23.0 / 24.0 : 1.0) * term;
      if (k >= m - m / 10) band_edge += term;
    }
    total += tail * rho_ref;
    band_edge *= rho_ref;
    last = band_edge;
    converged = band_edge <= 1e-6 * total;
  }
  if (total == 0.0) converged = true;
  total *= kNormConst;
  NormValue out;
  out.value = std::sqrt(std::max(total, 0.0));
  const double tail = std::abs(last) * kNormConst;
  out.est_error = out.value > 0.0 ? tail / (2.0 * out.value) + 1e-14 * out.value : std::sqrt(tail);
  out.converged = converged && tail_fraction(g, f) <= 1e-6;
  return out;
}

}  // namespace

SobolevIndex::SobolevIndex(double s) : s_(s) {
  require(s >= -1.0 && s < 1.5, "Sobolev index must lie in [-1, 3/2)");
}

std::string NormValue::to_json(const std::string& kind, double s) const {
  nlohmann::json j{{"norm_kind", kind}, {"s", s}, {"value", value}, {"est_error", est_error}};
  return j.dump();
}

namespace spectral {

Spectrum radial_fourier(const RadialGrid& g, std::span<const double> f,
                        std::span<const double> rho) {
  require(f.size() == g.size(), "radial_fourier: sample count mismatch");
  Spectrum out;
  out.rho.assign(rho.begin(), rho.end());
  out.fhat.resize(rho.size());
  out.tail_fraction = tail_fraction(g, f);
  const std::size_t n = g.size();
  std::vector<double> rf(n);
  for (std::size_t i = 0; i < n; ++i) rf[i] = g[i] * f[i];
  const bool trapezoid = is_origin_uniform(g);
  std::vector<double> integrand(n);
  for (std::size_t k = 0; k < rho.size(); ++k) {
    const double q = rho[k];
    require(q > 0.0, "radial_fourier: frequencies must be positive");
    double acc;
    if (trapezoid) {
      // sin(q r_i) by complex rotation, re-anchored every 256 nodes.
      const double c = std::cos(q * g.step()), sn = std::sin(q * g.step());
      double re = 1.0, im = 0.0;
      acc = 0.0;
      for (std::size_t i = 1; i < n; ++i) {
        if (i % 256 == 0) {
          re = std::cos(q * g[i]);
          im = std::sin(q * g[i]);
        } else {
          const double t = re * c - im * sn;
          im = re * sn + im * c;
          re = t;
        }
        acc += (i + 1 == n ? 0.5 : 1.0) * rf[i] * im;
      }
      acc *= g.step();
    } else {
      for (std::size_t i = 0; i < n; ++i) integrand[i] = rf[i] * std::sin(q * g[i]);
      acc = numerics::integrate(g, integrand);
    }
    out.fhat[k] = 4.0 * kPi / q * acc;
  }
  return out;
}

Spectrum radial_fourier(const RadialGrid& g, std::span<const double> f) {
  require(is_origin_uniform(g), "lattice transform needs a uniform grid starting at r = 0");
  require(f.size() == g.size() && g.size() >= 3, "radial_fourier: bad sample count");
  const std::size_t n = g.size();
  std::vector<double> x(n - 2);
  for (std::size_t j = 1; j + 1 < n; ++j) x[j - 1] = g[j] * f[j];
  const auto y = dst1(std::move(x));
  Spectrum out;
  out.tail_fraction = tail_fraction(g, f);
  out.rho.resize(n - 2);
  out.fhat.resize(n - 2);
  const double drho = kPi / g.r_max();
  for (std::size_t k = 1; k + 1 < n; ++k) {
    const double q = drho * static_cast<double>(k);
    out.rho[k - 1] = q;
    out.fhat[k - 1] = 4.0 * kPi / q * g.step() * 0.5 * y[k - 1];
  }
  return out;
}

std::vector<double> inverse_radial_fourier(const RadialGrid& g, const Spectrum& lattice) {
  require(is_origin_uniform(g), "inverse transform needs a uniform grid starting at r = 0");
  const std::size_t n = g.size();
  require(lattice.rho.size() == n - 2, "inverse transform: spectrum is not on this grid's lattice");
  const double drho = kPi / g.r_max();
  std::vector<double> x(n - 2);
  double origin = 0.0;
  for (std::size_t k = 0; k < n - 2; ++k) {
    x[k] = lattice.rho[k] * lattice.fhat[k];
    origin += lattice.rho[k] * lattice.rho[k] * lattice.fhat[k];
  }
  const auto y = dst1(std::move(x));
  std::vector<double> f(n, 0.0);
  const double c = drho / (2.0 * kPi * kPi);
  f[0] = c * origin;
  for (std::size_t j = 1; j + 1 < n; ++j) f[j] = c * 0.5 * y[j - 1] / g[j];
  return f;
}

NormValue sobolev_norm(const RadialGrid& g, std::span<const double> f, double s,
                       SpectralRoute route) {
  require(f.size() == g.size(), "sobolev_norm: sample count mismatch");
  require(2.0 * s + 2.0 > -1.0, "sobolev_norm: s too negative for a radial integral");
  if (std::all_of(f.begin(), f.end(), [](double v) { return v == 0.0; })) return {};
  if (route == SpectralRoute::Auto)
    route = (is_origin_uniform(g) && g.size() > 20000) ? SpectralRoute::Lattice
                                                       : SpectralRoute::Quadrature;
  if (route == SpectralRoute::Lattice) return lattice_norm(g, f, s);
  return quadrature_norm(g, f, s);
}

NormValue sobolev_norm(const RadialGrid& g, std::span<const double> f, SobolevIndex s,
                       SpectralRoute route) {
  return sobolev_norm(g, f, s.value(), route);
}

NormValue sobolev_norm(const FieldPair& f, SobolevIndex s, SpectralRoute route) {
  const auto a = sobolev_norm(f.grid, f.u, s.value(), route);
  const auto b = sobolev_norm(f.grid, f.ut, s.value() - 1.0, route);
  NormValue out;
  out.value = std::hypot(a.value, b.value);
  out.est_error = a.est_error + b.est_error;
  out.converged = a.converged && b.converged;
  return out;
}

double smooth_step(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  const double a = std::exp(-1.0 / t), b = std::exp(-1.0 / (1.0 - t));
  return a / (a + b);
}

double multiplier_below(double rho, double A) {
  return 1.0 - smooth_step((rho - 0.5 * A) / (0.5 * A));
}

double cutoff_ball(double r) { return 1.0 - smooth_step(r - 1.0); }

std::vector<double> lp_project(const RadialGrid& g, std::span<const double> f, double A,
                               Side side) {
  require(A > 0.0, "lp_project: A must be positive");
  require(is_origin_uniform(g), "lp_project needs a uniform grid starting at r = 0");
  const double lo = kPi / g.r_max(), hi = kPi / g.step();
  if (A < lo || A > hi)
    fail(ErrorKind::OutOfDomain, "lp_project: A outside the resolvable band [pi/r_max, pi/h]");
  Spectrum sp = radial_fourier(g, f);
  for (std::size_t k = 0; k < sp.rho.size(); ++k) {
    const double m = multiplier_below(sp.rho[k], A);
    sp.fhat[k] *= side == Side::Below ? m : 1.0 - m;
  }
  return inverse_radial_fourier(g, sp);
}

double pointwise_bound_ratio(const RadialGrid& g, std::span<const double> f, SobolevIndex s,
                             SpectralRoute route) {
  require(s.value() > 0.5, "pointwise bound needs 1/2 < s < 3/2");
  const auto norm = sobolev_norm(g, f, s.value(), route);
  if (norm.value <= 0.0) fail(ErrorKind::InvalidArgument, "pointwise bound: zero-norm input");
  double sup = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i)
    sup = std::max(sup, std::pow(g[i], 1.5 - s.value()) * std::abs(f[i]));
  return sup / norm.value;
}

GlueResult glue_check(const RadialGrid& g, std::span<const double> f1,
                      std::span<const double> f2, double R, double s, SpectralRoute route) {
  require(f1.size() == g.size() && f2.size() == g.size(), "glue_check: inconsistent grids");
  require(R > 0.0, "glue_check: R must be positive");
  require(s >= -1.0 && s <= 1.0, "glue_check: need -1 <= s <= 1");
  GlueResult out;
  out.glued.resize(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double phi = cutoff_ball(g[i] / R);
    out.glued[i] = phi * f1[i] + (1.0 - phi) * f2[i];
  }
  out.norm_inner = sobolev_norm(g, f1, s, route).value;
  out.norm_outer = sobolev_norm(g, f2, s, route).value;
  out.norm_glued = sobolev_norm(g, out.glued, s, route).value;
  const double denom = out.norm_inner + out.norm_outer;
  if (denom <= 0.0) fail(ErrorKind::InvalidArgument, "glue_check: both pieces have zero norm");
  out.ratio = out.norm_glued / denom;
  return out;
}

void write_csv(std::ostream& os, const Spectrum& s) {
  os << "rho,fhat\n";
  for (std::size_t k = 0; k < s.rho.size(); ++k)
    os << io::format_double(s.rho[k]) << ',' << io::format_double(s.fhat[k]) << '\n';
}

}  // namespace spectral

}  // namespace rnlw
