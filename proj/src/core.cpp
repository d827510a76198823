#include "rnlw/core.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "json.hpp"

namespace rnlw {

namespace {

constexpr double kPi = 3.14159265358979323846;

bool all_finite(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

}  // namespace

RadialGrid make_grid(double r_min, double r_max, std::size_t n, Spacing rule) {
  require(std::isfinite(r_min) && std::isfinite(r_max), "grid bounds must be finite");
  require(r_min >= 0.0, "r_min must be >= 0");
  require(r_max > r_min, "grid span must be positive (r_max > r_min)");
  require(n >= 2, "grid needs at least 2 samples");
  if (rule == Spacing::Geometric) require(r_min > 0.0, "geometric grid needs r_min > 0");

  RadialGrid g;
  g.r_min_ = r_min;
  g.r_max_ = r_max;
  g.spacing_ = rule;
  g.radii_.resize(n);
  const double last = static_cast<double>(n - 1);
  if (rule == Spacing::Uniform) {
    g.step_ = (r_max - r_min) / last;
    for (std::size_t i = 0; i < n; ++i) g.radii_[i] = r_min + g.step_ * static_cast<double>(i);
  } else {
    const double log_ratio = std::log(r_max / r_min) / last;
    g.ratio_ = std::exp(log_ratio);
    g.step_ = g.ratio_ - 1.0;
    for (std::size_t i = 0; i < n; ++i)
      g.radii_[i] = r_min * std::exp(log_ratio * static_cast<double>(i));
  }
  g.radii_.front() = r_min;
  g.radii_.back() = r_max;
  for (std::size_t i = 1; i < n; ++i)
    require(g.radii_[i] > g.radii_[i - 1], "grid radii must be strictly increasing");
  return g;
}

std::size_t RadialGrid::cell_of(double r) const {
  const std::size_t n = radii_.size();
  if (r <= radii_.front()) return 0;
  if (r >= radii_.back()) return n - 2;
  std::size_t guess;
  if (spacing_ == Spacing::Uniform) {
    guess = static_cast<std::size_t>((r - r_min_) / step_);
  } else {
    guess = static_cast<std::size_t>(std::log(r / r_min_) / std::log(ratio_));
  }
  guess = std::min(guess, n - 2);
  // Round-off can put the guess one cell off in either direction.
  while (guess > 0 && radii_[guess] > r) --guess;
  while (guess + 2 < n && radii_[guess + 1] <= r) ++guess;
  return guess;
}

std::size_t RadialGrid::nearest(double r) const {
  const std::size_t c = cell_of(r);
  return (std::abs(r - radii_[c]) <= std::abs(radii_[c + 1] - r)) ? c : c + 1;
}

FieldPair::FieldPair(RadialGrid g, std::vector<double> u_, std::vector<double> ut_)
    : grid(std::move(g)), u(std::move(u_)), ut(std::move(ut_)) {
  require(u.size() == grid.size() && ut.size() == grid.size(),
          "field samples must match the grid size");
  require(all_finite(u) && all_finite(ut), "field samples must be finite");
}

FieldPair FieldPair::zero(const RadialGrid& g) {
  return FieldPair(g, std::vector<double>(g.size(), 0.0), std::vector<double>(g.size(), 0.0));
}

FieldPair FieldPair::sample(const RadialGrid& g, const std::function<double(double)>& u,
                            const std::function<double(double)>& ut) {
  std::vector<double> a(g.size()), b(g.size(), 0.0);
  for (std::size_t i = 0; i < g.size(); ++i) {
    a[i] = u(g[i]);
    if (ut) b[i] = ut(g[i]);
  }
  return FieldPair(g, std::move(a), std::move(b));
}

ReducedPair to_reduced(const FieldPair& f) {
  ReducedPair g{f.grid, f.u, f.ut};
  for (std::size_t i = 0; i < f.grid.size(); ++i) {
    g.w[i] *= f.grid[i];
    g.wt[i] *= f.grid[i];
  }
  return g;
}

FieldPair from_reduced(const ReducedPair& g, OriginRule rule) {
  std::vector<double> u = g.w, ut = g.wt;
  const bool has_origin = g.grid.r_min() == 0.0;
  if (has_origin && rule == OriginRule::Reject)
    fail(ErrorKind::InvalidArgument, "from_reduced: grid contains r = 0 and no origin rule");
  for (std::size_t i = has_origin ? 1 : 0; i < g.grid.size(); ++i) {
    u[i] /= g.grid[i];
    ut[i] /= g.grid[i];
  }
  if (has_origin) {
    // w(0) = 0 so u(0) = w'(0); one-sided stencil on the first nodes.
    const std::size_t m = std::min<std::size_t>(5, g.grid.size());
    const auto wts = numerics::fd_weights(0.0, g.grid.radii().subspan(0, m), 1);
    double du = 0.0, dut = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      du += wts[j] * g.w[j];
      dut += wts[j] * g.wt[j];
    }
    u[0] = du;
    ut[0] = dut;
  }
  return FieldPair(g.grid, std::move(u), std::move(ut));
}

FieldPair center_cutoff(const FieldPair& f, double R) {
  if (!f.grid.contains(R)) fail(ErrorKind::OutOfDomain, "center_cutoff: R outside the grid");
  const double uR = numerics::interpolate(f.grid, f.u, R);
  FieldPair out = f;
  for (std::size_t i = 0; i < f.grid.size() && f.grid[i] <= R; ++i) {
    out.u[i] = uR;
    out.ut[i] = 0.0;
  }
  return out;
}

double ring_energy(const FieldPair& f, double a, double b) {
  require(a >= 0.0 && a < b, "ring_energy: need 0 <= a < b");
  if (!f.grid.contains(a, 1e-12 * f.grid.r_max()) || !f.grid.contains(b, 1e-12 * f.grid.r_max()))
    fail(ErrorKind::OutOfDomain, "ring_energy: interval outside the grid");
  const auto ur = numerics::derivative(f.grid, f.u);
  std::vector<double> dens(f.grid.size());
  for (std::size_t i = 0; i < dens.size(); ++i) {
    const double r = f.grid[i];
    dens[i] = r * r * (ur[i] * ur[i] + f.ut[i] * f.ut[i]);
  }
  return std::max(0.0, 4.0 * kPi * numerics::integrate(f.grid, dens, a, b));
}

double reduction_identity_residual(const FieldPair& f, double a, double b) {
  require(a > 0.0, "reduction identity: a must be > 0 (boundary term undefined at 0)");
  require(a < b, "reduction identity: need a < b");
  const double lhs = ring_energy(f, a, b) / (4.0 * kPi);
  const ReducedPair g = to_reduced(f);
  const auto wr = numerics::derivative(g.grid, g.w);
  std::vector<double> dens(g.grid.size());
  for (std::size_t i = 0; i < dens.size(); ++i) dens[i] = wr[i] * wr[i] + g.wt[i] * g.wt[i];
  const double ua = numerics::interpolate(f.grid, f.u, a);
  const double ub = numerics::interpolate(f.grid, f.u, b);
  const double rhs = numerics::integrate(g.grid, dens, a, b) + (a * ua * ua - b * ub * ub);
  return std::abs(lhs - rhs);
}

namespace numerics {

std::vector<double> fd_weights(double x0, std::span<const double> x, int m) {
  // Fornberg (1988), generating weights for all orders up to m.
  const int n = static_cast<int>(x.size()) - 1;
  require(n >= m, "fd_weights: not enough points for the derivative order");
  std::vector<std::vector<double>> c(n + 1, std::vector<double>(m + 1, 0.0));
  double c1 = 1.0, c4 = x[0] - x0;
  c[0][0] = 1.0;
  for (int i = 1; i <= n; ++i) {
    const int mn = std::min(i, m);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = x[i] - x0;
    for (int j = 0; j < i; ++j) {
      const double c3 = x[i] - x[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k)
          c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      for (int k = mn; k >= 1; --k) c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }
  std::vector<double> w(n + 1);
  for (int i = 0; i <= n; ++i) w[i] = c[i][m];
  return w;
}

std::vector<double> derivative(const RadialGrid& g, std::span<const double> f) {
  const std::size_t n = g.size();
  require(f.size() == n, "derivative: sample count mismatch");
  const std::size_t width = std::min<std::size_t>(5, n);
  std::vector<double> d(n);
  auto radii = g.radii();
  if (g.spacing() == Spacing::Uniform && n >= 5) {
    const double h = g.step();
    std::array<std::array<double, 5>, 5> table{};
    for (std::size_t s = 0; s < 5; ++s) {
      const double nodes[5] = {0.0, h, 2 * h, 3 * h, 4 * h};
      auto w = fd_weights(static_cast<double>(s) * h, std::span<const double>(nodes, 5), 1);
      std::copy(w.begin(), w.end(), table[s].begin());
    }
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t start = i < 2 ? 0 : std::min(i - 2, n - 5);
      const auto& w = table[i - start];
      double acc = 0.0;
      for (std::size_t j = 0; j < 5; ++j) acc += w[j] * f[start + j];
      d[i] = acc;
    }
    return d;
  }
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t half = width / 2;
    const std::size_t start = i < half ? 0 : std::min(i - half, n - width);
    const auto w = fd_weights(radii[i], radii.subspan(start, width), 1);
    double acc = 0.0;
    for (std::size_t j = 0; j < width; ++j) acc += w[j] * f[start + j];
    d[i] = acc;
  }
  return d;
}

namespace {

std::size_t stencil_start(const RadialGrid& g, std::size_t cell) {
  const std::size_t n = g.size();
  if (n <= 4) return 0;
  if (cell == 0) return 0;
  return std::min(cell - 1, n - 4);
}

double lagrange(std::span<const double> x, std::span<const double> y, double r) {
  double acc = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    double l = 1.0;
    for (std::size_t k = 0; k < x.size(); ++k)
      if (k != j) l *= (r - x[k]) / (x[j] - x[k]);
    acc += l * y[j];
  }
  return acc;
}

double cell_integral(const RadialGrid& g, std::span<const double> f, std::size_t cell,
                     double lo, double hi) {
  if (hi <= lo) return 0.0;
  const std::size_t start = stencil_start(g, cell);
  const std::size_t m = std::min<std::size_t>(4, g.size());
  auto xs = g.radii().subspan(start, m);
  auto ys = f.subspan(start, m);
  static const double node = std::sqrt(0.6);
  static const double wts[3] = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
  const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
  const double pts[3] = {mid - half * node, mid, mid + half * node};
  double acc = 0.0;
  for (int k = 0; k < 3; ++k) acc += wts[k] * lagrange(xs, ys, pts[k]);
  return acc * half;
}

}  // namespace

double interpolate(const RadialGrid& g, std::span<const double> f, double r) {
  require(f.size() == g.size(), "interpolate: sample count mismatch");
  const std::size_t cell = g.cell_of(r);
  const std::size_t start = stencil_start(g, cell);
  const std::size_t m = std::min<std::size_t>(4, g.size());
  return lagrange(g.radii().subspan(start, m), f.subspan(start, m), r);
}

double integrate(const RadialGrid& g, std::span<const double> f, double a, double b) {
  require(f.size() == g.size(), "integrate: sample count mismatch");
  if (b < a) return -integrate(g, f, b, a);
  a = std::max(a, g.r_min());
  b = std::min(b, g.r_max());
  if (b <= a) return 0.0;
  const std::size_t c0 = g.cell_of(a), c1 = g.cell_of(b);
  double acc = 0.0;
  for (std::size_t c = c0; c <= c1; ++c)
    acc += cell_integral(g, f, c, std::max(a, g[c]), std::min(b, g[c + 1]));
  return acc;
}

double integrate(const RadialGrid& g, std::span<const double> f) {
  return integrate(g, f, g.r_min(), g.r_max());
}

std::vector<double> cumulative(const RadialGrid& g, std::span<const double> f) {
  require(f.size() == g.size(), "cumulative: sample count mismatch");
  std::vector<double> out(g.size(), 0.0);
  for (std::size_t c = 0; c + 1 < g.size(); ++c)
    out[c + 1] = out[c] + cell_integral(g, f, c, g[c], g[c + 1]);
  return out;
}

}  // namespace numerics

namespace io {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_csv(std::ostream& os, const FieldPair& f) {
  os << "r,u,ut\n";
  for (std::size_t i = 0; i < f.grid.size(); ++i)
    os << format_double(f.grid[i]) << ',' << format_double(f.u[i]) << ','
       << format_double(f.ut[i]) << '\n';
}

namespace {

RadialGrid infer_grid(const std::vector<double>& r) {
  require(r.size() >= 2, "field file needs at least 2 rows");
  const auto uni = make_grid(r.front(), r.back(), r.size(), Spacing::Uniform);
  auto close = [&](const RadialGrid& g) {
    for (std::size_t i = 0; i < r.size(); ++i)
      if (std::abs(g[i] - r[i]) > 1e-9 * std::max(1.0, std::abs(r[i]))) return false;
    return true;
  };
  if (close(uni)) return uni;
  if (r.front() > 0.0) {
    const auto geo = make_grid(r.front(), r.back(), r.size(), Spacing::Geometric);
    if (close(geo)) return geo;
  }
  fail(ErrorKind::InvalidArgument, "field radii are neither uniform nor geometric");
}

}  // namespace

FieldPair read_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line.rfind("r,u,ut", 0) != 0)
    fail(ErrorKind::Io, "field CSV must start with header r,u,ut");
  std::vector<double> r, u, ut;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    double a, b, c;
    char c1, c2;
    if (!(ss >> a >> c1 >> b >> c2 >> c) || c1 != ',' || c2 != ',')
      fail(ErrorKind::Io, "malformed field CSV row: " + line);
    r.push_back(a);
    u.push_back(b);
    ut.push_back(c);
  }
  return FieldPair(infer_grid(r), std::move(u), std::move(ut));
}

std::string to_json(const FieldPair& f) {
  nlohmann::json j;
  j["grid"] = {{"r_min", f.grid.r_min()},
               {"r_max", f.grid.r_max()},
               {"n", f.grid.size()},
               {"spacing", f.grid.spacing() == Spacing::Uniform ? "uniform" : "geometric"}};
  j["u"] = f.u;
  j["ut"] = f.ut;
  return j.dump();
}

FieldPair field_from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  const auto& gj = j.at("grid");
  const std::string rule = gj.at("spacing").get<std::string>();
  require(rule == "uniform" || rule == "geometric", "grid.spacing must be uniform|geometric");
  auto g = make_grid(gj.at("r_min").get<double>(), gj.at("r_max").get<double>(),
                     gj.at("n").get<std::size_t>(),
                     rule == "uniform" ? Spacing::Uniform : Spacing::Geometric);
  return FieldPair(std::move(g), j.at("u").get<std::vector<double>>(),
                   j.at("ut").get<std::vector<double>>());
}

}  // namespace io

}  // namespace rnlw
