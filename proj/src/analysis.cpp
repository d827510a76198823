#include "rnlw/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>

#include "json.hpp"

namespace rnlw::analysis {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kLn2 = 0.69314718055994530942;

Rational rmin(const Rational& a, const Rational& b) { return a < b ? a : b; }

// log(e^a + e^b) with -inf allowed
double log_add(double a, double b) {
  if (a == -std::numeric_limits<double>::infinity()) return b;
  if (b == -std::numeric_limits<double>::infinity()) return a;
  const double m = std::max(a, b);
  return m + std::log1p(std::exp(std::min(a, b) - m));
}

double slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double den = n * sxx - sx * sx;
  return den > 0.0 ? (n * sxy - sx * sy) / den : 0.0;
}

}  // namespace

Rational to_rational(double x) {
  require(std::isfinite(x), "to_rational: value must be finite");
  // continued fraction, denominators up to 10^6
  long long h0 = 0, h1 = 1, k0 = 1, k1 = 0;
  double rest = x;
  for (int it = 0; it < 40; ++it) {
    const double a = std::floor(rest);
    const auto ai = static_cast<long long>(a);
    const long long h2 = ai * h1 + h0, k2 = ai * k1 + k0;
    if (k2 > 1000000) break;
    h0 = h1;
    h1 = h2;
    k0 = k1;
    k1 = k2;
    if (std::abs(static_cast<double>(h1) / static_cast<double>(k1) - x) <=
        1e-12 * std::max(1.0, std::abs(x)))
      return Rational(h1, k1);
    const double frac = rest - a;
    if (frac == 0.0) break;
    rest = 1.0 / frac;
  }
  fail(ErrorKind::InvalidArgument, "no short rational for " + io::format_double(x));
}

double to_double(const Rational& q) { return boost::rational_cast<double>(q); }

std::string to_string(const Rational& q) {
  if (q.denominator() == 1) return std::to_string(q.numerator());
  return std::to_string(q.numerator()) + "/" + std::to_string(q.denominator());
}

Rational critical_exponent(const Rational& p) {
  require(p > 1, "critical exponent needs p > 1");
  return Rational(3, 2) - Rational(2) / (p - 1);
}

std::string Admissibility::certificate() const {
  return "1/q + 1/r = " + to_string(sum) + (sum_ok ? " <= 1/2" : " > 1/2") + "; 1/q + 3/r = " +
         to_string(scaling) + (scaling_ok ? " = " : " != ") + "3/2 - s + rho = " +
         to_string(target);
}

Admissibility admissibility_check(const Rational& inv_q, const Rational& inv_r, const Rational& s,
                                  const Rational& rho) {
  require(inv_q >= 0 && inv_q <= Rational(1, 2), "admissibility: need q >= 2");
  require(inv_r >= 0 && inv_r <= Rational(1, 2), "admissibility: need r >= 2");
  Admissibility a;
  a.inv_q = inv_q;
  a.inv_r = inv_r;
  a.s = s;
  a.rho = rho;
  a.sum = inv_q + inv_r;
  a.scaling = inv_q + 3 * inv_r;
  a.target = Rational(3, 2) - s + rho;
  a.sum_ok = a.sum <= Rational(1, 2);
  a.scaling_ok = a.scaling == a.target;
  return a;
}

KappaPair interpolation_kappa(const Rational& p, const Rational& s) {
  require(p > 3 && p <= 5, "interpolation pair needs 3 < p <= 5");
  const Rational sp = critical_exponent(p);
  require(s >= sp && s < 1, "interpolation pair needs s_p <= s < 1");
  KappaPair k;
  k.kappa = 1 - Rational(3) / p;
  const Rational one_minus = 1 - k.kappa;
  k.inv_q = (s + 1 - (2 * p - 2) * (s - sp)) / (2 * p * one_minus);
  k.inv_r = (2 - s) / (2 * p * one_minus) - k.kappa / one_minus * (3 - 2 * s) / 6;
  require(k.inv_q > 0, "interpolation pair: q would be infinite");
  k.check = admissibility_check(k.inv_q, k.inv_r, s, 0);
  return k;
}

std::string ExponentReport::to_json() const {
  auto q = [](const Rational& r) {
    return nlohmann::json{{"exact", analysis::to_string(r)}, {"value", to_double(r)}};
  };
  nlohmann::json j{{"p", q(p)},
                   {"s_p", q(s_p)},
                   {"kappa", q(kappa)},
                   {"sigma", q(sigma)},
                   {"sigma1", q(sigma1)},
                   {"sigma2", q(sigma2)},
                   {"s1", q(s1)},
                   {"beta", q(beta)},
                   {"pair",
                    {{"inv_q", q(pair.inv_q)},
                     {"inv_r", q(pair.inv_r)},
                     {"admissible", pair.check.admissible()},
                     {"certificate", pair.check.certificate()}}}};
  return j.dump(2);
}

ExponentReport regularity_constants(const Rational& p) {
  require(p > 3 && p < 5, "regularity constants need 3 < p < 5");
  ExponentReport e;
  e.p = p;
  e.s_p = critical_exponent(p);
  e.kappa = 1 - Rational(3) / p;
  e.sigma = 3 * rmin(p - 3, Rational(1)) / (2 * p);
  e.sigma1 = e.kappa / 6;
  e.sigma2 = rmin(rmin(e.sigma / 3, e.sigma1), Rational(3, 5));
  e.s1 = rmin(Rational(1), e.s_p + Rational(99, 100) * e.sigma2);
  e.beta = Rational(2, 3) / (1 - Rational(1, 10000));
  e.pair = interpolation_kappa(p, e.s_p);
  return e;
}

std::string to_string(NormKind k) {
  switch (k) {
    case NormKind::S: return "S";
    case NormKind::W: return "W";
    case NormKind::Z: return "Z";
    case NormKind::Y: return "Y";
    case NormKind::LqLr: return "LqLr";
  }
  return "?";
}

std::pair<double, double> norm_exponents(const NormSpec& k, double p) {
  require(p > 1.0, "norm exponents need p > 1");
  switch (k.kind) {
    case NormKind::S: return {2.0 * (p - 1.0), 2.0 * (p - 1.0)};
    case NormKind::W: return {4.0, 4.0};
    case NormKind::Z: {
      if (!(k.s + 1.0 > 0.0 && 2.0 - k.s > 0.0))
        fail(ErrorKind::OutOfDomain, "Z_s exponents are singular for this s");
      return {2.0 / (k.s + 1.0), 2.0 / (2.0 - k.s)};
    }
    case NormKind::Y: {
      const double sp = 1.5 - 2.0 / (p - 1.0);
      const double den = k.s + 1.0 - (2.0 * p - 2.0) * (k.s - sp);
      if (!(den > 0.0 && 2.0 - k.s > 0.0))
        fail(ErrorKind::OutOfDomain, "Y_s exponents are singular for this (s, p)");
      return {2.0 * p / den, 2.0 * p / (2.0 - k.s)};
    }
    case NormKind::LqLr:
      require(k.q >= 1.0 && k.r >= 1.0, "L^q L^r needs q, r >= 1");
      return {k.q, k.r};
  }
  fail(ErrorKind::InvalidArgument, "unknown norm kind");
}

SpacetimeNorm spacetime_norm(const std::vector<Snapshot>& snaps, const NormSpec& k, double p,
                         double t0, double t1) {
  const auto [q, r] = norm_exponents(k, p);
  require(!std::isinf(r), "spatial exponent must be finite");
  const double lo = std::min(t0, t1), hi = std::max(t0, t1);
  std::vector<std::pair<double, double>> pts;  // (t, int |u|^r dx)
  for (const auto& s : snaps) {
    if (s.t < lo - 1e-12 || s.t > hi + 1e-12) continue;
    const auto& g = s.field.grid;
    std::vector<double> dens(g.size());
    for (std::size_t i = 0; i < g.size(); ++i)
      dens[i] = 4.0 * kPi * g[i] * g[i] * std::pow(std::abs(s.field.u[i]), r);
    pts.emplace_back(s.t, std::max(0.0, numerics::integrate(g, dens)));
  }
  std::sort(pts.begin(), pts.end());
  require(pts.size() >= 2, "space-time norm needs at least two snapshots in the interval");
  SpacetimeNorm out;
  out.q = q;
  out.r = r;
  out.snapshots = pts.size();
  if (std::isinf(q)) {
    for (const auto& [t, v] : pts) out.value = std::max(out.value, std::pow(v, 1.0 / r));
    return out;
  }
  std::vector<double> ts, fs;
  for (const auto& [t, v] : pts) {
    ts.push_back(t);
    fs.push_back(std::pow(v, q / r));
  }
  double trap = 0.0;
  for (std::size_t i = 1; i < ts.size(); ++i) trap += 0.5 * (ts[i] - ts[i - 1]) * (fs[i] + fs[i - 1]);
  // Simpson on pairs of (possibly unequal) intervals; an odd interval out at
  // the end uses the parabola through the last three samples
  auto simpson_pair = [&](std::size_t i) {
    const double h0 = ts[i + 1] - ts[i], h1 = ts[i + 2] - ts[i + 1], H = h0 + h1;
    return H / 6.0 * ((2.0 - h1 / h0) * fs[i] + H * H / (h0 * h1) * fs[i + 1] + (2.0 - h0 / h1) * fs[i + 2]);
  };
  double I = trap;
  if (ts.size() >= 3) {
    I = 0.0;
    std::size_t i = 0;
    for (; i + 2 < ts.size(); i += 2) I += simpson_pair(i);
    if (i + 1 < ts.size()) {
      // int over [t_{n-2}, t_{n-1}] of the parabola through the last three points
      const std::size_t m = ts.size() - 3;
      const double h0 = ts[m + 1] - ts[m], h1 = ts[m + 2] - ts[m + 1];
      I += h1 / 6.0 * (-h1 * h1 / (h0 * (h0 + h1)) * fs[m] + (3.0 * h0 + h1) / h0 * fs[m + 1] +
                       (3.0 * h0 + 2.0 * h1) / (h0 + h1) * fs[m + 2]);
    }
  }
  out.value = std::pow(I, 1.0 / q);
  out.time_error = I > 0.0 ? out.value * std::abs(I - trap) / (q * I) : 0.0;
  return out;
}

double ladder_g(double beta) {
  return 0.5 * (std::pow(1.5, 1.0 - beta) + std::pow(0.5, 1.0 - beta));
}

double ladder_increment(double beta) { return std::log2(2.0 / (1.0 + ladder_g(beta))); }

std::string LadderState::to_json() const {
  nlohmann::json j{{"p", p},
                   {"steps", increment.size()},
                   {"beta0", beta.empty() ? 0.0 : beta.front()},
                   {"final_beta", beta.empty() ? 0.0 : beta.back()},
                   {"reached", reached},
                   {"increments_positive", increments_positive}};
  return j.dump(2);
}

void LadderState::write_csv(std::ostream& os) const {
  os << "n,beta,g,increment\n";
  for (std::size_t n = 0; n < increment.size(); ++n)
    os << n << ',' << io::format_double(beta[n]) << ',' << io::format_double(g[n]) << ','
       << io::format_double(increment[n]) << '\n';
}

LadderState decay_ladder(double p, double beta0, std::size_t max_steps) {
  require(p > 1.0, "ladder needs p > 1");
  require(beta0 >= 2.0 / (p - 1.0) - 1e-15 && beta0 < 1.0, "beta0 must lie in [2/(p-1), 1)");
  LadderState st;
  st.p = p;
  double b = beta0;
  st.beta.push_back(b);
  for (std::size_t n = 0; n < max_steps && b < 1.0 - 1e-6; ++n) {
    const double g = ladder_g(b), inc = ladder_increment(b);
    st.g.push_back(g);
    st.increment.push_back(inc);
    if (!(inc > 0.0) || !(b + inc > b)) st.increments_positive = false;
    b += inc;
    st.beta.push_back(b);
  }
  st.reached = b >= 1.0 - 1e-6;
  return st;
}

bool ladder_g_convex(std::size_t n) {
  require(n >= 2, "convexity lattice needs at least three points");
  std::vector<double> g(n + 1);
  for (std::size_t i = 0; i <= n; ++i) g[i] = ladder_g(static_cast<double>(i) / static_cast<double>(n));
  if (std::abs(g[0] - 1.0) > 1e-15 || std::abs(g[n] - 1.0) > 1e-15) return false;
  for (std::size_t i = 1; i < n; ++i) {
    if (!(g[i] < 1.0)) return false;
    if (g[i - 1] - 2.0 * g[i] + g[i + 1] < -1e-15) return false;
  }
  return true;
}

LogLattice LogLattice::sample(const std::function<double(double)>& f, double a0, double a1) {
  require(a1 > a0, "lattice needs log2_a1 > log2_a0");
  LogLattice L;
  L.log2_a0 = a0;
  const auto n = static_cast<std::size_t>(std::floor((a1 - a0) * 4.0 + 1e-9)) + 1;
  L.log_s.resize(n);
  for (std::size_t k = 0; k < n; ++k) L.log_s[k] = f(L.log2_a(k));
  return L;
}

std::optional<double> LogLattice::at(double x) const {
  const double idx = (x - log2_a0) * 4.0;
  const double last = static_cast<double>(log_s.size() - 1);
  if (idx < -1e-9 || idx > last + 1e-9) return std::nullopt;
  const double c = std::clamp(idx, 0.0, last);
  const auto i = std::min(static_cast<std::size_t>(c), log_s.size() - 1);
  if (i + 1 >= log_s.size()) return log_s[i];
  const double w = c - static_cast<double>(i);
  if (w == 0.0) return log_s[i];
  return (1.0 - w) * log_s[i] + w * log_s[i + 1];
}

std::string to_string(RecurrenceVerdict v) {
  switch (v) {
    case RecurrenceVerdict::Holds: return "holds";
    case RecurrenceVerdict::Fails: return "fails";
    case RecurrenceVerdict::PremiseViolated: return "premise_violated";
  }
  return "?";
}

std::string RecurrenceResult::to_json() const {
  nlohmann::json j{{"verdict", analysis::to_string(verdict)},
                   {"fitted_exponent", fitted_exponent},
                   {"reached_exponent", reached_exponent},
                   {"reason", reason}};
  j["log2_A0"] = log2_A0 ? nlohmann::json(*log2_A0) : nlohmann::json(nullptr);
  j["witness_log2_A"] = witness_log2_A ? nlohmann::json(*witness_log2_A) : nlohmann::json(nullptr);
  return j.dump(2);
}

RecurrenceResult recurrence_decay_check(const LogLattice& S, double alpha, double beta, double l,
                                        double omega, double c) {
  require(alpha > 0.0 && alpha < 1.0 && beta > 0.0 && beta < 1.0, "alpha, beta must lie in (0, 1)");
  require(l > 0.0 && omega > 0.0 && c > 0.0, "l, omega, c must be positive");
  require(l * alpha + beta > 1.0, "recurrence needs l alpha + beta > 1");
  const double lm = 0.99 * l, om = 0.99 * omega;
  require(lm * alpha + beta > 1.0, "recurrence needs 0.99 l alpha + beta > 1");
  const std::size_t n = S.log_s.size();
  require(n >= 8, "lattice too short");

  RecurrenceResult res;
  {
    std::vector<double> xs, ys;
    for (std::size_t k = n / 2; k < n; ++k) {
      if (!std::isfinite(S.log_s[k])) continue;
      xs.push_back(S.log2_a(k));
      ys.push_back(S.log_s[k] / kLn2);
    }
    res.fitted_exponent = xs.size() >= 2 ? -slope(xs, ys) : 0.0;
  }

  // premise, in natural logs of S and with A = 2^x
  std::vector<char> strong(n, 0);
  bool checked_any = false;
  const double logc = std::log(c);
  for (std::size_t k = 0; k < n; ++k) {
    const double x = S.log2_a(k);
    const auto sa = S.at(alpha * x), sb = S.at(beta * x);
    if (!sa || !sb) continue;
    checked_any = true;
    const double lhs = S.log_s[k];
    const double rhs = logc + log_add(*sb + l * *sa, -omega * x * kLn2);
    if (lhs > rhs + 1e-9 * std::max(1.0, std::abs(rhs))) {
      res.verdict = RecurrenceVerdict::PremiseViolated;
      res.witness_log2_A = x;
      res.reason = "premise fails at log2 A = " + io::format_double(x);
      return res;
    }
    const double strong_rhs =
        std::log(0.5) + log_add(*sb + lm * *sa, -om * x * kLn2);
    strong[k] = lhs <= strong_rhs + 1e-12;
  }
  require(checked_any, "lattice too short to evaluate S(A^alpha)");

  // A0: S < 1/2 from A0 on, and the strengthened premise from A0^{1/alpha} on
  std::vector<char> suffix_small(n + 1, 1), suffix_strong(n + 1, 1);
  for (std::size_t k = n; k-- > 0;) {
    suffix_small[k] = suffix_small[k + 1] && S.log_s[k] < std::log(0.5);
    suffix_strong[k] = suffix_strong[k + 1] && strong[k];
  }
  std::optional<std::size_t> k0;
  for (std::size_t k = n; k-- > 0;) {
    const double x = S.log2_a(k);
    if (x <= 0.0) break;
    const double idx = std::ceil((x / alpha - S.log2_a0) * 4.0 - 1e-9);
    if (idx >= static_cast<double>(n)) continue;  // induction region off the lattice
    if (suffix_small[k] && suffix_strong[static_cast<std::size_t>(idx)])
      k0 = k;
    else if (k0)
      break;
  }
  if (!k0) {
    res.verdict = RecurrenceVerdict::Fails;
    res.reason = "no induction start A0 on the lattice";
    return res;
  }
  const double L0 = S.log2_a(*k0);
  res.log2_A0 = L0;

  // base region [L0, L0/alpha], then blocks [L0 (1/beta)^m / alpha, L0 (1/beta)^{m+1} / alpha]
  std::vector<double> lower{L0}, expo;
  double w0 = std::numeric_limits<double>::infinity();
  for (std::size_t k = *k0; k < n && S.log2_a(k) <= L0 / alpha; ++k)
    w0 = std::min(w0, -S.log_s[k] / kLn2 / S.log2_a(k));
  expo.push_back(std::min(w0, om));
  auto region_exponent = [&](double x) {
    std::size_t j = 0;
    while (j + 1 < lower.size() && lower[j + 1] <= x) ++j;
    return expo[j];
  };
  double lb = L0 / alpha;
  const double top = S.log2_a(n - 1);
  while (lb < top) {
    const double w = std::min(om, beta * region_exponent(beta * lb) +
                                      alpha * lm * region_exponent(alpha * lb));
    const double ub = lb / beta;
    for (std::size_t k = 0; k < n; ++k) {
      const double x = S.log2_a(k);
      if (x < lb || x >= ub) continue;
      if (S.log_s[k] / kLn2 > -w * x + 1e-9 * std::max(1.0, w * x)) {
        res.verdict = RecurrenceVerdict::Fails;
        res.witness_log2_A = x;
        res.reached_exponent = expo.back();
        res.reason = "block bound S(A) <= A^-" + io::format_double(w) + " fails";
        return res;
      }
    }
    lower.push_back(lb);
    expo.push_back(w);
    lb = ub;
  }
  res.reached_exponent = expo.back();
  if (res.reached_exponent >= om - 1e-12) {
    res.verdict = RecurrenceVerdict::Holds;
    res.reason = "S(A) <= A^-omega' certified on the last block";
  } else {
    res.verdict = RecurrenceVerdict::Fails;
    res.reason = "lattice ends before the induction reaches omega'";
  }
  return res;
}

std::string FbetaProfile::to_json() const {
  nlohmann::json j{{"beta", beta},
                   {"p", p},
                   {"window", {window_t0, window_t1}},
                   {"radii", radii},
                   {"f", f},
                   {"nonincreasing", nonincreasing},
                   {"fitted_C", fitted_C},
                   {"outer_slope", outer_slope},
                   {"window_too_short", window_too_short}};
  return j.dump(2);
}

FbetaProfile fbeta_profile(const std::vector<Snapshot>& snaps, double p, double beta) {
  require(!snaps.empty(), "f_beta needs snapshots");
  require(beta > 0.0 && beta <= 1.0, "beta must lie in (0, 1]");
  const RadialGrid& g = snaps.front().field.grid;
  for (const auto& s : snaps) require(s.field.grid == g, "snapshots must share a grid");
  const std::size_t n = g.size();

  FbetaProfile out;
  out.beta = beta;
  out.p = p;
  out.window_t0 = snaps.front().t;
  out.window_t1 = snaps.front().t;
  // suffix maxima of r^beta |u| per snapshot, and which snapshot attains them
  std::vector<double> best(n + 1, 0.0), node_max(n, 0.0);
  std::vector<std::size_t> arg(n + 1, 0);
  for (std::size_t j = 0; j < snaps.size(); ++j) {
    out.window_t0 = std::min(out.window_t0, snaps[j].t);
    out.window_t1 = std::max(out.window_t1, snaps[j].t);
    double run = 0.0;
    std::vector<double> suf(n + 1, 0.0);
    for (std::size_t i = n; i-- > 0;) {
      const double v = std::pow(g[i], beta) * std::abs(snaps[j].field.u[i]);
      node_max[i] = std::max(node_max[i], v);
      run = std::max(run, v);
      suf[i] = run;
    }
    for (std::size_t i = 0; i < n; ++i)
      if (suf[i] > best[i]) {
        best[i] = suf[i];
        arg[i] = j;
      }
  }
  auto f_at = [&](double r) { return best[std::min(g.cell_of(r) + 1, n - 1)]; };

  const double rpos = g[0] > 0.0 ? g[0] : g[1];
  std::size_t at_last = 0;
  for (double r = g.r_max() / 2.0; r >= rpos; r /= 2.0) {
    out.radii.push_back(r);
    out.f.push_back(f_at(r));
    if (arg[std::min(g.cell_of(r) + 1, n - 1)] == snaps.size() - 1 && snaps.size() > 1) ++at_last;
  }
  for (std::size_t k = 1; k < out.f.size(); ++k)
    if (out.f[k] < out.f[k - 1]) out.nonincreasing = false;
  const double gb = ladder_g(beta);
  for (std::size_t k = 0; k + 1 < out.f.size(); ++k) {
    const double r0 = out.radii[k], f0 = out.f[k], fh = out.f[k + 1];
    const double excess = f0 - gb * fh;
    if (excess <= 0.0) continue;
    const double denom = std::pow(fh, p) * std::pow(r0, 2.0 - (p - 1.0) * beta);
    out.fitted_C = denom > 0.0 ? std::max(out.fitted_C, excess / denom)
                               : std::numeric_limits<double>::infinity();
  }
  out.window_too_short = !out.radii.empty() && 2 * at_last > out.radii.size();

  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < n; ++i)
    if (g[i] >= g.r_max() / 10.0 && node_max[i] > 0.0) {
      xs.push_back(std::log(g[i]));
      ys.push_back(std::log(node_max[i]));
    }
  out.outer_slope = xs.size() >= 2 ? slope(xs, ys) : 0.0;
  return out;
}

}  // namespace rnlw::analysis
