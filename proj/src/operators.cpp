#include "ri/operators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ri/error.hpp"

namespace ri {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

double falling(int n, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= n - i;
  return r;
}

// Asymptotic form t^power * l1^level1 * l2^level2 at one endpoint; constant when
// power == 0 and logs vanish.
struct Asym {
  double power = 0.0;
  LogExponents logs;
};

// Behaviour of F(t) = int_0^t tau^P L (from_zero) or int_t^inf tau^P L near `end`,
// assuming F is finite. Level-3 growth is not representable and is reported as flat.
Asym integral_asym(double P, LogExponents L, bool from_zero, Endpoint end) {
  const bool integrable_here = power_log_integrable(P, L, end);
  const bool anchored = (from_zero && end == Endpoint::Zero) || (!from_zero && end == Endpoint::Infinity);
  if (!anchored && integrable_here) return {};  // F tends to a finite constant
  if (std::abs(P + 1.0) > 1e-12) return {P + 1.0, L};
  if (std::abs(L.level1 + 1.0) > 1e-12) return {0.0, {L.level1 + 1.0, L.level2}};
  if (std::abs(L.level2 + 1.0) > 1e-12) return {0.0, {0.0, L.level2 + 1.0}};
  return {};
}

Asym scale(Asym a, double r) { return {a.power * r, a.logs.scaled(r)}; }

// ||tau^e w||_{L^r} over (0,t) (from_zero) or (t,inf), asymptotically at `end`.
Asym window_norm_asym(const PowerWeight& w, double r, bool from_zero, Endpoint end) {
  const LogExponents L = w.sv.asymptotics(end);
  if (std::isinf(r)) {
    // sup of tau^e w over the window: grows with t when the weight grows in that direction
    const int sign = w.exponent > 1e-12 ? 1 : (w.exponent < -1e-12 ? -1 : L.dominant_sign());
    const bool follows = from_zero ? sign > 0 || end == Endpoint::Zero
                                   : sign < 0 || end == Endpoint::Infinity;
    if (follows && sign != 0) return {w.exponent, L};
    return {};
  }
  return scale(integral_asym(r * w.exponent, L.scaled(r), from_zero, end), 1.0 / r);
}

bool window_finite(const PowerWeight& w, double r, bool from_zero) {
  const Endpoint end = from_zero ? Endpoint::Zero : Endpoint::Infinity;
  const LogExponents L = w.sv.asymptotics(end);
  if (std::isinf(r)) return power_log_bounded(w.exponent, L, end);
  return power_log_integrable(r * w.exponent, L.scaled(r), end);
}

// ||tau^e w||_{L^r(a,b)} numerically in u = log tau.
double window_norm(const PowerWeight& w, double r, double ua, double ub) {
  if (w.scale == 0.0) return 0.0;
  auto l = [&](double u) { return r * (w.exponent * u + w.sv.log_at(u)) + u; };
  if (std::isinf(r)) {
    double m = -kInf;
    const double lo = std::isinf(ua) ? ub - 200.0 : ua;
    const double hi = std::isinf(ub) ? ua + 200.0 : ub;
    for (int i = 0; i <= 400; ++i) {
      const double u = lo + (hi - lo) * i / 400.0;
      m = std::max(m, w.exponent * u + w.sv.log_at(u));
    }
    return w.scale * std::exp(m);
  }
  double s = 0.0;
  auto f = [&](double u) { return std::exp(l(u)); };
  double a = ua, b = ub;
  if (std::isinf(a)) {
    const double anchor = std::min(b, 0.0);
    const auto t = quad::integrate_tail(l, anchor, -1);
    if (!t.converged) return kInf;
    s += t.value;
    a = anchor;
  }
  if (std::isinf(b)) {
    const double anchor = std::max(a, 0.0);
    const auto t = quad::integrate_tail(l, anchor, 1);
    if (!t.converged) return kInf;
    s += t.value;
    b = anchor;
  }
  if (b > a) {
    if (a < 0.0 && b > 0.0) {
      s += quad::adaptive_simpson(f, a, 0.0) + quad::adaptive_simpson(f, 0.0, b);
    } else {
      s += quad::adaptive_simpson(f, a, b);
    }
  }
  return w.scale * std::pow(s, 1.0 / r);
}

}  // namespace

void SmoothnessParams::validate() const {
  if (m < 1) throw DomainError("SmoothnessParams: m must be >= 1");
  if (!(m < D)) throw DomainError("SmoothnessParams: need m < D");
}

SmoothnessParams SmoothnessParams::of(const MonomialCone& cone, int m) {
  SmoothnessParams sp{m, cone.D()};
  sp.validate();
  return sp;
}

PiecewisePower reduction_op(const StepFunction& f, const SmoothnessParams& sp) {
  sp.validate();
  return tail_power_transform(PiecewisePower::from_step(f), sp.a() - 1.0);
}

PiecewisePower dual_reduction(const StepFunction& g, const SmoothnessParams& sp) {
  sp.validate();
  return maximal(g).times_power(1.0, sp.a());
}

FubiniCheck fubini_check(const StepFunction& f, const StepFunction& g, const SmoothnessParams& sp) {
  FubiniCheck c;
  const auto gs = PiecewisePower::from_step(rearrange(g));
  c.lhs = (reduction_op(f, sp) * gs).total_integral();
  c.rhs = (PiecewisePower::from_step(f) * dual_reduction(g, sp)).total_integral();
  const double scale = std::max(std::abs(c.lhs), std::abs(c.rhs));
  c.rel_err = scale > 0.0 ? std::abs(c.lhs - c.rhs) / scale : 0.0;
  return c;
}

PiecewisePower hardy_Fl(const StepFunction& f, int l, const SmoothnessParams& sp) {
  sp.validate();
  if (l < 1 || l > sp.m - 1) throw DomainError("hardy_Fl: l must lie in 1..m-1");
  const double a = sp.a();
  return tail_power_transform(PiecewisePower::from_step(f), a - l - 1.0).times_power(1.0, l - a);
}

double hardy_Fl_linf_bound(int l, const SmoothnessParams& sp) { return sp.D / (sp.D * l - sp.m); }
double hardy_Fl_l1_bound(int l, const SmoothnessParams& sp) {
  return sp.D / (sp.D * l - sp.m + sp.D);
}

StepFunction level_sup(const StepFunction& f, const SmoothnessParams& sp) {
  sp.validate();
  const StepFunction fs = rearrange(f);
  if (fs.cells() == 0) return fs;
  const auto b = fs.breakpoints();
  const auto v = fs.values();
  std::vector<double> M(v.size());
  double run = 0.0;
  for (std::size_t i = v.size(); i-- > 0;) {
    run = std::max(run, v[i] * std::pow(b[i + 1], sp.a()));
    M[i] = run;
  }
  return StepFunction(std::vector<double>(b.begin(), b.end()), std::move(M));
}

PiecewisePower level_op(const StepFunction& f, const SmoothnessParams& sp) {
  const StepFunction s = level_sup(f, sp);
  std::vector<PowerPiece> pieces;
  for (std::size_t i = 0; i < s.cells(); ++i) {
    pieces.push_back({s.breakpoints()[i], s.breakpoints()[i + 1], {{s.values()[i], -sp.a()}}});
  }
  return PiecewisePower(std::move(pieces));
}

double kernel_g_derivative(const StepFunction& f, const SmoothnessParams& sp, int j, double t) {
  sp.validate();
  const int m = sp.m;
  if (j < 0 || j > m) throw DomainError("kernel_g_derivative: need 0 <= j <= m");
  if (!(t > 0.0)) throw DomainError("kernel_g_derivative: t must be positive");
  const double a = sp.a();
  const double sign = (j % 2 == 0) ? 1.0 : -1.0;
  if (j == m) return sign * falling(m - 1, m - 1) * f(t) * std::pow(t, a - m);
  const int K = m - j - 1;
  double s = 0.0;
  for (int k = 0; k <= K; ++k) {
    s += binomial(K, k) * std::pow(-t, K - k) * power_integral(f, a - m + k, t, kInf);
  }
  return sign * falling(m - 1, j) * s;
}

HardyCheck weighted_hardy_check(const PowerWeight& u, const PowerWeight& v, double q, double qprime) {
  HardyCheck r;
  if (u.scale == 0.0 || v.scale == 0.0) {
    r.finite = true;
    r.windows_bounded = true;
    r.window_sups.assign(6, 0.0);
    return r;
  }
  // U(t) must be finite (integrable at 0) and V(t) finite (integrable at inf)
  bool finite = window_finite(u, qprime, true) && window_finite(v, q, false);
  if (finite) {
    for (Endpoint end : {Endpoint::Zero, Endpoint::Infinity}) {
      const Asym U = window_norm_asym(u, qprime, true, end);
      const Asym V = window_norm_asym(v, q, false, end);
      if (!power_log_bounded(U.power + V.power, U.logs + V.logs, end)) finite = false;
    }
  }
  r.finite = finite;

  // grid estimate, 8 points per decade on [1e-8, 1e8], and window sups
  auto product = [&](double ut) {
    const double U = window_norm(u, qprime, -kInf, ut);
    const double V = window_norm(v, q, ut, kInf);
    if (U == 0.0 || V == 0.0) return 0.0;
    return U * V;
  };
  double best = 0.0;
  const double lo = std::log(1e-8), hi = std::log(1e8);
  for (int i = 0; i <= 128; ++i) best = std::max(best, product(lo + (hi - lo) * i / 128.0));
  r.sup_estimate = best;
  double run = best;
  for (int j = 0; j <= 5; ++j) {
    const double edge = std::log(1e8) + j * std::log(4.0);
    run = std::max({run, product(-edge), product(edge)});
    r.window_sups.push_back(run);
  }
  const double first = r.window_sups[1] - r.window_sups[0];
  const double last = r.window_sups[5] - r.window_sups[4];
  r.windows_bounded = std::isfinite(r.window_sups.back()) &&
                      (last <= 1e-6 * r.window_sups.back() || last < 0.5 * first);
  return r;
}

void RadialProfile::validate() const {
  if (knots.size() < 2 || knots.size() != values.size()) {
    throw DomainError("RadialProfile: need matching knots and values, at least 2");
  }
  if (knots.front() != 0.0) throw DomainError("RadialProfile: first knot must be 0");
  for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
    if (!(knots[i + 1] > knots[i])) throw DomainError("RadialProfile: knots must increase");
    if (values[i + 1] > values[i]) throw DomainError("RadialProfile: profile must be nonincreasing");
  }
  if (values.back() != 0.0) throw DomainError("RadialProfile: profile must vanish at the last knot");
  if (!std::isfinite(knots.back()) || !(values.front() >= 0.0) || !std::isfinite(values.front())) {
    throw DomainError("RadialProfile: values must be finite and nonnegative");
  }
}

namespace {

double slope(const RadialProfile& g, std::size_t i) {
  return (g.values[i] - g.values[i + 1]) / (g.knots[i + 1] - g.knots[i]);
}

// sum_{k >= kmin} C(n,k) U^k, i.e. (1+U)^n minus its first kmin Taylor terms
double binom_tail(double n, double U, int kmin) {
  double term = 1.0, head = 0.0;
  for (int k = 0; k < kmin; ++k) {
    head += term;
    term *= (n - k) / (k + 1) * U;
  }
  if (U >= 0.5) return std::pow(1.0 + U, n) - head;
  double sum = 0.0;
  for (int k = kmin; k < kmin + 400; ++k) {
    sum += term;
    if (std::abs(term) <= 1e-18 * std::abs(sum)) break;
    term *= (n - k) / (k + 1) * U;
  }
  return sum;
}

// int_x^b (c t^gamma - s) dt, expanded around x to avoid cancellation on thin level sets
double segment_excess_t(double c, double gamma, double x, double b, double s) {
  if (x == 0.0) return c * std::pow(b, gamma + 1.0) / (gamma + 1.0) - s * b;
  const double U = (b - x) / x;
  return c * std::pow(x, gamma + 1.0) * binom_tail(gamma + 1.0, U, 2) / (gamma + 1.0) +
         (c * std::pow(x, gamma) - s) * (b - x);
}

// int_{r0}^{r1} (k r^{D-1} - s) D B r^{D-1} dr, same expansion around r0
double segment_excess_r(double k, double D, double B, double r0, double r1, double s) {
  if (r0 == 0.0) return D * B * k * std::pow(r1, 2.0 * D - 1.0) / (2.0 * D - 1.0) - B * s * std::pow(r1, D);
  const double U = (r1 - r0) / r0;
  const double e = k * std::pow(r0, D - 1.0) - s;
  const double tD = binom_tail(D, U, 2);
  return B * k * std::pow(r0, 2.0 * D - 1.0) * (D * binom_tail(2.0 * D - 1.0, U, 2) / (2.0 * D - 1.0) - tD) +
         B * e * std::pow(r0, D) * (tD + D * U);
}

// min_s [s S + int (h - s)_+] with lambda and excess given per level s.
template <class Lambda, class Excess>
double prefix_from_levels(double S, double top, Lambda&& lambda, Excess&& excess) {
  if (!(S > 0.0) || top <= 0.0) return 0.0;
  double lo = 0.0, hi = top;
  if (lambda(0.0) <= S) return excess(0.0);
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (lambda(mid) > S ? lo : hi) = mid;
    if (hi - lo <= 1e-17 * top) break;
  }
  const double s = 0.5 * (lo + hi);
  return s * S + excess(s);
}

}  // namespace

PiecewisePower ps_phi(const RadialProfile& g, const MonomialCone& cone, double c_iso) {
  g.validate();
  const double gamma = (cone.D() - 1.0) / cone.D();
  std::vector<PowerPiece> pieces;
  for (std::size_t i = 0; i + 1 < g.knots.size(); ++i) {
    const double s = slope(g, i);
    if (s > 0.0) pieces.push_back({g.knots[i], g.knots[i + 1], {{c_iso * s, gamma}}});
  }
  return PiecewisePower(std::move(pieces));
}

PiecewisePower ps_gradient(const RadialProfile& g, const MonomialCone& cone) {
  g.validate();
  const double D = cone.D(), B = cone.B_mu();
  std::vector<PowerPiece> pieces;
  for (std::size_t i = 0; i + 1 < g.knots.size(); ++i) {
    const double s = slope(g, i);
    if (!(s > 0.0)) continue;
    // |grad u| = s D B r^{D-1} on the shell, and r = (t/B)^{1/D}
    const double k = s * D * B;
    pieces.push_back({g.knots[i], g.knots[i + 1], {{k * std::pow(B, -(D - 1.0) / D), (D - 1.0) / D}}});
  }
  return PiecewisePower(std::move(pieces));
}

double ps_prefix_t(const RadialProfile& g, const MonomialCone& cone, double c_iso, double S) {
  g.validate();
  const double gamma = (cone.D() - 1.0) / cone.D();
  double top = 0.0;
  for (std::size_t i = 0; i + 1 < g.knots.size(); ++i) {
    top = std::max(top, c_iso * slope(g, i) * std::pow(g.knots[i + 1], gamma));
  }
  auto lambda = [&](double s) {
    double m = 0.0;
    for (std::size_t i = 0; i + 1 < g.knots.size(); ++i) {
      const double c = c_iso * slope(g, i);
      if (c <= 0.0) continue;
      const double a = g.knots[i], b = g.knots[i + 1];
      const double t0 = std::max(a, std::pow(s / c, 1.0 / gamma));
      if (t0 < b) m += b - t0;
    }
    return m;
  };
  auto excess = [&](double s) {
    double e = 0.0;
    for (std::size_t i = 0; i + 1 < g.knots.size(); ++i) {
      const double c = c_iso * slope(g, i);
      if (c <= 0.0) continue;
      const double a = g.knots[i], b = g.knots[i + 1];
      const double t0 = std::max(a, std::pow(s / c, 1.0 / gamma));
      if (t0 < b) e += segment_excess_t(c, gamma, t0, b, s);
    }
    return e;
  };
  return prefix_from_levels(S, top, lambda, excess);
}

double ps_prefix_r(const RadialProfile& g, const MonomialCone& cone, double S) {
  g.validate();
  const double D = cone.D(), B = cone.B_mu();
  std::vector<double> r(g.knots.size());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = std::pow(g.knots[i] / B, 1.0 / D);
  double top = 0.0;
  for (std::size_t i = 0; i + 1 < r.size(); ++i) {
    top = std::max(top, slope(g, i) * D * B * std::pow(r[i + 1], D - 1.0));
  }
  auto lambda = [&](double s) {
    double m = 0.0;
    for (std::size_t i = 0; i + 1 < r.size(); ++i) {
      const double k = slope(g, i) * D * B;
      if (k <= 0.0) continue;
      const double r0 = std::max(r[i], std::pow(s / k, 1.0 / (D - 1.0)));
      if (r0 < r[i + 1]) m += B * (std::pow(r[i + 1], D) - std::pow(r0, D));
    }
    return m;
  };
  auto excess = [&](double s) {
    double e = 0.0;
    for (std::size_t i = 0; i + 1 < r.size(); ++i) {
      const double k = slope(g, i) * D * B;
      if (k <= 0.0) continue;
      const double r1 = r[i + 1];
      const double r0 = std::max(r[i], std::pow(s / k, 1.0 / (D - 1.0)));
      if (r0 < r1) e += segment_excess_r(k, D, B, r0, r1, s);
    }
    return e;
  };
  return prefix_from_levels(S, top, lambda, excess);
}

PolyaSzegoResult polya_szego_radial(const RadialProfile& g, const MonomialCone& cone,
                                    const LKSpace& X, double c_iso, const NormOptions& opt) {
  g.validate();
  if (!(c_iso > 0.0)) throw DomainError("polya_szego_radial: c_iso must be positive");
  PolyaSzegoResult res;
  const PiecewisePower lhs_fn = ps_phi(g, cone, 1.0);
  const PiecewisePower grad = ps_gradient(g, cone);
  res.lhs = lk_norm(lhs_fn, X, opt);
  res.rhs = lk_norm(grad, X, opt) / c_iso;
  const double total = g.knots.back();
  for (double frac : {1e-6, 1e-3, 0.01, 0.1, 0.25, 0.5, 0.75, 0.9, 1.0, 2.0}) {
    const double S = frac * total;
    const double a = ps_prefix_t(g, cone, c_iso, S);
    const double b = ps_prefix_r(g, cone, S);
    const double sc = std::max(std::abs(a), std::abs(b));
    if (sc > 0.0) res.prefix_max_rel_err = std::max(res.prefix_max_rel_err, std::abs(a - b) / sc);
  }
  return res;
}

}  // namespace ri
