#pragma once

#include <algorithm>
#include <cmath>
#include <limits>

namespace ri::quad {

struct Options {
  double rel_tol = 1e-10;
  double abs_tol = 1e-300;
  int max_depth = 40;
};

namespace detail {

template <class F>
double simpson_step(F& f, double a, double fa, double m, double fm, double b,
                    double fb, double whole, double eps, int depth) {
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * eps || !std::isfinite(delta)) {
    return left + right + delta / 15.0;
  }
  return simpson_step(f, a, fa, lm, flm, m, fm, left, 0.5 * eps, depth - 1) +
         simpson_step(f, m, fm, rm, frm, b, fb, right, 0.5 * eps, depth - 1);
}

}  // namespace detail

/// Adaptive Simpson quadrature of a smooth integrand on [a, b].
/// The tolerance is relative to a 16-panel composite estimate of the whole integral.
template <class F>
double adaptive_simpson(F&& f, double a, double b, const Options& opt = {}) {
  if (!(b > a)) return 0.0;
  constexpr int kPanels = 8;
  const double h = (b - a) / kPanels;
  double x[2 * kPanels + 1];
  double y[2 * kPanels + 1];
  for (int i = 0; i <= 2 * kPanels; ++i) {
    x[i] = (i == 2 * kPanels) ? b : a + 0.5 * h * i;
    y[i] = f(x[i]);
  }
  double coarse = 0.0;
  for (int p = 0; p < kPanels; ++p) {
    coarse += h / 6.0 * (y[2 * p] + 4.0 * y[2 * p + 1] + y[2 * p + 2]);
  }
  const double eps = std::max(opt.abs_tol, opt.rel_tol * std::abs(coarse)) / kPanels;
  double total = 0.0;
  for (int p = 0; p < kPanels; ++p) {
    const double whole = h / 6.0 * (y[2 * p] + 4.0 * y[2 * p + 1] + y[2 * p + 2]);
    total += detail::simpson_step(f, x[2 * p], y[2 * p], x[2 * p + 1], y[2 * p + 1],
                                  x[2 * p + 2], y[2 * p + 2], whole, eps, opt.max_depth);
  }
  return total;
}

struct TailResult {
  double value = 0.0;
  bool converged = true;
};

/// Integrates exp(log_f(u)) over [u0, +inf) (direction = +1) or (-inf, u0]
/// (direction = -1). The substitution u = u0 +- expm1(s) turns algebraic decay in u
/// into exponential decay in s; log_f is evaluated in log space so that
/// integrands like t^{gamma} with t = e^u never overflow.
template <class LogF>
TailResult integrate_tail(LogF&& log_f, double u0, int direction, const Options& opt = {}) {
  const double dir = direction >= 0 ? 1.0 : -1.0;
  auto g = [&](double s) {
    const double u = u0 + dir * std::expm1(s);
    const double l = log_f(u) + s;
    if (l == -std::numeric_limits<double>::infinity() || std::isnan(l)) return 0.0;
    return std::exp(l);
  };
  TailResult out;
  double total = 0.0;
  int quiet = 0;
  constexpr double kMaxS = 700.0;
  for (double s = 0.0; s < kMaxS; s += 1.0) {
    const double chunk = adaptive_simpson(g, s, s + 1.0, opt);
    total += chunk;
    if (!std::isfinite(total)) {
      out.value = std::numeric_limits<double>::infinity();
      out.converged = false;
      return out;
    }
    if (chunk <= opt.rel_tol * 1e-3 * std::abs(total) || chunk == 0.0) {
      if (++quiet >= 3 && (total > 0.0 || s > 60.0)) {
        out.value = total;
        return out;
      }
    } else {
      quiet = 0;
    }
  }
  out.value = total;
  out.converged = false;
  return out;
}

}  // namespace ri::quad
