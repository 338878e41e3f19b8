#pragma once

#include <vector>

#include "ri/cone.hpp"
#include "ri/lk_spaces.hpp"
#include "ri/piecewise_power.hpp"
#include "ri/slowly_varying.hpp"
#include "ri/step_function.hpp"

namespace ri {

struct SmoothnessParams {
  int m = 1;
  double D = 2.0;

  double a() const { return m / D; }
  void validate() const;
  static SmoothnessParams of(const MonomialCone& cone, int m);
};

/// Rf(t) = int_t^inf f(tau) tau^{m/D-1} dtau
PiecewisePower reduction_op(const StepFunction& f, const SmoothnessParams& sp);
/// t^{m/D} g**(t)
PiecewisePower dual_reduction(const StepFunction& g, const SmoothnessParams& sp);

struct FubiniCheck {
  double lhs = 0.0;  // int Rf g*
  double rhs = 0.0;  // int f tau^{m/D} g**
  double rel_err = 0.0;
};
FubiniCheck fubini_check(const StepFunction& f, const StepFunction& g, const SmoothnessParams& sp);

/// F_l f(t) = t^{l-m/D} int_t^inf f(tau) tau^{m/D-l-1} dtau, 1 <= l <= m-1.
PiecewisePower hardy_Fl(const StepFunction& f, int l, const SmoothnessParams& sp);
/// D/(Dl-m)
double hardy_Fl_linf_bound(int l, const SmoothnessParams& sp);
/// D/(Dl-m+D)
double hardy_Fl_l1_bound(int l, const SmoothnessParams& sp);

/// T f(t) = t^{-m/D} sup_{tau >= t} tau^{m/D} f*(tau)
PiecewisePower level_op(const StepFunction& f, const SmoothnessParams& sp);
/// Running sup t -> sup_{tau >= t} tau^{m/D} f*(tau) as a step function on the cells of f*.
StepFunction level_sup(const StepFunction& f, const SmoothnessParams& sp);

/// j-th derivative of g(t) = int_t^inf f(tau) tau^{m/D-m} (tau-t)^{m-1} dtau, 0 <= j <= m.
double kernel_g_derivative(const StepFunction& f, const SmoothnessParams& sp, int j, double t);
inline double kernel_g(const StepFunction& f, const SmoothnessParams& sp, double t) {
  return kernel_g_derivative(f, sp, 0, t);
}

/// Weight tau^exponent * sv(tau) * scale; scale = 0 is the zero weight.
struct PowerWeight {
  double exponent = 0.0;
  SlowlyVarying sv;
  double scale = 1.0;
};

struct HardyCheck {
  bool finite = false;
  double sup_estimate = 0.0;
  /// sup of the product over the windows (10^-8 4^-j, 10^8 4^j), j = 0..5
  std::vector<double> window_sups;
  bool windows_bounded = false;
};

/// sup_t ||u||_{L^{q'}(0,t)} ||v||_{L^q(t,inf)}: symbolic endpoint verdict plus a grid estimate.
HardyCheck weighted_hardy_check(const PowerWeight& u, const PowerWeight& v, double q, double qprime);

/// Nonincreasing, piecewise linear profile g with g = 0 beyond the last knot.
struct RadialProfile {
  std::vector<double> knots;   // 0 = t_0 < t_1 < ... < t_N
  std::vector<double> values;  // y_0 >= ... >= y_N = 0
  void validate() const;
};

/// phi(t) = c_iso t^{(D-1)/D} |g'(t)| as a piecewise power function.
PiecewisePower ps_phi(const RadialProfile& g, const MonomialCone& cone, double c_iso);
/// |grad u|, u = g(sigma(x)), pushed forward to (0, inf) through r -> B_mu r^D.
PiecewisePower ps_gradient(const RadialProfile& g, const MonomialCone& cone);
/// int_0^S phi* computed from the t-representation of phi.
double ps_prefix_t(const RadialProfile& g, const MonomialCone& cone, double c_iso, double S);
/// int_0^S |grad u|*_mu computed on spherical shells in r.
double ps_prefix_r(const RadialProfile& g, const MonomialCone& cone, double S);

struct PolyaSzegoResult {
  double lhs = 0.0;  // ||t^{(D-1)/D} g'||_X
  double rhs = 0.0;  // ||grad u||_X / c_iso
  double prefix_max_rel_err = 0.0;
};
PolyaSzegoResult polya_szego_radial(const RadialProfile& g, const MonomialCone& cone,
                                    const LKSpace& X, double c_iso, const NormOptions& opt = {});

}  // namespace ri
