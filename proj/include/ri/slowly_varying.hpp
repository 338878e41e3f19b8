#pragma once

#include <string>
#include <vector>

namespace ri {

/// Iterated logarithm l_k as a function of u = log t:
/// l_1 = 1 + |u|, l_2 = 1 + log l_1.
double ell(int level, double u);

/// Leading log-power behaviour l_1^{level1} * l_2^{level2} at one endpoint.
struct LogExponents {
  double level1 = 0.0;
  double level2 = 0.0;

  LogExponents scaled(double r) const { return {level1 * r, level2 * r}; }
  LogExponents operator+(const LogExponents& o) const {
    return {level1 + o.level1, level2 + o.level2};
  }
  /// Sign of the dominant exponent: +1 (function -> inf), -1 (-> 0), 0 (bounded both ways).
  int dominant_sign() const;
};

enum class Endpoint { Zero, Infinity };

/// Finiteness of the integral of t^power * l_1^{e.level1} * l_2^{e.level2} dt
/// near the given endpoint (power is the exponent of t before multiplying dt).
bool power_log_integrable(double power, LogExponents e, Endpoint end);

/// Boundedness of t^power * l_1^{e.level1} * l_2^{e.level2} near the endpoint.
bool power_log_bounded(double power, LogExponents e, Endpoint end);

/// One broken-logarithm factor l_k^A, A = (alpha0 on (0,1), alpha_inf on [1,inf)).
struct LogFactor {
  int level = 1;
  double alpha0 = 0.0;
  double alpha_inf = 0.0;
};

/// b(t) = constant * prod l_{k_i}^{A_i}(t). Covers Lebesgue, Lorentz and
/// Lorentz-Zygmund weights.
class SlowlyVarying {
 public:
  SlowlyVarying() = default;
  SlowlyVarying(double constant, std::vector<LogFactor> factors);

  static SlowlyVarying one() { return {}; }
  static SlowlyVarying broken_log(int level, double alpha0, double alpha_inf);

  double operator()(double t) const;
  /// log b(e^u); valid for every finite u, including |u| far beyond double range of t.
  double log_at(double u) const;

  double constant() const { return constant_; }
  const std::vector<LogFactor>& factors() const { return factors_; }
  bool is_trivial() const;

  SlowlyVarying pow(double r) const;
  SlowlyVarying inverse() const { return pow(-1.0); }
  SlowlyVarying operator*(const SlowlyVarying& o) const;

  LogExponents asymptotics(Endpoint end) const;

  /// Equivalent (two-sided bounded ratio) to a nonincreasing function on (0, inf).
  bool equivalent_to_nonincreasing() const;
  /// Equivalent to a nonincreasing function on (1, inf).
  bool equivalent_to_nonincreasing_at_infinity() const;

  /// min over grid points of t^{eps} b(t) / sup_{s<=t} s^{eps} b(s); the slowly varying
  /// property says this stays bounded away from 0 (eps > 0) on every grid.
  /// With eps < 0 the envelope is the running max from the right.
  double monotone_equivalence_ratio(double eps, double t_min, double t_max,
                                    int points_per_decade = 64) const;

  std::string label() const;

 private:
  double constant_ = 1.0;
  std::vector<LogFactor> factors_;
};

}  // namespace ri
