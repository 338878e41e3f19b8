#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ri/piecewise_power.hpp"
#include "ri/quadrature.hpp"
#include "ri/slowly_varying.hpp"
#include "ri/step_function.hpp"

namespace ri {

enum class Variant { Star, DoubleStar };

/// L^{p,q,b} (star, uses f*) or L^{(p,q,b)} (doublestar, uses f**).
struct LKSpace {
  double p = 2.0;
  double q = 2.0;
  SlowlyVarying b;
  Variant variant = Variant::Star;

  static LKSpace lebesgue(double p) { return {p, p, {}, Variant::Star}; }
  static LKSpace lorentz(double p, double q) { return {p, q, {}, Variant::Star}; }
  std::string label() const;
};

/// Positive weight on (0, inf) given by log w(e^u). Either a slowly varying product
/// (exact, with known endpoint asymptotics) or a derived weight evaluated numerically.
class Weight {
 public:
  Weight() = default;
  Weight(SlowlyVarying b);  // NOLINT: implicit on purpose
  Weight(std::function<double(double)> log_w, std::string label);

  double log_at(double u) const;
  double operator()(double t) const;
  const SlowlyVarying* slowly_varying() const { return sv_ ? &*sv_ : nullptr; }
  bool is_constant() const;
  std::string label() const;

 private:
  std::optional<SlowlyVarying> sv_;
  std::function<double(double)> log_w_;
  std::string label_;
};

struct NormOptions {
  /// Grid used to discretise non-monotone functions before rearranging.
  GeometricGrid grid{};
  quad::Options quad{};
};

struct Admissibility {
  bool admissible = false;
  std::string case_label;
  bool heuristic = false;
};

Admissibility is_admissible(const LKSpace& X);

/// ||t^{1/p-1/q} w(t) g(t)||_{L^q(0,inf)} for nonincreasing g; +inf on divergence.
double weighted_lq_norm(const PiecewisePower& g, double p, double q, const Weight& w,
                        const NormOptions& opt = {});

/// Lorentz-Karamata norm; throws DomainError for non-admissible X.
double lk_norm(const StepFunction& f, const LKSpace& X, const NormOptions& opt = {});
/// Same for a nonnegative piecewise power function (rearranged on opt.grid when needed).
double lk_norm(const PiecewisePower& h, const LKSpace& X, const NormOptions& opt = {});
/// Norm with an arbitrary weight (derived associate and target weights).
double lk_norm(const PiecewisePower& h, double p, double q, const Weight& w, Variant v,
               const NormOptions& opt = {});

double fundamental_function(const LKSpace& X, double t, const NormOptions& opt = {});

/// Partial integrals int t^{-1} b^q (sup b when q = inf) over the windows
/// (10^-8 4^-j, 1) (Zero) or (1, 10^8 4^j) (Infinity), j = 0..5. Used to cross-check
/// the symbolic tests.
std::vector<double> window_norms(const SlowlyVarying& b, double q, Endpoint end);
/// Heuristic finiteness verdict from window growth.
bool windows_converge(const std::vector<double>& w, double q);

/// d(t) = inf_{tau >= t} b(tau), tabulated in u = log t.
class InfEnvelope {
 public:
  explicit InfEnvelope(SlowlyVarying b);
  double operator()(double t) const;
  double log_at(double u) const;
  /// lim_{t -> 0+} d(t)
  double at_zero() const { return at_zero_; }
  bool is_constant(double rel_tol = 1e-9) const;
  const SlowlyVarying& base() const { return b_; }

 private:
  SlowlyVarying b_;
  std::vector<double> table_;  // log d on the u-table
  double at_zero_ = 0.0;
  double log_tail_inf_ = 0.0;  // log inf_{u >= u_max} b
};

/// a(t) = b^{1-q'}(t) / int_t^inf tau^{-1} b^{-q'}(tau) dtau
Weight target_weight_a(const SlowlyVarying& b, double q);
/// a(t) = (int_0^t tau^{-1} b^q)^{-1} b^{q-1}(t)
Weight associate_weight_a(const SlowlyVarying& b, double q);
/// h(t) = sup_{tau in (0,t)} b(tau)
Weight sup_envelope(const SlowlyVarying& b);

enum class SpaceKind { LK, LambdaOne, LambdaOneCapLinf, ImplicitUm, NonExistent };

/// Symbolic result of the associate and optimal-space constructions.
struct SpaceDescription {
  SpaceKind kind = SpaceKind::NonExistent;
  // LK
  double p = 0.0;
  double q = 0.0;
  Weight weight;
  Variant variant = Variant::Star;
  // LambdaOne
  std::shared_ptr<const InfEnvelope> d;
  // ImplicitUm: the norm || int_t^inf f*(tau) tau^{m/D-1} dtau ||_Y
  std::optional<LKSpace> implicit_of;
  double m_over_D = 0.0;
  std::string reason;

  static SpaceDescription lk(double p, double q, Weight w, Variant v = Variant::Star);
  static SpaceDescription nonexistent(std::string why);
  std::string label() const;
};

SpaceDescription associate_space(const LKSpace& X);

/// Norm of f in a described space (LK, Lambda^1(d'), Lambda^1(d') cap L^inf, implicit).
double description_norm(const SpaceDescription& S, const StepFunction& f,
                        const NormOptions& opt = {});

/// sum_i v_i (d(c_{i+1}) - d(c_i)) over the cells of f*; d(0) is taken as d(0+).
double lambda1_norm(const StepFunction& f, const std::function<double(double)>& d);
double lambda1_norm(const StepFunction& f, const InfEnvelope& d);

/// Lower bound of ||h||_{X'} by stochastic search over nonincreasing g = sum delta_j chi_(0,s_j)
/// normalised in X, refined by coordinate ascent. Deterministic for a fixed seed.
double associate_norm_lower_bound(const StepFunction& h, const LKSpace& X, int trials,
                                  std::uint64_t seed, const NormOptions& opt = {});

}  // namespace ri
