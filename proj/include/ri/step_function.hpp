#pragma once

#include <span>
#include <vector>

namespace ri {

/// Geometric partition of [t_min, t_max] with a fixed number of cells per decade.
struct GeometricGrid {
  double t_min = 1e-8;
  double t_max = 1e8;
  int cells_per_decade = 64;

  void validate() const;
  /// Cell boundaries t_min * r^i, the last one clamped to t_max.
  std::vector<double> breakpoints() const;
  std::size_t cells() const;
  GeometricGrid refined(int factor) const;
};

/// Nonnegative, compactly supported, piecewise-constant function on (0, inf).
/// Value values[i] on [breakpoints[i], breakpoints[i+1]); zero elsewhere.
class StepFunction {
 public:
  StepFunction() = default;
  StepFunction(std::vector<double> breakpoints, std::vector<double> values);

  static StepFunction on_grid(const GeometricGrid& grid, std::vector<double> values);
  static StepFunction indicator(double a, double b, double height = 1.0);
  /// Values on consecutive unit cells (0,1), (1,2), ...
  static StepFunction unit_cells(std::vector<double> values);

  std::span<const double> breakpoints() const { return breaks_; }
  std::span<const double> values() const { return values_; }
  std::size_t cells() const { return values_.size(); }
  bool is_zero() const;

  double operator()(double t) const;
  double cell_length(std::size_t i) const { return breaks_[i + 1] - breaks_[i]; }

  double integral() const;
  double support_start() const;
  double support_end() const;
  /// Lebesgue measure of {f > 0}.
  double support_measure() const;
  double sup() const;
  double lp_norm(double p) const;
  /// lambda({f > level})
  double distribution(double level) const;
  /// int_0^t f
  double prefix_integral(double t) const;
  bool is_nonincreasing() const;

  StepFunction scaled(double c) const;

 private:
  std::vector<double> breaks_;
  std::vector<double> values_;
};

class PiecewisePower;

/// Nonincreasing rearrangement f*: cells sorted by value and left-packed on (0, |supp f|).
StepFunction rearrange(const StepFunction& f);

/// f**(t) = (1/t) int_0^t f*; exact, as a piecewise A + B/t function.
PiecewisePower maximal(const StepFunction& f);

/// int_a^b f(tau) tau^beta dtau, exact cell by cell (log branch for beta = -1).
/// b may be +inf. Throws DomainError when the integral diverges at 0.
double power_integral(const StepFunction& f, double beta, double a, double b);

/// (D_a f)(t) = f(a t).
StepFunction dilation(const StepFunction& f, double a);

/// Hardy-Littlewood-Polya order: int_0^t f* <= int_0^t g* at every breakpoint of
/// either rearrangement (both sides are piecewise linear in t between them).
bool hlp_compare(const StepFunction& f, const StepFunction& g, double rel_tol = 1e-12);

}  // namespace ri
