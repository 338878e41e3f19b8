#pragma once

#include <limits>
#include <vector>

#include "ri/step_function.hpp"

namespace ri {

struct PowerTerm {
  double coef = 0.0;
  double exponent = 0.0;
};

/// One piece [lo, hi) carrying sum_i coef_i * t^{exponent_i}. hi may be +inf.
struct PowerPiece {
  double lo = 0.0;
  double hi = 0.0;
  std::vector<PowerTerm> terms;

  double eval(double t) const;
  /// log of the value at t = e^u, computed term-wise in log space; -inf when <= 0.
  double log_eval(double u) const;
  /// Exact integral over [a, b] within the piece.
  double integral(double a, double b) const;
};

/// Function on (0, inf) that is a finite sum of powers on each of finitely many
/// contiguous pieces, zero outside them. Carrier for f**, Rf, F_l f, T f and
/// the other derived functions, all of which are exact in this form for step f.
class PiecewisePower {
 public:
  PiecewisePower() = default;
  explicit PiecewisePower(std::vector<PowerPiece> pieces);

  static PiecewisePower from_step(const StepFunction& f);
  static PiecewisePower power(double coef, double exponent, double lo, double hi);

  const std::vector<PowerPiece>& pieces() const { return pieces_; }
  bool is_zero() const { return pieces_.empty(); }

  double operator()(double t) const;
  double log_at(double u) const;

  double integral(double a, double b) const;
  double total_integral() const {
    return integral(0.0, std::numeric_limits<double>::infinity());
  }
  double support_start() const;
  double support_end() const;
  bool bounded_support() const;

  /// Multiplies by coef * t^exponent.
  PiecewisePower times_power(double coef, double exponent) const;
  PiecewisePower operator*(const PiecewisePower& o) const;
  PiecewisePower operator+(const PiecewisePower& o) const;

  bool is_nonincreasing(double rel_tol = 1e-11) const;
  double sup() const;

  std::vector<double> breakpoints() const;

 private:
  std::vector<PowerPiece> pieces_;
};

/// h** for a nonincreasing h that starts at 0 (throws DomainError otherwise).
PiecewisePower maximal(const PiecewisePower& h);

/// t -> int_t^inf h(tau) tau^beta dtau, exact. Throws when a term integrates to a
/// logarithm or the tail diverges.
PiecewisePower tail_power_transform(const PiecewisePower& h, double beta);

/// Nonincreasing rearrangement of a nonnegative PiecewisePower. Nonincreasing input
/// is returned unchanged. Otherwise the function is averaged over the cells of
/// `grid` (merged with its own breakpoints), the cells are sorted, and a
/// nonincreasing infinite tail is appended analytically. The discretised region is
/// extended past t_max until every cell value lies above the tail.
PiecewisePower rearrange(const PiecewisePower& h, const GeometricGrid& grid);

/// Step approximation by exact cell averages over the grid cells merged with the
/// breakpoints of h, restricted to [0, upper].
StepFunction cell_average(const PiecewisePower& h, const GeometricGrid& grid, double upper);

}  // namespace ri
