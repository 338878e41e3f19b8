#include "ri/step_function.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "ri/error.hpp"
#include "ri/piecewise_power.hpp"

namespace ri {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// int_a^b tau^beta dtau for 0 <= a < b < inf.
double power_antiderivative_diff(double beta, double a, double b) {
  if (beta == -1.0) {
    if (a == 0.0) throw DomainError("power_integral: log divergence at 0");
    return std::log(b / a);
  }
  const double e = beta + 1.0;
  if (a == 0.0) {
    if (e <= 0.0) throw DomainError("power_integral: divergent at 0");
    return std::pow(b, e) / e;
  }
  return (std::pow(b, e) - std::pow(a, e)) / e;
}

}  // namespace

void GeometricGrid::validate() const {
  if (!(t_min > 0.0) || !(t_max > t_min) || !std::isfinite(t_max)) {
    throw DomainError("GeometricGrid: need 0 < t_min < t_max < inf");
  }
  if (cells_per_decade < 1) throw DomainError("GeometricGrid: cells_per_decade must be >= 1");
  if (cells() < 2) throw DomainError("GeometricGrid: at least 2 cells required");
}

std::size_t GeometricGrid::cells() const {
  const double decades = std::log10(t_max / t_min);
  return static_cast<std::size_t>(std::ceil(decades * cells_per_decade - 1e-9));
}

std::vector<double> GeometricGrid::breakpoints() const {
  validate();
  const std::size_t n = cells();
  std::vector<double> out(n + 1);
  const double lr = std::log(10.0) / cells_per_decade;
  for (std::size_t i = 0; i <= n; ++i) out[i] = t_min * std::exp(lr * static_cast<double>(i));
  out[0] = t_min;
  out[n] = t_max;
  return out;
}

GeometricGrid GeometricGrid::refined(int factor) const {
  if (factor < 1) throw DomainError("GeometricGrid: refinement factor must be >= 1");
  return {t_min, t_max, cells_per_decade * factor};
}

StepFunction::StepFunction(std::vector<double> breakpoints, std::vector<double> values)
    : breaks_(std::move(breakpoints)), values_(std::move(values)) {
  if (values_.empty() && breaks_.size() <= 1) {
    breaks_.clear();
    return;
  }
  if (breaks_.size() != values_.size() + 1) {
    throw DomainError("StepFunction: need breakpoints.size() == values.size() + 1");
  }
  if (!(breaks_.front() >= 0.0)) throw DomainError("StepFunction: breakpoints must be >= 0");
  for (std::size_t i = 0; i + 1 < breaks_.size(); ++i) {
    if (!(breaks_[i + 1] > breaks_[i]) || !std::isfinite(breaks_[i + 1])) {
      throw DomainError("StepFunction: breakpoints must be finite and strictly increasing");
    }
  }
  for (double v : values_) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw DomainError("StepFunction: values must be finite and nonnegative");
    }
  }
}

StepFunction StepFunction::on_grid(const GeometricGrid& grid, std::vector<double> values) {
  auto b = grid.breakpoints();
  if (values.size() != b.size() - 1) throw DomainError("StepFunction: values do not match grid");
  return StepFunction(std::move(b), std::move(values));
}

StepFunction StepFunction::indicator(double a, double b, double height) {
  return StepFunction({a, b}, {height});
}

StepFunction StepFunction::unit_cells(std::vector<double> values) {
  std::vector<double> b(values.size() + 1);
  std::iota(b.begin(), b.end(), 0.0);
  return StepFunction(std::move(b), std::move(values));
}

bool StepFunction::is_zero() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return v == 0.0; });
}

double StepFunction::operator()(double t) const {
  if (values_.empty() || t < breaks_.front() || t >= breaks_.back()) return 0.0;
  const auto it = std::upper_bound(breaks_.begin(), breaks_.end(), t);
  return values_[static_cast<std::size_t>(it - breaks_.begin()) - 1];
}

double StepFunction::integral() const {
  double s = 0.0;
  for (std::size_t i = 0; i < values_.size(); ++i) s += values_[i] * cell_length(i);
  return s;
}

double StepFunction::support_start() const {
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (values_[i] > 0.0) return breaks_[i];
  }
  return 0.0;
}

double StepFunction::support_end() const {
  for (std::size_t i = values_.size(); i-- > 0;) {
    if (values_[i] > 0.0) return breaks_[i + 1];
  }
  return 0.0;
}

double StepFunction::support_measure() const { return distribution(0.0); }

double StepFunction::sup() const {
  double s = 0.0;
  for (double v : values_) s = std::max(s, v);
  return s;
}

double StepFunction::lp_norm(double p) const {
  if (std::isinf(p)) return sup();
  if (!(p >= 1.0)) throw DomainError("lp_norm: p must be >= 1");
  double s = 0.0;
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (values_[i] > 0.0) s += std::pow(values_[i], p) * cell_length(i);
  }
  return std::pow(s, 1.0 / p);
}

double StepFunction::distribution(double level) const {
  double s = 0.0;
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (values_[i] > level) s += cell_length(i);
  }
  return s;
}

double StepFunction::prefix_integral(double t) const {
  double s = 0.0;
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (breaks_[i] >= t) break;
    s += values_[i] * (std::min(t, breaks_[i + 1]) - breaks_[i]);
  }
  return s;
}

bool StepFunction::is_nonincreasing() const {
  if (values_.empty()) return true;
  // f vanishes on (0, breakpoints[0])
  double prev = breaks_.front() > 0.0 ? 0.0 : kInf;
  for (double v : values_) {
    if (v > prev) return false;
    prev = v;
  }
  return true;
}

StepFunction StepFunction::scaled(double c) const {
  if (!(c >= 0.0)) throw DomainError("StepFunction::scaled: factor must be >= 0");
  std::vector<double> v(values_);
  for (double& x : v) x *= c;
  return StepFunction(breaks_, std::move(v));
}

StepFunction rearrange(const StepFunction& f) {
  const auto vals = f.values();
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < vals.size(); ++i) {
    if (vals[i] > 0.0) idx.push_back(i);
  }
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t a, std::size_t b) { return vals[a] > vals[b]; });
  std::vector<double> breaks{0.0};
  std::vector<double> values;
  for (std::size_t i : idx) {
    const double len = f.cell_length(i);
    if (!values.empty() && values.back() == vals[i]) {
      breaks.back() += len;
    } else {
      values.push_back(vals[i]);
      breaks.push_back(breaks.back() + len);
    }
  }
  if (values.empty()) return {};
  return StepFunction(std::move(breaks), std::move(values));
}

PiecewisePower maximal(const StepFunction& f) {
  const StepFunction s = rearrange(f);
  if (s.cells() == 0) return {};
  std::vector<PowerPiece> pieces;
  const auto b = s.breakpoints();
  const auto v = s.values();
  double prefix = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    PowerPiece p{b[i], b[i + 1], {{v[i], 0.0}}};
    const double c = prefix - v[i] * b[i];
    if (c != 0.0) p.terms.push_back({c, -1.0});
    pieces.push_back(std::move(p));
    prefix += v[i] * (b[i + 1] - b[i]);
  }
  pieces.push_back({b.back(), kInf, {{prefix, -1.0}}});
  return PiecewisePower(std::move(pieces));
}

double power_integral(const StepFunction& f, double beta, double a, double b) {
  if (!(a >= 0.0) || !(b > a)) {
    if (b == a) return 0.0;
    throw DomainError("power_integral: need 0 <= a < b");
  }
  const auto br = f.breakpoints();
  const auto v = f.values();
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] == 0.0) continue;
    const double lo = std::max(a, br[i]);
    const double hi = std::min(b, br[i + 1]);
    if (hi <= lo) continue;
    s += v[i] * power_antiderivative_diff(beta, lo, hi);
  }
  return s;
}

StepFunction dilation(const StepFunction& f, double a) {
  if (!(a > 0.0) || !std::isfinite(a)) throw DomainError("dilation: a must be positive");
  if (f.cells() == 0) return f;
  std::vector<double> b(f.breakpoints().begin(), f.breakpoints().end());
  for (double& x : b) x /= a;
  return StepFunction(std::move(b), std::vector<double>(f.values().begin(), f.values().end()));
}

bool hlp_compare(const StepFunction& f, const StepFunction& g, double rel_tol) {
  const StepFunction fs = rearrange(f);
  const StepFunction gs = rearrange(g);
  std::vector<double> ts(fs.breakpoints().begin(), fs.breakpoints().end());
  ts.insert(ts.end(), gs.breakpoints().begin(), gs.breakpoints().end());
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
  for (double t : ts) {
    const double pf = fs.prefix_integral(t);
    const double pg = gs.prefix_integral(t);
    if (pf > pg + rel_tol * std::max(std::abs(pf), std::abs(pg))) return false;
  }
  return true;
}

}  // namespace ri
