#include "ri/slowly_varying.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "ri/error.hpp"

namespace ri {

namespace {

constexpr double kExpTol = 1e-12;

bool is_zero(double x) { return std::abs(x) <= kExpTol; }

// Log-only part of the integrability test at a critical power (-1).
bool log_part_integrable(LogExponents e) {
  if (e.level1 < -1.0 - kExpTol) return true;
  if (std::abs(e.level1 + 1.0) <= kExpTol) return e.level2 < -1.0 - kExpTol;
  return false;
}

bool log_part_bounded(LogExponents e) {
  if (e.level1 < -kExpTol) return true;
  if (is_zero(e.level1)) return e.level2 <= kExpTol;
  return false;
}

}  // namespace

double ell(int level, double u) {
  const double l1 = 1.0 + std::abs(u);
  if (level == 1) return l1;
  if (level == 2) return 1.0 + std::log(l1);
  throw DomainError("ell: only levels 1 and 2 are supported");
}

int LogExponents::dominant_sign() const {
  if (level1 > kExpTol) return 1;
  if (level1 < -kExpTol) return -1;
  if (level2 > kExpTol) return 1;
  if (level2 < -kExpTol) return -1;
  return 0;
}

bool power_log_integrable(double power, LogExponents e, Endpoint end) {
  if (end == Endpoint::Zero) {
    if (power > -1.0 + kExpTol) return true;
    if (power < -1.0 - kExpTol) return false;
  } else {
    if (power < -1.0 - kExpTol) return true;
    if (power > -1.0 + kExpTol) return false;
  }
  return log_part_integrable(e);
}

bool power_log_bounded(double power, LogExponents e, Endpoint end) {
  if (end == Endpoint::Zero) {
    if (power > kExpTol) return true;
    if (power < -kExpTol) return false;
  } else {
    if (power < -kExpTol) return true;
    if (power > kExpTol) return false;
  }
  return log_part_bounded(e);
}

SlowlyVarying::SlowlyVarying(double constant, std::vector<LogFactor> factors)
    : constant_(constant), factors_(std::move(factors)) {
  if (!(constant_ > 0.0) || !std::isfinite(constant_)) {
    throw DomainError("SlowlyVarying: constant must be positive and finite");
  }
  for (const auto& f : factors_) {
    if (f.level != 1 && f.level != 2) {
      throw DomainError("SlowlyVarying: factor level must be 1 or 2");
    }
    if (!std::isfinite(f.alpha0) || !std::isfinite(f.alpha_inf)) {
      throw DomainError("SlowlyVarying: exponents must be finite");
    }
  }
}

SlowlyVarying SlowlyVarying::broken_log(int level, double alpha0, double alpha_inf) {
  return SlowlyVarying(1.0, {LogFactor{level, alpha0, alpha_inf}});
}

double SlowlyVarying::log_at(double u) const {
  double acc = std::log(constant_);
  for (const auto& f : factors_) {
    const double a = u < 0.0 ? f.alpha0 : f.alpha_inf;
    if (a != 0.0) acc += a * std::log(ell(f.level, u));
  }
  return acc;
}

double SlowlyVarying::operator()(double t) const {
  if (!(t > 0.0)) throw DomainError("SlowlyVarying: t must be positive");
  return std::exp(log_at(std::log(t)));
}

bool SlowlyVarying::is_trivial() const {
  if (constant_ != 1.0) return false;
  return std::all_of(factors_.begin(), factors_.end(), [](const LogFactor& f) {
    return f.alpha0 == 0.0 && f.alpha_inf == 0.0;
  });
}

SlowlyVarying SlowlyVarying::pow(double r) const {
  std::vector<LogFactor> fs;
  fs.reserve(factors_.size());
  for (const auto& f : factors_) fs.push_back({f.level, f.alpha0 * r, f.alpha_inf * r});
  return SlowlyVarying(std::pow(constant_, r), std::move(fs));
}

SlowlyVarying SlowlyVarying::operator*(const SlowlyVarying& o) const {
  std::vector<LogFactor> fs = factors_;
  fs.insert(fs.end(), o.factors_.begin(), o.factors_.end());
  return SlowlyVarying(constant_ * o.constant_, std::move(fs));
}

LogExponents SlowlyVarying::asymptotics(Endpoint end) const {
  LogExponents e;
  for (const auto& f : factors_) {
    const double a = end == Endpoint::Zero ? f.alpha0 : f.alpha_inf;
    (f.level == 1 ? e.level1 : e.level2) += a;
  }
  return e;
}

bool SlowlyVarying::equivalent_to_nonincreasing() const {
  // Every factor is monotone on (0,1) and on (1,inf), so only the endpoint
  // behaviour matters: b must not vanish at 0 and must stay bounded at infinity.
  return asymptotics(Endpoint::Zero).dominant_sign() >= 0 &&
         equivalent_to_nonincreasing_at_infinity();
}

bool SlowlyVarying::equivalent_to_nonincreasing_at_infinity() const {
  return asymptotics(Endpoint::Infinity).dominant_sign() <= 0;
}

double SlowlyVarying::monotone_equivalence_ratio(double eps, double t_min, double t_max,
                                                 int points_per_decade) const {
  const double u0 = std::log(t_min);
  const double u1 = std::log(t_max);
  const int n = std::max(2, static_cast<int>(std::ceil((u1 - u0) / std::log(10.0) *
                                                        points_per_decade)));
  std::vector<double> lf(n + 1);
  for (int i = 0; i <= n; ++i) {
    const double u = u0 + (u1 - u0) * i / n;
    lf[i] = eps * u + log_at(u);
  }
  double worst = 0.0;  // in log space; ratio = exp(worst)
  if (eps >= 0.0) {
    double run = -std::numeric_limits<double>::infinity();
    for (int i = 0; i <= n; ++i) {
      run = std::max(run, lf[i]);
      worst = std::min(worst, lf[i] - run);
    }
  } else {
    double run = -std::numeric_limits<double>::infinity();
    for (int i = n; i >= 0; --i) {
      run = std::max(run, lf[i]);
      worst = std::min(worst, lf[i] - run);
    }
  }
  return std::exp(worst);
}

std::string SlowlyVarying::label() const {
  if (is_trivial()) return "1";
  std::ostringstream os;
  bool first = true;
  if (constant_ != 1.0) {
    os << constant_;
    first = false;
  }
  for (const auto& f : factors_) {
    if (!first) os << "*";
    os << "l" << f.level << "^(" << f.alpha0 << "," << f.alpha_inf << ")";
    first = false;
  }
  return os.str();
}

}  // namespace ri
