#include "ri/lk_spaces.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>

#include "ri/error.hpp"

namespace ri {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTableMin = -200.0;
constexpr double kTableMax = 200.0;
constexpr double kTableStep = 0.005;

std::string fmt_index(double x) {
  if (std::isinf(x)) return "inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

double conjugate(double q) {
  if (std::isinf(q)) return 1.0;
  if (q == 1.0) return kInf;
  return q / (q - 1.0);
}

std::size_t table_size() {
  return static_cast<std::size_t>(std::llround((kTableMax - kTableMin) / kTableStep)) + 1;
}

double table_u(std::size_t i) { return kTableMin + kTableStep * static_cast<double>(i); }

// Linear interpolation in a u-table of log values.
double table_lookup(const std::vector<double>& t, double u) {
  const double x = (u - kTableMin) / kTableStep;
  const auto i = static_cast<std::size_t>(std::clamp(std::floor(x), 0.0, static_cast<double>(t.size() - 2)));
  const double w = x - static_cast<double>(i);
  if (std::isinf(t[i]) || std::isinf(t[i + 1])) return w < 0.5 ? t[i] : t[i + 1];
  return t[i] + w * (t[i + 1] - t[i]);
}

// int over [u_a, u_b] of exp(L(u)), splitting at u = 0 where broken logs have a kink.
template <class L>
double integrate_u(L&& l, double ua, double ub, const quad::Options& q) {
  auto f = [&](double u) {
    const double v = l(u);
    return v == -kInf ? 0.0 : std::exp(v);
  };
  if (ua < 0.0 && ub > 0.0) return quad::adaptive_simpson(f, ua, 0.0, q) + quad::adaptive_simpson(f, 0.0, ub, q);
  return quad::adaptive_simpson(f, ua, ub, q);
}

// Dominant exponent of a piece near an endpoint (largest at infinity, smallest at zero).
double dominant_exponent(const PowerPiece& p, Endpoint end) {
  double e = end == Endpoint::Infinity ? -kInf : kInf;
  for (const auto& t : p.terms) {
    if (t.coef == 0.0) continue;
    e = end == Endpoint::Infinity ? std::max(e, t.exponent) : std::min(e, t.exponent);
  }
  return e;
}

// Tail of the q-th power integral on a piece running to 0 or inf. Returns the
// numerical value, or +inf when the symbolic test says the tail diverges.
template <class L>
double tail_integral(L&& l, double u0, Endpoint end, const PowerPiece& piece, double p, double q,
                     const Weight& w, const quad::Options& opt) {
  const int dir = end == Endpoint::Infinity ? 1 : -1;
  const auto r = quad::integrate_tail(l, u0, dir, opt);
  if (r.converged) return r.value;
  const SlowlyVarying* sv = w.slowly_varying();
  if (!sv || std::isinf(r.value)) return kInf;
  const double e = dominant_exponent(piece, end);
  const double power = (std::isinf(p) ? 0.0 : q / p) - 1.0 + q * e;
  if (power_log_integrable(power, sv->asymptotics(end).scaled(q), end)) return r.value;
  return kInf;
}

double window_edge(int j) { return std::log(1e8) + j * std::log(4.0); }

double sup_on_interval(const std::function<double(double)>& m, double ua, double ub) {
  constexpr int kSamples = 16;
  double best = -kInf;
  double best_u = ua;
  for (int i = 0; i <= kSamples; ++i) {
    const double u = ua + (ub - ua) * i / kSamples;
    const double v = m(u);
    if (v > best) {
      best = v;
      best_u = u;
    }
  }
  // golden-section refinement around the best sample
  double a = std::max(ua, best_u - (ub - ua) / kSamples);
  double b = std::min(ub, best_u + (ub - ua) / kSamples);
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = m(c), fd = m(d);
  for (int it = 0; it < 60 && b - a > 1e-12 * (1.0 + std::abs(a)); ++it) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = m(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = m(d);
    }
  }
  return std::max({best, fc, fd});
}

class SupEnvelopeTable {
 public:
  explicit SupEnvelopeTable(SlowlyVarying b) : b_(std::move(b)) {
    sign0_ = b_.asymptotics(Endpoint::Zero).dominant_sign();
    table_.resize(table_size());
    double run = sign0_ > 0 ? kInf : -kInf;
    for (std::size_t i = 0; i < table_.size(); ++i) {
      run = std::max(run, b_.log_at(table_u(i)));
      table_[i] = run;
    }
  }
  double log_at(double u) const {
    if (u < kTableMin) return sign0_ > 0 ? kInf : (sign0_ < 0 ? b_.log_at(u) : table_.front());
    if (u > kTableMax) return std::max(table_.back(), b_.log_at(u));
    return table_lookup(table_, u);
  }

 private:
  SlowlyVarying b_;
  int sign0_ = 0;
  std::vector<double> table_;
};

}  // namespace

std::string LKSpace::label() const {
  std::string s = "L^{";
  if (variant == Variant::DoubleStar) s += "(";
  s += fmt_index(p) + "," + fmt_index(q);
  if (!b.is_trivial()) s += "," + b.label();
  if (variant == Variant::DoubleStar) s += ")";
  return s + "}";
}

Weight::Weight(SlowlyVarying b) : sv_(std::move(b)) {}

Weight::Weight(std::function<double(double)> log_w, std::string label)
    : log_w_(std::move(log_w)), label_(std::move(label)) {}

double Weight::log_at(double u) const {
  if (sv_) return sv_->log_at(u);
  if (log_w_) return log_w_(u);
  return 0.0;
}

double Weight::operator()(double t) const { return std::exp(log_at(std::log(t))); }

bool Weight::is_constant() const {
  if (sv_) {
    return std::all_of(sv_->factors().begin(), sv_->factors().end(),
                       [](const LogFactor& f) { return f.alpha0 == 0.0 && f.alpha_inf == 0.0; });
  }
  return !log_w_;
}

std::string Weight::label() const {
  if (sv_) return sv_->label();
  if (log_w_) return label_;
  return "1";
}

Admissibility is_admissible(const LKSpace& X) {
  const double p = X.p, q = X.q;
  if (!(p >= 1.0) || !(q >= 1.0)) return {false, "index below 1"};
  if (p > 1.0 && std::isfinite(p)) return {true, "p in (1,inf)"};
  if (std::isinf(p)) {
    // ||t^{-1/q} b||_{L^q(0,1)} < inf
    const LogExponents e = X.b.asymptotics(Endpoint::Zero);
    const bool ok = std::isinf(q) ? power_log_bounded(0.0, e, Endpoint::Zero)
                                  : power_log_integrable(-1.0, e.scaled(q), Endpoint::Zero);
    return {ok, ok ? "p = inf, origin condition holds" : "p = inf, origin condition fails"};
  }
  // p == 1
  if (X.variant == Variant::DoubleStar) {
    const LogExponents e = X.b.asymptotics(Endpoint::Infinity);
    const bool ok = std::isinf(q) ? power_log_bounded(0.0, e, Endpoint::Infinity)
                                  : power_log_integrable(-1.0, e.scaled(q), Endpoint::Infinity);
    return {ok, ok ? "p = 1, tail condition holds" : "p = 1, tail condition fails"};
  }
  if (q != 1.0) return {false, "p = 1 requires q = 1"};
  const bool ok = X.b.equivalent_to_nonincreasing();
  return {ok, ok ? "p = q = 1, b equivalent to nonincreasing"
                 : "p = q = 1, b not equivalent to nonincreasing"};
}

double weighted_lq_norm(const PiecewisePower& g, double p, double q, const Weight& w,
                        const NormOptions& opt) {
  if (g.is_zero()) return 0.0;
  const double inv_p = std::isinf(p) ? 0.0 : 1.0 / p;
  if (std::isinf(q)) {
    double best = -kInf;
    for (const auto& piece : g.pieces()) {
      std::function<double(double)> m = [&](double u) {
        return inv_p * u + w.log_at(u) + piece.log_eval(u);
      };
      if (piece.lo > 0.0 && std::isfinite(piece.hi)) {
        best = std::max(best, sup_on_interval(m, std::log(piece.lo), std::log(piece.hi)));
      } else {
        const double u0 = piece.lo > 0.0 ? std::log(piece.lo) : std::log(piece.hi);
        const double dir = piece.lo > 0.0 ? 1.0 : -1.0;
        std::function<double(double)> ms = [&](double s) { return m(u0 + dir * std::expm1(s)); };
        best = std::max(best, sup_on_interval(ms, 0.0, 7.0));
      }
    }
    return std::exp(best);
  }

  double total = 0.0;
  const double qp = q * inv_p;
  for (const auto& piece : g.pieces()) {
    const bool const_piece = piece.terms.size() == 1 && piece.terms[0].exponent == 0.0;
    if (const_piece && w.is_constant()) {
      const double c = std::pow(std::exp(w.log_at(0.0)) * piece.terms[0].coef, q);
      if (qp == 0.0) {
        if (piece.lo == 0.0 || std::isinf(piece.hi)) return kInf;
        total += c * std::log(piece.hi / piece.lo);
      } else {
        if (std::isinf(piece.hi)) return kInf;
        total += c * (std::pow(piece.hi, qp) - std::pow(piece.lo, qp)) / qp;
      }
      continue;
    }
    auto l = [&](double u) {
      const double lg = piece.log_eval(u);
      if (lg == -kInf) return -kInf;
      return qp * u + q * (w.log_at(u) + lg);
    };
    double lo_u = piece.lo > 0.0 ? std::log(piece.lo) : -kInf;
    double hi_u = std::isfinite(piece.hi) ? std::log(piece.hi) : kInf;
    double part = 0.0;
    if (std::isinf(lo_u)) {
      const double anchor = std::min(hi_u, 0.0);
      if (hi_u > anchor) part += integrate_u(l, anchor, hi_u, opt.quad);
      part += tail_integral(l, anchor, Endpoint::Zero, piece, p, q, w, opt.quad);
    } else if (std::isinf(hi_u)) {
      const double anchor = std::max(lo_u, 0.0);
      if (anchor > lo_u) part += integrate_u(l, lo_u, anchor, opt.quad);
      part += tail_integral(l, anchor, Endpoint::Infinity, piece, p, q, w, opt.quad);
    } else {
      part = integrate_u(l, lo_u, hi_u, opt.quad);
    }
    if (std::isinf(part)) return kInf;
    total += part;
  }
  return std::pow(total, 1.0 / q);
}

namespace {

void require_admissible(const LKSpace& X) {
  const auto a = is_admissible(X);
  if (!a.admissible) throw DomainError("space " + X.label() + " is not admissible: " + a.case_label);
}

}  // namespace

double lk_norm(const StepFunction& f, const LKSpace& X, const NormOptions& opt) {
  require_admissible(X);
  const PiecewisePower g =
      X.variant == Variant::Star ? PiecewisePower::from_step(rearrange(f)) : maximal(f);
  return weighted_lq_norm(g, X.p, X.q, Weight(X.b), opt);
}

double lk_norm(const PiecewisePower& h, const LKSpace& X, const NormOptions& opt) {
  require_admissible(X);
  return lk_norm(h, X.p, X.q, Weight(X.b), X.variant, opt);
}

double lk_norm(const PiecewisePower& h, double p, double q, const Weight& w, Variant v,
               const NormOptions& opt) {
  PiecewisePower g = rearrange(h, opt.grid);
  if (v == Variant::DoubleStar) g = maximal(g);
  return weighted_lq_norm(g, p, q, w, opt);
}

double fundamental_function(const LKSpace& X, double t, const NormOptions& opt) {
  if (!(t > 0.0)) throw DomainError("fundamental_function: t must be positive");
  return lk_norm(StepFunction::indicator(0.0, t), X, opt);
}

std::vector<double> window_norms(const SlowlyVarying& b, double q, Endpoint end) {
  std::vector<double> out;
  for (int j = 0; j <= 5; ++j) {
    const double edge = window_edge(j);
    const double ua = end == Endpoint::Zero ? -edge : 0.0;
    const double ub = end == Endpoint::Zero ? 0.0 : edge;
    if (std::isinf(q)) {
      double m = -kInf;
      for (int i = 0; i <= 2000; ++i) m = std::max(m, b.log_at(ua + (ub - ua) * i / 2000.0));
      out.push_back(std::exp(m));
    } else {
      // t^{-1} b^q dt = b^q du
      auto l = [&](double u) { return q * b.log_at(u); };
      out.push_back(integrate_u(l, ua, ub, {}));
    }
  }
  return out;
}

bool windows_converge(const std::vector<double>& w, double q) {
  if (w.size() < 3 || !std::isfinite(w.back())) return false;
  const std::size_t n = w.size() - 1;
  const double first = w[1] - w[0];
  const double last = w[n] - w[n - 1];
  if (last <= 1e-12 * std::abs(w.back())) return true;
  if (std::isinf(q)) return false;
  // increments behave like u^{-k} du in u = |log t|; the integral converges for k > 1
  const double k = std::log(first / last) / std::log(window_edge(static_cast<int>(n)) / window_edge(1));
  return k > 1.1;
}

InfEnvelope::InfEnvelope(SlowlyVarying b) : b_(std::move(b)) {
  const int sign0 = b_.asymptotics(Endpoint::Zero).dominant_sign();
  const int sign_inf = b_.asymptotics(Endpoint::Infinity).dominant_sign();
  log_tail_inf_ = sign_inf < 0 ? -kInf : b_.log_at(kTableMax);
  table_.resize(table_size());
  double run = log_tail_inf_;
  for (std::size_t i = table_.size(); i-- > 0;) {
    run = std::min(run, b_.log_at(table_u(i)));
    table_[i] = run;
  }
  at_zero_ = sign0 < 0 ? 0.0 : std::exp(table_.front());
}

double InfEnvelope::log_at(double u) const {
  if (u > kTableMax) return log_tail_inf_ == -kInf ? -kInf : b_.log_at(u);
  if (u < kTableMin) {
    if (b_.asymptotics(Endpoint::Zero).dominant_sign() < 0) return std::min(b_.log_at(u), table_.front());
    return table_.front();
  }
  return table_lookup(table_, u);
}

double InfEnvelope::operator()(double t) const {
  if (t <= 0.0) return at_zero_;
  return std::exp(log_at(std::log(t)));
}

bool InfEnvelope::is_constant(double rel_tol) const {
  if (b_.asymptotics(Endpoint::Infinity).dominant_sign() > 0) return false;
  if (b_.asymptotics(Endpoint::Zero).dominant_sign() < 0) return table_.back() == -kInf;
  return std::abs(table_.back() - table_.front()) <= rel_tol;
}

Weight target_weight_a(const SlowlyVarying& b, double q) {
  if (!(q > 1.0)) throw DomainError("target_weight_a: q must exceed 1");
  const double qc = conjugate(q);
  auto neg = [b, qc](double v) { return -qc * b.log_at(v); };
  const auto tail0 = quad::integrate_tail(neg, 0.0, 1);
  if (!tail0.converged || std::isinf(tail0.value)) {
    throw DomainError("target_weight_a: int_1^inf t^{-1} b^{-q'} diverges");
  }
  const double tail_at_zero = tail0.value;
  auto log_a = [b, qc, neg, tail_at_zero](double u) {
    double integral;
    if (u < 0.0) {
      integral = tail_at_zero + integrate_u(neg, u, 0.0, {});
    } else {
      integral = quad::integrate_tail(neg, u, 1).value;
    }
    return (1.0 - qc) * b.log_at(u) - std::log(integral);
  };
  return Weight(log_a, "a[" + b.label() + ",q=" + fmt_index(q) + "]");
}

Weight associate_weight_a(const SlowlyVarying& b, double q) {
  if (!(q >= 1.0) || std::isinf(q)) throw DomainError("associate_weight_a: q must be finite");
  auto pos = [b, q](double v) { return q * b.log_at(v); };
  const auto head0 = quad::integrate_tail(pos, 0.0, -1);
  if (!head0.converged || std::isinf(head0.value)) {
    throw DomainError("associate_weight_a: int_0^1 t^{-1} b^q diverges");
  }
  const double head_at_zero = head0.value;
  auto log_a = [b, q, pos, head_at_zero](double u) {
    double integral;
    if (u > 0.0) {
      integral = head_at_zero + integrate_u(pos, 0.0, u, {});
    } else {
      integral = quad::integrate_tail(pos, u, -1).value;
    }
    return (q - 1.0) * b.log_at(u) - std::log(integral);
  };
  return Weight(log_a, "a'[" + b.label() + ",q=" + fmt_index(q) + "]");
}

Weight sup_envelope(const SlowlyVarying& b) {
  auto table = std::make_shared<SupEnvelopeTable>(b);
  return Weight([table](double u) { return table->log_at(u); }, "sup[" + b.label() + "]");
}

SpaceDescription SpaceDescription::lk(double p, double q, Weight w, Variant v) {
  SpaceDescription s;
  s.kind = SpaceKind::LK;
  s.p = p;
  s.q = q;
  s.weight = std::move(w);
  s.variant = v;
  return s;
}

SpaceDescription SpaceDescription::nonexistent(std::string why) {
  SpaceDescription s;
  s.kind = SpaceKind::NonExistent;
  s.reason = std::move(why);
  return s;
}

std::string SpaceDescription::label() const {
  switch (kind) {
    case SpaceKind::LK: {
      if (std::isinf(p) && std::isinf(q) && weight.is_constant() && weight.log_at(0.0) == 0.0) {
        return "L^inf";
      }
      std::string s = "L^{";
      if (variant == Variant::DoubleStar) s += "(";
      s += fmt_index(p) + "," + fmt_index(q);
      if (!(weight.is_constant() && weight.log_at(0.0) == 0.0)) s += "," + weight.label();
      if (variant == Variant::DoubleStar) s += ")";
      return s + "}";
    }
    case SpaceKind::LambdaOne:
      return "Lambda^1(d'), d = inf_[t,inf) " + d->base().label();
    case SpaceKind::LambdaOneCapLinf:
      return "Lambda^1(d') cap L^inf, d = inf_[t,inf) " + d->base().label();
    case SpaceKind::ImplicitUm:
      return "U[" + implicit_of->label() + ", m/D=" + fmt_index(m_over_D) + "]";
    case SpaceKind::NonExistent:
      return "none (" + reason + ")";
  }
  return "";
}

SpaceDescription associate_space(const LKSpace& X) {
  const auto adm = is_admissible(X);
  if (!adm.admissible) return SpaceDescription::nonexistent("input not admissible: " + adm.case_label);
  const double qc = conjugate(X.q);
  if (X.p > 1.0 && std::isfinite(X.p)) {
    return SpaceDescription::lk(X.p / (X.p - 1.0), qc, X.b.inverse(), Variant::Star);
  }
  if (std::isinf(X.p) && std::isfinite(X.q)) {
    return SpaceDescription::lk(1.0, qc, associate_weight_a(X.b, X.q), Variant::DoubleStar);
  }
  if (std::isinf(X.p)) {
    auto table = std::make_shared<SupEnvelopeTable>(X.b);
    Weight inv([table](double u) { return -table->log_at(u); }, "1/sup[" + X.b.label() + "]");
    return SpaceDescription::lk(1.0, 1.0, inv, Variant::Star);
  }
  // p == 1
  return SpaceDescription::lk(kInf, qc, X.b.inverse(), Variant::DoubleStar);
}

double lambda1_norm(const StepFunction& f, const std::function<double(double)>& d) {
  const StepFunction s = rearrange(f);
  const auto b = s.breakpoints();
  const auto v = s.values();
  double total = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) total += v[i] * (d(b[i + 1]) - d(b[i]));
  return total;
}

double lambda1_norm(const StepFunction& f, const InfEnvelope& d) {
  return lambda1_norm(f, [&d](double t) { return d(t); });
}

double description_norm(const SpaceDescription& S, const StepFunction& f, const NormOptions& opt) {
  switch (S.kind) {
    case SpaceKind::LK: {
      const PiecewisePower g =
          S.variant == Variant::Star ? PiecewisePower::from_step(rearrange(f)) : maximal(f);
      return weighted_lq_norm(g, S.p, S.q, S.weight, opt);
    }
    case SpaceKind::LambdaOne:
      return lambda1_norm(f, *S.d);
    case SpaceKind::LambdaOneCapLinf:
      return lambda1_norm(f, *S.d) + f.sup();
    case SpaceKind::ImplicitUm: {
      const auto fs = PiecewisePower::from_step(rearrange(f));
      return lk_norm(tail_power_transform(fs, S.m_over_D - 1.0), *S.implicit_of, opt);
    }
    case SpaceKind::NonExistent:
      break;
  }
  throw NonExistentError("description_norm: space does not exist (" + S.reason + ")");
}

double associate_norm_lower_bound(const StepFunction& h, const LKSpace& X, int trials,
                                  std::uint64_t seed, const NormOptions& opt) {
  require_admissible(X);
  const StepFunction hs = rearrange(h);
  if (hs.cells() == 0) return 0.0;
  const double S = hs.support_measure();

  auto objective = [&](std::vector<double> s, const std::vector<double>& delta) {
    std::vector<std::pair<double, double>> steps;
    for (std::size_t j = 0; j < s.size(); ++j) {
      if (delta[j] > 0.0 && s[j] > 0.0) steps.emplace_back(s[j], delta[j]);
    }
    if (steps.empty()) return 0.0;
    std::sort(steps.begin(), steps.end());
    std::vector<double> br{0.0};
    std::vector<double> val;
    double acc = 0.0;
    for (const auto& st : steps) acc += st.second;
    double pairing = 0.0;
    for (const auto& st : steps) {
      if (st.first > br.back()) {
        br.push_back(st.first);
        val.push_back(acc);
      }
      acc -= st.second;
      pairing += st.second * hs.prefix_integral(st.first);
    }
    const double n = lk_norm(StepFunction(br, val), X, opt);
    return n > 0.0 && std::isfinite(n) ? pairing / n : 0.0;
  };

  double best = 0.0;
  // single steps at the breakpoints of h* are natural starting points
  for (double c : hs.breakpoints()) {
    if (c > 0.0) best = std::max(best, objective({c}, {1.0}));
  }
  for (int trial = 0; trial < trials; ++trial) {
    std::mt19937_64 rng(seed ^ (0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(trial + 1)));
    std::uniform_real_distribution<double> uu(std::log(S * 1e-4), std::log(S * 1e2));
    std::exponential_distribution<double> ex(1.0);
    const int J = 1 + static_cast<int>(rng() % 4);
    std::vector<double> s(J), delta(J);
    for (int j = 0; j < J; ++j) {
      s[j] = std::exp(uu(rng));
      delta[j] = ex(rng);
    }
    double cur = objective(s, delta);
    for (int pass = 0; pass < 3; ++pass) {
      for (int j = 0; j < J; ++j) {
        for (double fct : {0.5, 0.8, 1.25, 2.0}) {
          auto s2 = s;
          s2[j] *= fct;
          const double v = objective(s2, delta);
          if (v > cur) {
            cur = v;
            s = s2;
          }
        }
        for (double fct : {0.0, 0.5, 2.0}) {
          auto d2 = delta;
          d2[j] *= fct;
          const double v = objective(s, d2);
          if (v > cur) {
            cur = v;
            delta = d2;
          }
        }
      }
    }
    best = std::max(best, cur);
  }
  return best;
}

}  // namespace ri
