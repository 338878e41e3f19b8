#include "ri/optimal.hpp"

#include <cmath>

#include "ri/error.hpp"

namespace ri {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool same_index(double x, double y) {
  if (std::isinf(x) || std::isinf(y)) return x == y;
  return std::abs(x - y) <= 1e-12 * std::max(std::abs(x), std::abs(y));
}

double conjugate(double q) {
  if (q == 1.0) return kInf;
  if (std::isinf(q)) return 1.0;
  return q / (q - 1.0);
}

void require_admissible(const LKSpace& X) {
  const auto a = is_admissible(X);
  if (!a.admissible) throw DomainError("space " + X.label() + " is not admissible: " + a.case_label);
}

double critical_target(const SmoothnessParams& sp) { return sp.D / sp.m; }
double critical_domain(const SmoothnessParams& sp) { return sp.D / (sp.D - sp.m); }

// Ratio constant on the base grid and its relative drift on the refined grid.
template <class Stats>
void attach_ratios(OptimalityReport& r, const EquivalenceOptions& eo, Stats&& stats) {
  if (!eo.ratios) return;
  const RatioStats base = stats(eo.norm);
  NormOptions fine = eo.norm;
  fine.grid = eo.norm.grid.refined(eo.refine);
  const RatioStats refined = stats(fine);
  r.ratio_min = base.min;
  r.ratio_max = base.max;
  r.grid_refinement_drift = std::abs(refined.constant() - base.constant()) / base.constant();
}

StepFunction permuted(const StepFunction& fs, std::mt19937_64& rng) {
  std::vector<std::size_t> idx(fs.cells());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::shuffle(idx.begin(), idx.end(), rng);
  std::vector<double> b{0.0}, v;
  for (std::size_t i : idx) {
    b.push_back(b.back() + fs.cell_length(i));
    v.push_back(fs.values()[i]);
  }
  return StepFunction(std::move(b), std::move(v));
}

}  // namespace

double RatioStats::constant() const { return std::max(max, 1.0 / min); }

StepFunction random_nonincreasing(std::mt19937_64& rng, int cells) {
  std::uniform_real_distribution<double> lu(std::log(1e-3), std::log(1e3));
  std::exponential_distribution<double> gap(1.0);
  std::vector<double> b{0.0};
  std::vector<double> inner;
  for (int i = 0; i < cells; ++i) inner.push_back(std::exp(lu(rng)));
  std::sort(inner.begin(), inner.end());
  inner.erase(std::unique(inner.begin(), inner.end()), inner.end());
  b.insert(b.end(), inner.begin(), inner.end());
  std::vector<double> v(b.size() - 1);
  double level = 0.0;
  for (std::size_t i = v.size(); i-- > 0;) {
    level += gap(rng);
    v[i] = level;
  }
  return StepFunction(std::move(b), std::move(v));
}

double description_norm(const SpaceDescription& S, const PiecewisePower& h, const NormOptions& opt) {
  if (S.kind != SpaceKind::LK) {
    throw DomainError("description_norm: piecewise power input needs an LK description");
  }
  if (h.is_zero()) return 0.0;
  // Lebesgue-type norms need no rearrangement
  if (S.variant == Variant::Star && std::isfinite(S.q) && same_index(S.p, S.q) && S.weight.is_constant()) {
    return weighted_lq_norm(h, S.p, S.q, S.weight, opt);
  }
  return lk_norm(h, S.p, S.q, S.weight, S.variant, opt);
}

bool target_condition(const LKSpace& X, const SmoothnessParams& sp) {
  sp.validate();
  require_admissible(X);
  const double pc = critical_target(sp);
  if (same_index(X.p, pc)) {
    // || t^{-1/q'} b^{-1} ||_{L^{q'}(1,inf)} < inf
    const double qc = conjugate(X.q);
    const LogExponents e = X.b.asymptotics(Endpoint::Infinity).scaled(-1.0);
    return std::isinf(qc) ? power_log_bounded(0.0, e, Endpoint::Infinity)
                          : power_log_integrable(-1.0, e.scaled(qc), Endpoint::Infinity);
  }
  return X.p < pc;
}

bool domain_condition(const LKSpace& Y, const SmoothnessParams& sp) {
  sp.validate();
  require_admissible(Y);
  if (std::isinf(Y.p)) return true;
  const double pd = critical_domain(sp);
  // t^{1-m/D} / phi_Y(t) is equivalent to t^{1-m/D-1/p} / b(t)
  if (same_index(Y.p, pd)) return power_log_bounded(0.0, Y.b.asymptotics(Endpoint::Infinity), Endpoint::Infinity);
  return Y.p > pd;
}

double zm_norm(const StepFunction& v, const LKSpace& X, const SmoothnessParams& sp, const NormOptions& opt) {
  if (!target_condition(X, sp)) {
    throw NonExistentError("zm_norm: t^{m/D-1} chi_(1,inf) is not in the associate of " + X.label());
  }
  if (v.is_zero()) return 0.0;
  return description_norm(associate_space(X), dual_reduction(v, sp), opt);
}

UmValue um_norm(const StepFunction& f, const LKSpace& Y, const SmoothnessParams& sp, const NormOptions& opt,
                int rearrangements, std::uint64_t seed) {
  if (!domain_condition(Y, sp)) {
    throw NonExistentError("um_norm: no domain space exists for " + Y.label());
  }
  const double pd = critical_domain(sp);
  UmValue r;
  r.exact_form = Y.p > pd * (1.0 + 1e-12) ||
                 (same_index(Y.p, pd) && Y.q == 1.0 && Y.b.equivalent_to_nonincreasing());
  const StepFunction fs = rearrange(f);
  if (fs.is_zero()) return r;
  auto value = [&](const StepFunction& v) {
    return lk_norm(tail_power_transform(PiecewisePower::from_step(v), sp.a() - 1.0), Y, opt);
  };
  r.value = value(fs);
  if (!r.exact_form) {
    std::mt19937_64 rng(seed);
    for (int i = 0; i < rearrangements; ++i) r.value = std::max(r.value, value(permuted(fs, rng)));
  }
  return r;
}

OptimalityReport optimal_target(const LKSpace& X, const SmoothnessParams& sp, const EquivalenceOptions& eo) {
  OptimalityReport r;
  r.input = X.label();
  r.condition = "t^{m/D-1} chi_(1,inf) in X'";
  r.verdict = target_condition(X, sp);
  if (!r.verdict) {
    r.output = SpaceDescription::nonexistent("target condition fails, no r.i. target space exists");
    r.case_label = "nonexistent";
    r.flags.push_back("nonexistent");
    return r;
  }
  const double pc = critical_target(sp);
  const double qc = conjugate(X.q);
  if (!same_index(X.p, pc)) {
    const double tp = sp.D * X.p / (sp.D - sp.m * X.p);
    const LKSpace T{tp, X.q, X.b, Variant::Star};
    r.output = SpaceDescription::lk(tp, X.q, X.b, Variant::Star);
    r.case_label = "p < D/m";
    const SpaceDescription dual = associate_space(T);
    attach_ratios(r, eo, [&](const NormOptions& o) {
      return ratio_stats([&](const StepFunction& f) { return zm_norm(f, X, sp, o); },
                         [&](const StepFunction& f) { return ri::description_norm(dual, f, o); },
                         eo.family_size, eo.seed);
    });
    return r;
  }
  r.flags.push_back("boundary p = D/m");
  if (X.q > 1.0) {
    r.output = SpaceDescription::lk(kInf, X.q, target_weight_a(X.b, X.q), Variant::Star);
    r.case_label = "p = D/m, q > 1";
  } else {
    auto d = std::make_shared<const InfEnvelope>(X.b);
    if (d->is_constant()) {
      r.output = SpaceDescription::lk(kInf, kInf, Weight(), Variant::Star);
      r.case_label = "p = D/m, q = 1, d constant";
      r.flags.push_back("degenerate d' = 0");
    } else {
      r.output.kind = d->at_zero() > 0.0 ? SpaceKind::LambdaOneCapLinf : SpaceKind::LambdaOne;
      r.output.d = d;
      r.case_label = d->at_zero() > 0.0 ? "p = D/m, q = 1, d(0+) > 0" : "p = D/m, q = 1, d(0+) = 0";
    }
  }
  // the associate of the target is L^{(1,q',1/b)}
  const SpaceDescription dual = SpaceDescription::lk(1.0, qc, X.b.inverse(), Variant::DoubleStar);
  attach_ratios(r, eo, [&](const NormOptions& o) {
    return ratio_stats([&](const StepFunction& f) { return zm_norm(f, X, sp, o); },
                       [&](const StepFunction& f) { return ri::description_norm(dual, f, o); },
                       eo.family_size, eo.seed);
  });
  return r;
}

OptimalityReport optimal_domain(const LKSpace& Y, const SmoothnessParams& sp, const EquivalenceOptions& eo) {
  OptimalityReport r;
  r.input = Y.label();
  r.condition = "inf_{t>=1} t^{1-m/D} / phi_Y(t) > 0";
  r.verdict = domain_condition(Y, sp);
  const double pd = critical_domain(sp);
  if (!r.verdict) {
    r.output = SpaceDescription::nonexistent("domain condition fails, no r.i. domain space exists");
    r.case_label = "nonexistent";
    r.flags.push_back("nonexistent");
    if (same_index(Y.p, pd)) r.flags.push_back("boundary p = D/(D-m), b not equivalent to nonincreasing on (1,inf)");
    return r;
  }
  auto um = [&](const NormOptions& o) {
    return [&, o](const StepFunction& f) { return um_norm(f, Y, sp, o, 32, eo.seed).value; };
  };
  if (std::isinf(Y.p)) {
    r.output.kind = SpaceKind::ImplicitUm;
    r.output.implicit_of = Y;
    r.output.m_over_D = sp.a();
    r.case_label = "p = inf";
    const bool linf = std::isinf(Y.q) && Y.b.is_trivial() && Y.b.constant() == 1.0;
    if (linf) {
      const LKSpace L = LKSpace::lorentz(critical_target(sp), 1.0);
      attach_ratios(r, eo, [&](const NormOptions& o) {
        return ratio_stats(um(o), [&](const StepFunction& f) { return lk_norm(f, L, o); }, eo.family_size,
                           eo.seed);
      });
    } else {
      r.flags.push_back("no closed form for comparison");
    }
    return r;
  }
  if (!same_index(Y.p, pd)) {
    const double dp = sp.D * Y.p / (sp.D + sp.m * Y.p);
    const LKSpace U{dp, Y.q, Y.b, Variant::Star};
    r.output = SpaceDescription::lk(dp, Y.q, Y.b, Variant::Star);
    r.case_label = "p in (D/(D-m), inf)";
    attach_ratios(r, eo, [&](const NormOptions& o) {
      return ratio_stats(um(o), [&](const StepFunction& f) { return lk_norm(f, U, o); }, eo.family_size, eo.seed);
    });
    return r;
  }
  r.flags.push_back("boundary p = D/(D-m)");
  if (Y.q == 1.0 && Y.b.equivalent_to_nonincreasing()) {
    const LKSpace U{1.0, 1.0, Y.b, Variant::Star};
    r.output = SpaceDescription::lk(1.0, 1.0, Y.b, Variant::Star);
    r.case_label = "p = D/(D-m), q = 1, b equivalent to nonincreasing";
    attach_ratios(r, eo, [&](const NormOptions& o) {
      return ratio_stats(um(o), [&](const StepFunction& f) { return lk_norm(f, U, o); }, eo.family_size, eo.seed);
    });
    return r;
  }
  r.output.kind = SpaceKind::ImplicitUm;
  r.output.implicit_of = Y;
  r.output.m_over_D = sp.a();
  r.case_label = "p = D/(D-m), implicit";
  r.flags.push_back("level operator unbounded on Y', norm values are lower bounds");
  return r;
}

EmbeddingWitness embedding_witness(const LKSpace& target, const LKSpace& candidate, const NormOptions& opt) {
  if (!std::isfinite(target.p)) throw DomainError("embedding_witness: target index must be finite");
  const double e = -1.0 / target.p;
  EmbeddingWitness best;
  for (const char* window : {"zero", "infinity"}) {
    std::vector<double> ratios;
    for (int k = 1; k <= 8; ++k) {
      const double N = std::pow(10.0, 4.0 * k);
      // nonincreasing from 0: flat cap followed by the power
      PiecewisePower g = std::string(window) == "zero"
                             ? PiecewisePower({{0.0, 1.0 / N, {{std::pow(N, -e), 0.0}}}, {1.0 / N, 1.0, {{1.0, e}}}})
                             : PiecewisePower({{0.0, 1.0, {{1.0, 0.0}}}, {1.0, N, {{1.0, e}}}});
      ratios.push_back(lk_norm(g, candidate, opt) / lk_norm(g, target, opt));
    }
    bool increasing = true;
    for (std::size_t i = 0; i + 1 < ratios.size(); ++i) increasing &= ratios[i + 1] >= ratios[i] * (1 - 1e-9);
    const bool found = increasing && ratios.back() >= 2.0 * ratios.front();
    if (found || (!best.found && ratios.back() / ratios.front() > best.ratio_last / std::max(best.ratio_first, 1e-300))) {
      best = {found, window, ratios.front(), ratios.back()};
    }
    if (found) break;
  }
  return best;
}

double iteration_check(const StepFunction& v, const LKSpace& X, const SmoothnessParams& sp, const NormOptions& opt) {
  sp.validate();
  if (sp.m < 2) throw DomainError("iteration_check: needs m >= 2");
  if (v.is_zero()) return 1.0;
  const double den = zm_norm(v, X, sp, opt);
  const PiecewisePower inner = maximal(v).times_power(1.0, 1.0 / sp.D);
  const PiecewisePower outer = maximal(rearrange(inner, opt.grid)).times_power(1.0, (sp.m - 1) / sp.D);
  return description_norm(associate_space(X), outer, opt) / den;
}

}  // namespace ri
