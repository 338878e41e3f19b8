#include "ri/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <limits>
#include <random>
#include <stdexcept>
#include <thread>

#include "ri/error.hpp"
#include "ri/optimal.hpp"

namespace ri {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr const char* kVersion = "0.1.0";

struct TaskOut {
  std::vector<CaseRecord> rows;
  json detail;
};
using Task = std::function<TaskOut()>;

CaseRecord row(std::string id, const json& inputs, std::string metric, double value, double tol, bool pass,
               std::string note = {}) {
  return {std::move(id), inputs, std::move(metric), value, tol, pass, std::move(note)};
}

// value <= tol; nan fails
CaseRecord at_most(std::string id, const json& inputs, std::string metric, double value, double tol) {
  return row(std::move(id), inputs, std::move(metric), value, tol, value <= tol);
}

std::string indexed(const char* prefix, std::size_t i) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%s-%03zu", prefix, i);
  return buf;
}

double conjugate(double q) {
  if (q == 1.0) return kInf;
  if (std::isinf(q)) return 1.0;
  return q / (q - 1.0);
}

LKSpace star(double p, double q, SlowlyVarying b = {}) { return {p, q, std::move(b), Variant::Star}; }
LKSpace dstar(double p, double q, SlowlyVarying b = {}) { return {p, q, std::move(b), Variant::DoubleStar}; }

std::vector<LKSpace> default_spaces() {
  const SlowlyVarying l11 = SlowlyVarying::broken_log(1, 1.0, 1.0);
  return {LKSpace::lebesgue(1.0), LKSpace::lebesgue(2.0), star(kInf, kInf),
          star(2.0, 1.0),         dstar(2.0, 4.0),        star(3.0, 2.0, l11)};
}

const std::vector<LKSpace>& spaces_or_default(const CampaignConfig& cfg, const std::vector<LKSpace>& fallback) {
  return cfg.spaces.empty() ? fallback : cfg.spaces;
}

bool is_lebesgue(const LKSpace& X) {
  return X.variant == Variant::Star && X.p == X.q && X.b.is_trivial();
}

// positive cells on log-uniform breakpoints in [e^-4, ...), a fraction of them zero
StepFunction random_step(std::mt19937_64& rng, int cells, double zero_prob) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> b{std::exp(-4.0 + 4.0 * u(rng))};
  std::vector<double> v;
  for (int i = 0; i < cells; ++i) {
    b.push_back(b.back() * (1.1 + 3.0 * u(rng)));
    v.push_back(u(rng) < zero_prob ? 0.0 : 0.2 + 3.0 * u(rng));
  }
  return StepFunction(b, v);
}

// int f g over merged breakpoints
double pairing(const StepFunction& f, const StepFunction& g) {
  std::vector<double> cuts(f.breakpoints().begin(), f.breakpoints().end());
  cuts.insert(cuts.end(), g.breakpoints().begin(), g.breakpoints().end());
  std::sort(cuts.begin(), cuts.end());
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double a = cuts[i], b = cuts[i + 1];
    if (b > a) s += f(0.5 * (a + b)) * g(0.5 * (a + b)) * (b - a);
  }
  return s;
}

// averages of g* over pairs of cells, shuffled: HLP-below g
StepFunction hlp_below(const StepFunction& g, std::mt19937_64& rng) {
  const StepFunction gs = rearrange(g);
  std::vector<double> len, val;
  for (std::size_t i = 0; i < gs.cells(); i += 2) {
    const std::size_t j = std::min(i + 1, gs.cells() - 1);
    double l = 0.0, mass = 0.0;
    for (std::size_t k = i; k <= j; ++k) {
      l += gs.cell_length(k);
      mass += gs.cell_length(k) * gs.values()[k];
    }
    len.push_back(l);
    val.push_back(mass / l);
  }
  std::vector<std::size_t> idx(len.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::shuffle(idx.begin(), idx.end(), rng);
  std::vector<double> b{0.5}, v;
  for (std::size_t i : idx) {
    b.push_back(b.back() + len[i]);
    v.push_back(val[i]);
  }
  return StepFunction(b, v);
}

RadialProfile random_profile(std::mt19937_64& rng) {
  std::exponential_distribution<double> gap(1.0);
  const int n = 2 + static_cast<int>(rng() % 5);
  RadialProfile g;
  g.knots = {0.0};
  for (int i = 0; i < n; ++i) g.knots.push_back(g.knots.back() + 0.1 + gap(rng));
  g.values.assign(n + 1, 0.0);
  for (int i = n - 1; i >= 0; --i) g.values[i] = g.values[i + 1] + (i % 3 == 1 ? 0.0 : gap(rng));
  return g;
}

double c_iso_of(const CampaignConfig& cfg) { return cfg.c_iso ? *cfg.c_iso : default_c_iso(cfg.cone); }

json c_iso_json(const CampaignConfig& cfg) {
  return {{"value", c_iso_of(cfg)},
          {"source", cfg.c_iso ? "config" : "external: default D*B_mu^(1/D), not known to be sharp"}};
}

// campaigns

std::vector<Task> bmu_validation(const CampaignConfig& cfg) {
  std::vector<Task> tasks;
  const MonomialCone cone = cfg.cone;
  const json in = cone_to_json(cone);
  tasks.push_back([=] {
    const auto mc = ball_measure_mc(cone, cfg.samples, case_seed(cfg.seed, 0));
    const double z = std::abs(mc.estimate - cone.B_mu()) / mc.stderr_;
    TaskOut o;
    o.rows.push_back(at_most("ball-measure", in, "closed_vs_mc_stderr", z, 3.0));
    o.detail = {{"closed_form", cone.B_mu()},
                {"mc_estimate", mc.estimate},
                {"mc_stderr", mc.stderr_},
                {"samples", cfg.samples}};
    return o;
  });
  const std::int64_t sub = std::max<std::int64_t>(10000, cfg.samples / 10);
  for (int i = 0; i < 20; ++i) {
    tasks.push_back([=] {
      std::mt19937_64 rng(case_seed(cfg.seed, 1 + i));
      std::uniform_real_distribution<double> u(0.0, 1.0);
      const double a = 3.0 * u(rng);
      const double b = a + 0.1 + 2.0 * u(rng);
      json inputs = in;
      inputs["interval"] = {a, b};
      const auto mc = sigma_preimage_measure_mc(cone, a, b, sub, rng());
      TaskOut o;
      o.rows.push_back(
          at_most(indexed("pushforward", i), inputs, "pushforward_stderr", std::abs(mc.estimate - (b - a)) / mc.stderr_, 3.0));
      return o;
    });
  }
  tasks.push_back([=] {
    std::mt19937_64 rng(case_seed(cfg.seed, 21));
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::normal_distribution<double> z(0.0, 1.0);
    double worst = 0.0, unit_err = 0.0;
    std::vector<double> x(cone.n()), sx(cone.n());
    for (int k = 0; k < 100; ++k) {
      double r2 = 0.0;
      for (int i = 0; i < cone.n(); ++i) {
        x[i] = i < cone.k() ? std::abs(z(rng)) : z(rng);
        r2 += x[i] * x[i];
      }
      const double s = std::exp(-3.0 + 6.0 * u(rng));
      for (int i = 0; i < cone.n(); ++i) sx[i] = s * x[i];
      const double w = weight_eval(cone, x);
      const double ws = std::pow(s, cone.alpha()) * w;
      worst = std::max(worst, std::abs(weight_eval(cone, sx) - ws) / ws);
      for (int i = 0; i < cone.n(); ++i) sx[i] = x[i] / std::sqrt(r2);
      unit_err = std::max(unit_err, std::abs(sigma_map(cone, sx) - cone.B_mu()) / cone.B_mu());
    }
    TaskOut o;
    o.rows.push_back(at_most("homogeneity", in, "weight_homogeneity_rel_err", worst, 1e-12));
    o.rows.push_back(at_most("sigma-unit-sphere", in, "sigma_rel_err", unit_err, 1e-12));
    return o;
  });
  return tasks;
}

std::vector<Task> rearrangement_laws(const CampaignConfig& cfg) {
  std::vector<Task> tasks;
  const auto spaces = spaces_or_default(cfg, default_spaces());
  NormOptions opt;
  opt.grid = cfg.grid;
  for (int i = 0; i < cfg.family_size; ++i) {
    tasks.push_back([=] {
      std::mt19937_64 rng(case_seed(cfg.seed, i));
      const StepFunction f = random_step(rng, 8, 0.2);
      const StepFunction g = random_step(rng, 7, 0.2);
      const StepFunction fs = rearrange(f);
      const json in = {{"f", step_to_json(f)}, {"g", step_to_json(g)}};
      const std::string id = indexed("pair", i);
      double equi = 0.0;
      for (double v : f.values()) {
        for (double level : {0.0, 0.5 * v, v, v * (1 + 1e-9)}) {
          const double a = f.distribution(level), b = fs.distribution(level);
          equi = std::max(equi, std::abs(a - b) / std::max(1.0, a));
        }
      }
      double lp = 0.0;
      for (double p : {1.0, 2.0, kInf}) lp = std::max(lp, std::abs(f.lp_norm(p) - fs.lp_norm(p)) / fs.lp_norm(p));
      const double hl = pairing(f, g) / pairing(fs, rearrange(g)) - 1.0;
      const StepFunction h = hlp_below(g, rng);
      double order = -kInf;
      for (const auto& X : spaces) order = std::max(order, lk_norm(h, X, opt) / lk_norm(g, X, opt) - 1.0);
      TaskOut o;
      o.rows.push_back(at_most(id, in, "equimeasurability_err", equi, 1e-12));
      o.rows.push_back(at_most(id, in, "lp_preservation_rel_err", lp, 1e-12));
      o.rows.push_back(at_most(id, in, "hardy_littlewood_excess", hl, 1e-12));
      o.rows.push_back(row(id, in, "hlp_order", hlp_compare(h, g) ? 1.0 : 0.0, 1.0, hlp_compare(h, g)));
      o.rows.push_back(at_most(id, in, "lk_norm_order_excess", order, 1e-9));
      return o;
    });
  }
  return tasks;
}

std::vector<Task> polya_szego(const CampaignConfig& cfg) {
  std::vector<Task> tasks;
  const auto spaces = spaces_or_default(cfg, default_spaces());
  const double c = c_iso_of(cfg);
  const double c0 = default_c_iso(cfg.cone);
  NormOptions opt;
  opt.grid = cfg.grid;
  for (int i = 0; i < cfg.family_size; ++i) {
    tasks.push_back([=] {
      std::mt19937_64 rng(case_seed(cfg.seed, i));
      const RadialProfile g = random_profile(rng);
      const json prof = {{"knots", g.knots}, {"values", g.values}};
      const std::string id = indexed("profile", i);
      TaskOut o;
      const auto base = polya_szego_radial(g, cfg.cone, spaces.front(), c0, opt);
      o.rows.push_back(at_most(id, prof, "prefix_rel_err", base.prefix_max_rel_err, 1e-10));
      for (const auto& X : spaces) {
        const auto r = polya_szego_radial(g, cfg.cone, X, c, opt);
        json in = prof;
        in["space"] = space_to_json(X);
        o.rows.push_back(at_most(id + ":" + X.label(), in, "ps_lhs_minus_rhs_rel", (r.lhs - r.rhs) / r.rhs, 1e-9));
      }
      return o;
    });
  }
  return tasks;
}

std::vector<Task> reduction_duality(const CampaignConfig& cfg) {
  std::vector<Task> tasks;
  const SmoothnessParams sp = cfg.sp();
  for (int i = 0; i < cfg.family_size; ++i) {
    tasks.push_back([=] {
      std::mt19937_64 rng(case_seed(cfg.seed, i));
      const StepFunction f = random_step(rng, 7, 0.2);
      const StepFunction g = random_step(rng, 6, 0.2);
      TaskOut o;
      o.rows.push_back(at_most(indexed("pair", i), {{"f", step_to_json(f)}, {"g", step_to_json(g)}},
                               "fubini_rel_err", fubini_check(f, g, sp).rel_err, 1e-12));
      return o;
    });
  }
  return tasks;
}

std::vector<Task> tcn_derivatives(const CampaignConfig& cfg) {
  std::vector<Task> tasks;
  const SmoothnessParams sp = cfg.sp();
  for (int i = 0; i < cfg.family_size; ++i) {
    tasks.push_back([=] {
      std::mt19937_64 rng(case_seed(cfg.seed, i));
      const StepFunction f = random_step(rng, 6, 0.0);
      const auto b = f.breakpoints();
      // g^{(j)} vanishes to order m-j at the end of the support, so keep away from it
      std::uniform_real_distribution<double> lu(std::log(b.front()), std::log(b.back() / 1.1));
      TaskOut o;
      for (int j = 1; j <= sp.m; ++j) {
        double worst = 0.0;
        for (int taken = 0; taken < 10;) {
          const double t = std::exp(lu(rng));
          bool near = false;
          for (double x : b) near |= std::abs(x - t) < 1e-3 * t;
          if (near) continue;
          const double h = 1e-4 * t;
          const double fd =
              (kernel_g_derivative(f, sp, j - 1, t + h) - kernel_g_derivative(f, sp, j - 1, t - h)) / (2 * h);
          const double ex = kernel_g_derivative(f, sp, j, t);
          worst = std::max(worst, std::abs(fd - ex) / std::abs(ex));
          ++taken;
        }
        o.rows.push_back(at_most(indexed("function", i) + ":j=" + std::to_string(j),
                                 {{"f", step_to_json(f)}, {"j", j}}, "fd_rel_err", worst, 1e-6));
      }
      return o;
    });
  }
  return tasks;
}

std::vector<Task> hardy_conditions(const CampaignConfig& cfg) {
  std::vector<Task> tasks;
  const SmoothnessParams sp = cfg.sp();
  const SlowlyVarying l11 = SlowlyVarying::broken_log(1, 1.0, 1.0);
  const std::vector<LKSpace> fallback = {LKSpace::lebesgue(1.0), LKSpace::lebesgue(2.5), star(kInf, kInf),
                                         dstar(2.0, 1.0), dstar(3.0, 2.0, l11)};
  const auto spaces = spaces_or_default(cfg, fallback);
  std::vector<LKSpace> dil;
  for (const auto& X : spaces) {
    if (is_lebesgue(X) || X.variant == Variant::DoubleStar) dil.push_back(X);
  }
  NormOptions opt;
  opt.grid = cfg.grid;
  for (int i = 0; i < cfg.family_size; ++i) {
    tasks.push_back([=] {
      std::mt19937_64 rng(case_seed(cfg.seed, i));
      const StepFunction f = random_step(rng, 7, 0.2);
      const json in = {{"f", step_to_json(f)}};
      const std::string id = indexed("function", i);
      TaskOut o;
      for (int l = 1; cfg.uses("Fl") && l < sp.m; ++l) {
        const auto F = hardy_Fl(f, l, sp);
        const std::string lid = id + ":l=" + std::to_string(l);
        o.rows.push_back(at_most(lid, in, "Fl_linf_ratio", F.sup() / (hardy_Fl_linf_bound(l, sp) * f.sup()), 1.0 + 1e-9));
        o.rows.push_back(
            at_most(lid, in, "Fl_l1_ratio", F.total_integral() / (hardy_Fl_l1_bound(l, sp) * f.integral()), 1.0 + 1e-9));
      }
      if (cfg.uses("Tlevel")) {
        const auto fs = rearrange(f);
        const auto T = level_op(f, sp);
        double below = 0.0, rising = 0.0;
        for (double t = 1e-3; t < 1e3; t *= 1.07) {
          if (fs(t) > 0.0) below = std::max(below, (fs(t) - T(t)) / fs(t));
          const double here = std::pow(t, sp.a()) * T(t);
          if (here > 0.0) rising = std::max(rising, (std::pow(1.07 * t, sp.a()) * T(1.07 * t) - here) / here);
        }
        o.rows.push_back(at_most(id, in, "level_op_below_rearrangement", below, 1e-12));
        o.rows.push_back(at_most(id, in, "level_sup_increase", rising, 1e-12));
      }
      if (!dil.empty()) {
        double worst = 0.0;
        for (double alpha : {0.1, 0.5, 2.0, 10.0}) {
          const auto Df = dilation(f, alpha);
          for (const auto& X : dil) {
            worst = std::max(worst, lk_norm(Df, X, opt) / (std::max(1.0, 1.0 / alpha) * lk_norm(f, X, opt)));
          }
        }
        o.rows.push_back(at_most(id, in, "dilation_ratio", worst, 1.0 + 1e-9));
      }
      return o;
    });
  }
  // weighted Hardy conditions behind the optimal-space formulas
  const double D = sp.D, a = sp.a();
  for (std::size_t s = 0; s < spaces.size(); ++s) {
    const LKSpace X = spaces[s];
    const double p = X.p, q = X.q, qc = conjugate(q);
    const double iq = std::isinf(q) ? 0.0 : 1.0 / q;
    const bool subcritical = p > 1.0 && p < 1.0 / a;
    const bool supercritical = std::isfinite(p) && p > D / (D - sp.m);
    if (!subcritical && !supercritical) continue;
    tasks.push_back([=] {
      TaskOut o;
      json in = {{"space", space_to_json(X)}};
      HardyCheck h;
      std::string metric;
      if (subcritical) {
        metric = "target_hardy_sup";
        h = weighted_hardy_check({iq - 1.0 / p, X.b.inverse(), 1.0}, {1.0 / p - iq - 1.0, X.b, 1.0}, q, qc);
      } else {
        metric = "domain_hardy_sup";
        h = weighted_hardy_check({1.0 / p - iq, X.b, 1.0}, {iq - 1.0 / p - 1.0, X.b.inverse(), 1.0}, qc, q);
      }
      o.rows.push_back(row(indexed("space", s) + ":" + X.label(), in, metric, h.sup_estimate, kInf,
                           h.finite && h.windows_bounded, "symbolic and windowed supremum must be finite"));
      return o;
    });
  }
  // control: a pair whose supremum is infinite
  tasks.push_back([] {
    TaskOut o;
    const auto h = weighted_hardy_check({0.0, {}, 1.0}, {-0.5, {}, 1.0}, 2.0, 2.0);
    o.rows.push_back(row("control-divergent", {{"u_exponent", 0.0}, {"v_exponent", -0.5}, {"q", 2.0}},
                         "control_hardy_finite", h.finite ? 1.0 : 0.0, 0.0, !h.finite,
                         "the symbolic test must report divergence"));
    return o;
  });
  return tasks;
}

std::vector<Task> optimal_equiv(const CampaignConfig& cfg, bool target) {
  std::vector<Task> tasks;
  const SmoothnessParams sp = cfg.sp();
  for (std::size_t s = 0; s < cfg.spaces.size(); ++s) {
    const LKSpace X = cfg.spaces[s];
    tasks.push_back([=] {
      EquivalenceOptions eo;
      eo.family_size = cfg.family_size;
      eo.seed = case_seed(cfg.seed, s);
      eo.norm.grid = cfg.grid;
      const OptimalityReport r = target ? optimal_target(X, sp, eo) : optimal_domain(X, sp, eo);
      const json in = {{"space", space_to_json(X)}, {"m", sp.m}, {"D", sp.D}};
      const std::string id = indexed("space", s) + ":" + X.label();
      TaskOut o;
      const bool consistent = r.verdict || (r.output.kind == SpaceKind::NonExistent && !r.ratio_min);
      o.rows.push_back(row(id, in, "condition_verdict", r.verdict ? 1.0 : 0.0, kNaN, consistent,
                           r.case_label.empty() ? r.output.label() : r.case_label));
      if (r.ratio_min) {
        o.rows.push_back(row(id, in, "ratio_min", *r.ratio_min, 0.0, *r.ratio_min > 0.0 && std::isfinite(*r.ratio_min)));
        o.rows.push_back(row(id, in, "ratio_max", *r.ratio_max, kInf, std::isfinite(*r.ratio_max) && *r.ratio_max > 0.0));
      }
      if (r.grid_refinement_drift) {
        o.rows.push_back(at_most(id, in, "grid_refinement_drift", *r.grid_refinement_drift, 0.1));
      }
      // a strictly smaller LK candidate must fail the embedding
      const Weight& w = r.output.weight;
      if (target && r.output.kind == SpaceKind::LK && std::isfinite(r.output.p) && w.slowly_varying()) {
        LKSpace Z{r.output.p, r.output.q, *w.slowly_varying(), r.output.variant};
        LKSpace smaller = Z;
        if (Z.q > 1.0) {
          smaller.q = 1.0;
        } else {
          smaller.b = Z.b * SlowlyVarying::broken_log(1, 1.0, 1.0);
        }
        const auto wit = embedding_witness(Z, smaller, eo.norm);
        json win = in;
        win["candidate"] = space_to_json(smaller);
        o.rows.push_back(row(id, win, "embedding_witness_growth", wit.ratio_last / wit.ratio_first, 2.0, wit.found,
                             wit.found ? "window " + wit.window : "no witness"));
      }
      o.detail = report_to_json(r);
      return o;
    });
  }
  return tasks;
}

std::vector<Task> iteration_campaign(const CampaignConfig& cfg) {
  std::vector<Task> tasks;
  const SmoothnessParams sp = cfg.sp();
  const std::vector<LKSpace> fallback = {LKSpace::lebesgue(1.0), LKSpace::lebesgue(0.5 * (1.0 + 1.0 / sp.a()))};
  const auto spaces = spaces_or_default(cfg, fallback);
  NormOptions opt;
  opt.grid = cfg.grid;
  for (std::size_t s = 0; s < spaces.size(); ++s) {
    const LKSpace X = spaces[s];
    tasks.push_back([=] {
      std::mt19937_64 rng(case_seed(cfg.seed, s));
      TaskOut o;
      RatioStats st{kInf, 0.0};
      for (int i = 0; i < cfg.family_size; ++i) {
        const StepFunction v = random_nonincreasing(rng);
        const double r = iteration_check(v, X, sp, opt);
        st.min = std::min(st.min, r);
        st.max = std::max(st.max, r);
      }
      const json in = {{"space", space_to_json(X)}, {"m", sp.m}, {"D", sp.D}, {"family_size", cfg.family_size}};
      const std::string id = indexed("space", s) + ":" + X.label();
      o.rows.push_back(row(id, in, "iteration_ratio_min", st.min, 0.0, st.min > 0.0 && std::isfinite(st.min)));
      o.rows.push_back(row(id, in, "iteration_ratio_max", st.max, kInf, std::isfinite(st.max)));
      return o;
    });
  }
  return tasks;
}

std::vector<Task> build_tasks(const CampaignConfig& cfg) {
  const std::string& c = cfg.campaign;
  if (c == "bmu_validation") return bmu_validation(cfg);
  if (c == "rearrangement_laws") return rearrangement_laws(cfg);
  if (c == "polya_szego") return polya_szego(cfg);
  if (c == "reduction_duality") return reduction_duality(cfg);
  if (c == "tcn_derivatives") return tcn_derivatives(cfg);
  if (c == "hardy_conditions") return hardy_conditions(cfg);
  if (c == "optimal_target_equiv") return optimal_equiv(cfg, true);
  if (c == "optimal_domain_equiv") return optimal_equiv(cfg, false);
  if (c == "iteration_check") return iteration_campaign(cfg);
  throw ConfigError("campaign", "unknown campaign \"" + c + "\"");
}

std::string json_number_text(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

}  // namespace

const std::vector<std::string>& campaign_names() {
  static const std::vector<std::string> names = {
      "bmu_validation",   "rearrangement_laws",   "polya_szego",          "reduction_duality", "tcn_derivatives",
      "hardy_conditions", "optimal_target_equiv", "optimal_domain_equiv", "iteration_check"};
  return names;
}

const std::vector<std::string>& operator_names() {
  static const std::vector<std::string> names = {"R", "Tstar", "Fl", "Tlevel", "kernel_g"};
  return names;
}

bool CampaignConfig::uses(const std::string& op) const {
  return operators.empty() || std::find(operators.begin(), operators.end(), op) != operators.end();
}

CampaignConfig parse_config(const json& j) {
  if (!j.is_object()) throw ConfigError("$", "config must be a JSON object");
  CampaignConfig cfg;
  if (!j.contains("campaign") || !j["campaign"].is_string()) throw ConfigError("campaign", "missing campaign name");
  cfg.campaign = j["campaign"].get<std::string>();
  const auto& names = campaign_names();
  if (std::find(names.begin(), names.end(), cfg.campaign) == names.end()) {
    throw ConfigError("campaign", "unknown campaign \"" + cfg.campaign + "\"");
  }
  if (!j.contains("cone")) throw ConfigError("cone", "missing field");
  cfg.cone = cone_from_json(j["cone"], "cone");
  if (j.contains("m")) {
    if (!j["m"].is_number_integer() || j["m"].get<int>() < 1) throw ConfigError("m", "expected a positive integer");
    cfg.m = j["m"].get<int>();
  }
  if (!(cfg.m < cfg.cone.D())) throw ConfigError("m", "m must be smaller than D = " + json_number_text(cfg.cone.D()));
  if (cfg.campaign == "iteration_check" && cfg.m < 2) throw ConfigError("m", "iteration_check needs m >= 2");
  if (j.contains("spaces")) {
    const json& s = j["spaces"];
    if (!s.is_array()) throw ConfigError("spaces", "expected an array");
    for (std::size_t i = 0; i < s.size(); ++i) cfg.spaces.push_back(space_from_json(s[i], "spaces[" + std::to_string(i) + "]"));
  }
  if (j.contains("operators")) {
    const json& ops = j["operators"];
    if (!ops.is_array()) throw ConfigError("operators", "expected an array");
    const auto& known = operator_names();
    for (std::size_t i = 0; i < ops.size(); ++i) {
      const std::string path = "operators[" + std::to_string(i) + "]";
      if (!ops[i].is_string() || std::find(known.begin(), known.end(), ops[i].get<std::string>()) == known.end()) {
        throw ConfigError(path, "expected one of R, Tstar, Fl, Tlevel, kernel_g");
      }
      cfg.operators.push_back(ops[i].get<std::string>());
    }
  }
  if ((cfg.campaign == "optimal_target_equiv" || cfg.campaign == "optimal_domain_equiv") && cfg.spaces.empty()) {
    throw ConfigError("spaces", "at least one space is required for " + cfg.campaign);
  }
  if (j.contains("family_size")) {
    if (!j["family_size"].is_number_integer() || j["family_size"].get<int>() < 1) {
      throw ConfigError("family_size", "expected a positive integer");
    }
    cfg.family_size = j["family_size"].get<int>();
  }
  if (j.contains("seed")) {
    const json& s = j["seed"];
    if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<std::int64_t>() >= 0)) {
      throw ConfigError("seed", "expected a nonnegative integer");
    }
    cfg.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("grid")) cfg.grid = grid_from_json(j["grid"], "grid");
  if (j.contains("c_iso")) {
    if (!j["c_iso"].is_number() || !(j["c_iso"].get<double>() > 0.0)) throw ConfigError("c_iso", "expected a positive number");
    cfg.c_iso = j["c_iso"].get<double>();
  }
  if (j.contains("samples")) {
    if (!j["samples"].is_number_integer() || j["samples"].get<std::int64_t>() < 100) {
      throw ConfigError("samples", "expected an integer >= 100");
    }
    cfg.samples = j["samples"].get<std::int64_t>();
  }
  if (j.contains("output")) {
    const json& o = j["output"];
    if (!o.is_object()) throw ConfigError("output", "expected an object");
    if (o.contains("json")) {
      if (!o["json"].is_string()) throw ConfigError("output.json", "expected a path");
      cfg.output_json = o["json"].get<std::string>();
    }
    if (o.contains("csv")) {
      if (!o["csv"].is_string()) throw ConfigError("output.csv", "expected a path");
      cfg.output_csv = o["csv"].get<std::string>();
    }
  }
  return cfg;
}

CampaignConfig load_config(const std::string& path) { return parse_config(read_json_file(path)); }

std::size_t Report::failed() const {
  return static_cast<std::size_t>(std::count_if(cases.begin(), cases.end(), [](const CaseRecord& c) { return !c.pass; }));
}

std::uint64_t case_seed(std::uint64_t seed, std::uint64_t index) {
  // splitmix64 step
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

int worker_count() {
  if (const char* env = std::getenv("RI_TOOLKIT_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

Report run_campaign(const CampaignConfig& cfg, int threads) {
  const std::vector<Task> tasks = build_tasks(cfg);
  std::vector<TaskOut> out(tasks.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      try {
        out[i] = tasks[i]();
      } catch (const std::exception& e) {
        out[i].rows = {row(indexed("task", i), json::object(), "error", kNaN, kNaN, false, e.what())};
      }
    }
  };
  const int n = std::min<int>(threads > 0 ? threads : worker_count(), std::max<std::size_t>(1, tasks.size()));
  std::vector<std::thread> pool;
  for (int t = 1; t < n; ++t) pool.emplace_back(work);
  work();
  for (auto& th : pool) th.join();

  Report r;
  r.campaign = cfg.campaign;
  r.seed = cfg.seed;
  const SmoothnessParams sp = cfg.sp();
  json cone = cone_to_json(cfg.cone);
  cone["B_mu"] = cfg.cone.B_mu();
  r.environment = {{"toolkit", "ri-toolkit"}, {"version", kVersion},  {"cone", cone},
                   {"m", sp.m},               {"D", sp.D},            {"grid", grid_to_json(cfg.grid)},
                   {"family_size", cfg.family_size}, {"c_iso", c_iso_json(cfg)}};
  if (!cfg.operators.empty()) r.environment["operators"] = cfg.operators;
  json details = json::array();
  for (auto& o : out) {
    for (auto& c : o.rows) r.cases.push_back(std::move(c));
    if (!o.detail.is_null()) details.push_back(std::move(o.detail));
  }
  if (cfg.campaign == "bmu_validation") {
    r.details["cone_measure"] = details.empty() ? json(nullptr) : details[0];
  } else if (!details.empty()) {
    r.details["optimality_reports"] = details;
  }
  return r;
}

json report_to_json(const Report& r) {
  json cases = json::array();
  for (const auto& c : r.cases) {
    json e = {{"case_id", c.case_id},   {"input_hash", input_hash(c.inputs)}, {"inputs", c.inputs},
              {"metric", c.metric},     {"value", number_to_json(c.value)},   {"tolerance", number_to_json(c.tolerance)},
              {"pass", c.pass}};
    if (!c.note.empty()) e["note"] = c.note;
    cases.push_back(std::move(e));
  }
  const std::size_t failed = r.failed();
  return {{"campaign", r.campaign},
          {"seed", r.seed},
          {"environment", r.environment},
          {"summary", {{"cases", r.cases.size()}, {"passed", r.cases.size() - failed}, {"failed", failed}}},
          {"cases", cases},
          {"details", r.details}};
}

std::string report_to_csv(const Report& r) {
  std::string s = "campaign,case_id,input_hash,metric,value,tolerance,pass\n";
  for (const auto& c : r.cases) {
    s += csv_field(r.campaign) + ',' + csv_field(c.case_id) + ',' + input_hash(c.inputs) + ',' + csv_field(c.metric) +
         ',' + json_number_text(c.value) + ',' + json_number_text(c.tolerance) + ',' + (c.pass ? "true" : "false") + '\n';
  }
  return s;
}

void emit_report(const Report& r, ReportFormat format, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write report to " + path);
  if (format == ReportFormat::Csv) {
    out << report_to_csv(r);
  } else {
    out << report_to_json(r).dump(2) << '\n';
  }
  if (!out) throw std::runtime_error("cannot write report to " + path);
}

}  // namespace ri
