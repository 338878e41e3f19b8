#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "ri/error.hpp"
#include "ri/lk_spaces.hpp"

using ri::LKSpace;
using ri::SlowlyVarying;
using ri::StepFunction;
using ri::Variant;

namespace {

StepFunction random_step(std::mt19937_64& rng, int cells) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> b{std::exp(-3.0 + 3.0 * u(rng))};
  std::vector<double> v;
  for (int i = 0; i < cells; ++i) {
    b.push_back(b.back() * (1.2 + 3.0 * u(rng)));
    v.push_back(u(rng) < 0.2 ? 0.0 : 3.0 * u(rng));
  }
  return StepFunction(b, v);
}

// int f g for two step functions, by merging breakpoints
double pairing(const StepFunction& f, const StepFunction& g) {
  std::vector<double> cuts(f.breakpoints().begin(), f.breakpoints().end());
  cuts.insert(cuts.end(), g.breakpoints().begin(), g.breakpoints().end());
  std::sort(cuts.begin(), cuts.end());
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double m = 0.5 * (cuts[i] + cuts[i + 1]);
    s += f(m) * g(m) * (cuts[i + 1] - cuts[i]);
  }
  return s;
}

LKSpace space(double p, double q, SlowlyVarying b = {}, Variant v = Variant::Star) {
  return {p, q, std::move(b), v};
}

}  // namespace

TEST_CASE("norm examples") {
  const auto chi = StepFunction::indicator(0, 1);
  CHECK(ri::lk_norm(chi, LKSpace::lebesgue(3)) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(ri::lk_norm(chi, LKSpace::lorentz(2, 1)) == doctest::Approx(2.0).epsilon(1e-12));
  auto h = ri::PiecewisePower::power(1.0, -0.5, 0.0, 1.0);
  CHECK(ri::lk_norm(h, LKSpace::lorentz(2, INFINITY)) == doctest::Approx(1.0).epsilon(1e-9));
  // int_0^inf (1+s)^2 e^{-s} ds = 5
  CHECK(ri::lk_norm(chi, space(2, 2, SlowlyVarying::broken_log(1, 1, 1))) ==
        doctest::Approx(std::sqrt(5.0)).epsilon(1e-9));
  // f** = 1 on (0,1), 1/t beyond
  CHECK(ri::lk_norm(chi, space(2, 2, {}, Variant::DoubleStar)) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-10));
  CHECK(ri::lk_norm(StepFunction(), LKSpace::lebesgue(2)) == 0.0);
  CHECK(ri::lk_norm(chi, LKSpace::lebesgue(INFINITY)) == doctest::Approx(1.0));
}

TEST_CASE("admissibility lists") {
  auto a = ri::is_admissible(space(2, 3));
  CHECK(a.admissible);
  CHECK(a.case_label == "p in (1,inf)");
  CHECK_FALSE(ri::is_admissible(space(1, 1, SlowlyVarying::broken_log(1, 0, 1))).admissible);
  CHECK(ri::is_admissible(space(INFINITY, 1, SlowlyVarying::broken_log(1, -2, 0))).admissible);
  CHECK_FALSE(ri::is_admissible(space(INFINITY, 1)).admissible);
  CHECK(ri::is_admissible(space(INFINITY, INFINITY)).admissible);
  CHECK_FALSE(ri::is_admissible(space(1, 2)).admissible);
  // doublestar p = 1 needs ||t^{-1/q} b||_{L^q(1,inf)} < inf
  CHECK_FALSE(ri::is_admissible(space(1, 1, {}, Variant::DoubleStar)).admissible);
  CHECK(ri::is_admissible(space(1, 1, SlowlyVarying::broken_log(1, 0, -2), Variant::DoubleStar)).admissible);
  CHECK_THROWS_AS(ri::lk_norm(StepFunction::indicator(0, 1), space(1, 2)), ri::DomainError);
}

TEST_CASE("window growth agrees with the symbolic tests") {
  auto conv = ri::window_norms(SlowlyVarying::broken_log(1, -2, 0), 1, ri::Endpoint::Zero);
  CHECK(ri::windows_converge(conv, 1));
  auto div = ri::window_norms(SlowlyVarying::one(), 1, ri::Endpoint::Zero);
  CHECK_FALSE(ri::windows_converge(div, 1));
  auto div2 = ri::window_norms(SlowlyVarying::broken_log(1, 0, -0.5), 2, ri::Endpoint::Infinity);
  CHECK_FALSE(ri::windows_converge(div2, 2));
  CHECK(ri::windows_converge(ri::window_norms(SlowlyVarying::broken_log(1, 0, -1), INFINITY, ri::Endpoint::Infinity), INFINITY));
  CHECK_FALSE(ri::windows_converge(ri::window_norms(SlowlyVarying::broken_log(1, 0, 0.5), INFINITY, ri::Endpoint::Infinity), INFINITY));
}

TEST_CASE("fundamental function") {
  for (double t : {0.01, 1.0, 30.0}) {
    CHECK(ri::fundamental_function(LKSpace::lorentz(3, 2), t) ==
          doctest::Approx(std::pow(1.5, 0.5) * std::pow(t, 1.0 / 3)).epsilon(1e-10));
    CHECK(ri::fundamental_function(LKSpace::lebesgue(INFINITY), t) == doctest::Approx(1.0));
    CHECK(ri::fundamental_function(LKSpace::lebesgue(1), t) == doctest::Approx(t));
  }
  const LKSpace X = space(2.5, 3, SlowlyVarying::broken_log(1, 1, -0.5));
  double prev = 0.0, prev_ratio = INFINITY;
  for (double t = 1e-4; t < 1e4; t *= 3.0) {
    const double phi = ri::fundamental_function(X, t);
    CHECK(phi >= prev);
    CHECK(phi / t <= prev_ratio * (1 + 1e-9));
    prev = phi;
    prev_ratio = phi / t;
  }
}

TEST_CASE("associate spaces") {
  auto s = ri::associate_space(LKSpace::lebesgue(2));
  CHECK(s.label() == "L^{2,2}");
  auto b = SlowlyVarying::broken_log(1, 1, 0.5);
  auto s2 = ri::associate_space(space(4, 2, b));
  CHECK(s2.kind == ri::SpaceKind::LK);
  CHECK(s2.p == doctest::Approx(4.0 / 3));
  CHECK(s2.q == 2.0);
  CHECK(s2.weight(5.0) == doctest::Approx(1.0 / b(5.0)));
  auto s3 = ri::associate_space(space(INFINITY, INFINITY));
  CHECK(s3.p == 1.0);
  CHECK(s3.q == 1.0);
  CHECK(s3.weight(0.3) == doctest::Approx(1.0));
  CHECK(s3.weight(300.0) == doctest::Approx(1.0));
  // p = inf, q < inf: a = (int_0^t tau^{-1} b^q)^{-1} b^{q-1}; b = l1^{(-2,0)}, q = 1 gives
  // int_0^t = 1/(1 + log(1/t)) for t < 1, so a(t) = l1(t) b^0 = 1 + log(1/t)
  auto s4 = ri::associate_space(space(INFINITY, 1, SlowlyVarying::broken_log(1, -2, 0)));
  CHECK(s4.variant == Variant::DoubleStar);
  CHECK(s4.weight(0.01) == doctest::Approx(1.0 + std::log(100.0)).epsilon(1e-8));
}

TEST_CASE("hoelder with the closed-form associate") {
  std::mt19937_64 rng(5);
  const std::vector<LKSpace> spaces{space(2, 2), space(3, 1.5), space(1.5, 4, SlowlyVarying::broken_log(1, 1, 1)),
                                    space(4, INFINITY), space(2, 1, SlowlyVarying::broken_log(1, -0.5, 0.5))};
  for (const auto& X : spaces) {
    const auto Xp = ri::associate_space(X);
    for (int i = 0; i < 20; ++i) {
      auto f = random_step(rng, 6);
      auto g = random_step(rng, 6);
      const double lhs = pairing(f, g);
      CHECK(lhs <= ri::lk_norm(f, X) * ri::description_norm(Xp, g) * (1 + 1e-9));
    }
  }
}

TEST_CASE("lattice, triangle and star/doublestar equivalence") {
  std::mt19937_64 rng(6);
  const LKSpace X = space(2.5, 2, SlowlyVarying::broken_log(1, 0.5, -0.5), Variant::DoubleStar);
  LKSpace Xs = X;
  Xs.variant = Variant::Star;
  double rmax = 0.0;
  for (int i = 0; i < 30; ++i) {
    auto f = random_step(rng, 6);
    std::vector<double> v(f.values().begin(), f.values().end());
    for (double& x : v) x *= 0.7;
    StepFunction g(std::vector<double>(f.breakpoints().begin(), f.breakpoints().end()), v);
    CHECK(ri::lk_norm(g, X) <= ri::lk_norm(f, X));
    auto h = random_step(rng, 6);
    // f + h on merged cells
    std::vector<double> cuts(f.breakpoints().begin(), f.breakpoints().end());
    cuts.insert(cuts.end(), h.breakpoints().begin(), h.breakpoints().end());
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    std::vector<double> sv;
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
      const double m = 0.5 * (cuts[k] + cuts[k + 1]);
      sv.push_back(f(m) + h(m));
    }
    StepFunction sum(cuts, sv);
    CHECK(ri::lk_norm(sum, X) <= (ri::lk_norm(f, X) + ri::lk_norm(h, X)) * (1 + 1e-8));
    const double r = ri::lk_norm(f, X) / ri::lk_norm(f, Xs);
    CHECK(r >= 1.0 - 1e-12);
    rmax = std::max(rmax, r);
  }
  CHECK(rmax < 10.0);
}

TEST_CASE("envelopes and lambda^1") {
  CHECK(ri::lambda1_norm(StepFunction::indicator(0, 2), [](double t) { return std::min(t, 1.0); }) ==
        doctest::Approx(1.0));
  CHECK(ri::lambda1_norm(StepFunction(), [](double t) { return t; }) == 0.0);
  ri::InfEnvelope flat(SlowlyVarying::broken_log(1, 1, 0));
  CHECK(flat.is_constant());
  CHECK(flat.at_zero() == doctest::Approx(1.0));
  CHECK(ri::lambda1_norm(StepFunction::unit_cells({3, 1}), flat) == doctest::Approx(0.0).epsilon(1e-12));
  ri::InfEnvelope rising(SlowlyVarying::broken_log(1, -1, 0));
  CHECK_FALSE(rising.is_constant());
  CHECK(rising.at_zero() == 0.0);
  CHECK(rising(0.1) == doctest::Approx(1.0 / (1.0 + std::log(10.0))).epsilon(1e-6));
  // d = b here, so Lambda^1 of chi_(0,s) is b(s)
  CHECK(ri::lambda1_norm(StepFunction::indicator(0, 0.1), rising) ==
        doctest::Approx(1.0 / (1.0 + std::log(10.0))).epsilon(1e-6));
  // b = l1^{(1,-1)}: d(t) = inf over [t,inf) is 0 since b -> 0
  ri::InfEnvelope zero(SlowlyVarying::broken_log(1, 1, -1));
  CHECK(zero(5.0) == 0.0);
}

TEST_CASE("target weight a") {
  // b = l1^{(0,beta)}, q' = 2: a = (beta q' - 1) l1^{beta-1} exactly for t >= 1
  const double beta = 2.0;
  auto a = ri::target_weight_a(SlowlyVarying::broken_log(1, 0, beta), 2.0);
  for (double t : {std::exp(1.0), std::exp(2.0), std::exp(4.0)}) {
    CHECK(a(t) == doctest::Approx(3.0 * (1.0 + std::log(t))).epsilon(1e-8));
  }
  CHECK_THROWS_AS(ri::target_weight_a(SlowlyVarying::one(), 2.0), ri::DomainError);
}

TEST_CASE("associate norm lower bound") {
  const auto chi = StepFunction::indicator(0, 1);
  const double l1 = ri::associate_norm_lower_bound(chi, LKSpace::lebesgue(1), 10, 1);
  CHECK(l1 == doctest::Approx(1.0).epsilon(1e-9));
  const double l2 = ri::associate_norm_lower_bound(chi, LKSpace::lebesgue(2), 10, 1);
  CHECK(l2 == doctest::Approx(1.0).epsilon(1e-9));
  std::mt19937_64 rng(9);
  for (int i = 0; i < 5; ++i) {
    auto h = ri::rearrange(random_step(rng, 5));
    double exact = 0.0;  // sup_s int_0^s h* / (2 sqrt s), attained at a breakpoint
    for (double s : h.breakpoints()) {
      if (s > 0) exact = std::max(exact, h.prefix_integral(s) / (2 * std::sqrt(s)));
    }
    const double lb = ri::associate_norm_lower_bound(h, LKSpace::lorentz(2, 1), 8, 3 + i);
    CHECK(lb <= exact * (1 + 1e-9));
    CHECK(lb >= 0.95 * exact);
  }
}
