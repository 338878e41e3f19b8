#include <cmath>
#include <random>

#include "doctest.h"
#include "ri/error.hpp"
#include "ri/operators.hpp"

using ri::LKSpace;
using ri::MonomialCone;
using ri::RadialProfile;
using ri::SlowlyVarying;
using ri::SmoothnessParams;
using ri::StepFunction;

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

const StepFunction unit = StepFunction::indicator(0.0, 1.0);
const SmoothnessParams sp24{2, 4.0};

}  // namespace

TEST_CASE("smoothness parameters") {
  CHECK_THROWS_AS(SmoothnessParams({0, 3.0}).validate(), ri::DomainError);
  CHECK_THROWS_AS(SmoothnessParams({3, 3.0}).validate(), ri::DomainError);
  CHECK_NOTHROW(SmoothnessParams({3, 5.5}).validate());
}

TEST_CASE("reduction operator on the unit indicator") {
  const auto Rf = ri::reduction_op(unit, sp24);
  for (double t : {1e-6, 0.01, 0.3, 0.99}) CHECK(Rf(t) == doctest::Approx(2.0 * (1.0 - std::sqrt(t))));
  CHECK(Rf(2.0) == 0.0);
  const auto dual = ri::dual_reduction(unit, sp24);
  CHECK(dual(0.25) == doctest::Approx(0.5));
  CHECK(dual(4.0) == doctest::Approx(2.0 * 0.25));
}

TEST_CASE("Fubini identity") {
  const auto c = ri::fubini_check(unit, unit, sp24);
  CHECK(c.lhs == doctest::Approx(2.0 / 3.0));
  CHECK(c.rhs == doctest::Approx(2.0 / 3.0));
  std::mt19937_64 rng(11);
  for (int i = 0; i < 20; ++i) {
    const auto f = random_step(rng, 6), g = random_step(rng, 5);
    CHECK(ri::fubini_check(f, g, {1, 3.0}).rel_err < 1e-12);
    CHECK(ri::fubini_check(f, g, {3, 5.5}).rel_err < 1e-12);
  }
}

TEST_CASE("F_l values and bounds") {
  const auto F = ri::hardy_Fl(unit, 1, sp24);
  for (double t : {1e-4, 0.2, 0.7}) CHECK(F(t) == doctest::Approx(2.0 * (1.0 - std::sqrt(t))));
  CHECK(ri::hardy_Fl_linf_bound(1, sp24) == doctest::Approx(2.0));
  CHECK(ri::hardy_Fl_l1_bound(1, sp24) == doctest::Approx(2.0 / 3.0));
  CHECK(F.total_integral() == doctest::Approx(2.0 / 3.0));
  CHECK_THROWS_AS(ri::hardy_Fl(unit, 2, sp24), ri::DomainError);
  CHECK_THROWS_AS(ri::hardy_Fl(unit, 0, sp24), ri::DomainError);

  std::mt19937_64 rng(5);
  const SmoothnessParams sp{3, 5.5};
  for (int i = 0; i < 10; ++i) {
    const auto f = random_step(rng, 7);
    for (int l = 1; l <= 2; ++l) {
      const auto Ff = ri::hardy_Fl(f, l, sp);
      CHECK(Ff.sup() <= ri::hardy_Fl_linf_bound(l, sp) * f.sup() * (1 + 1e-9));
      CHECK(Ff.total_integral() <= ri::hardy_Fl_l1_bound(l, sp) * f.integral() * (1 + 1e-9));
    }
  }
}

TEST_CASE("level operator") {
  const auto T = ri::level_op(unit, sp24);
  CHECK(T(0.25) == doctest::Approx(2.0));
  CHECK(T(2.0) == 0.0);
  // a spike on the right dominates the left cell
  const StepFunction f({0.0, 1.0, 4.0}, {1.0, 0.9});
  const auto Tf = ri::level_op(f, sp24);
  CHECK(Tf(0.5) == doctest::Approx(0.9 * 2.0 / std::sqrt(0.5)));
  std::mt19937_64 rng(3);
  for (int i = 0; i < 10; ++i) {
    const auto g = random_step(rng, 6);
    const auto gs = ri::rearrange(g);
    const auto Tg = ri::level_op(g, sp24);
    for (double t = 0.05; t < 40.0; t *= 1.3) {
      CHECK(Tg(t) >= gs(t) * (1 - 1e-12));
      CHECK(std::sqrt(t) * Tg(t) >= std::sqrt(1.3 * t) * Tg(1.3 * t) * (1 - 1e-12));
    }
  }
}

TEST_CASE("kernel derivatives") {
  // m = 2, D = 4: g = 2 - 4 sqrt t + 2t on (0,1)
  CHECK(ri::kernel_g(unit, sp24, 0.25) == doctest::Approx(2.0 - 2.0 + 0.5));
  CHECK(ri::kernel_g_derivative(unit, sp24, 1, 0.25) == doctest::Approx(-4.0 + 2.0));
  CHECK(ri::kernel_g_derivative(unit, sp24, 2, 0.25) == doctest::Approx(8.0));
  CHECK_THROWS_AS(ri::kernel_g_derivative(unit, sp24, 3, 0.25), ri::DomainError);

  std::mt19937_64 rng(17);
  for (int m : {2, 3}) {
    const SmoothnessParams sp{m, 5.5};
    const auto f = random_step(rng, 5);
    for (int j = 1; j <= m; ++j) {
      for (double t = 0.07; t < 60.0; t *= 1.9) {
        const double h = 1e-4 * t;
        bool near_jump = false;
        for (double b : f.breakpoints()) near_jump |= std::abs(b - t) < 3 * h;
        if (near_jump) continue;
        const double fd = (ri::kernel_g_derivative(f, sp, j - 1, t + h) -
                           ri::kernel_g_derivative(f, sp, j - 1, t - h)) / (2 * h);
        const double ex = ri::kernel_g_derivative(f, sp, j, t);
        CHECK(std::abs(fd - ex) <= 1e-6 * std::max(1.0, std::abs(ex)));
      }
    }
  }
}

TEST_CASE("weighted Hardy condition") {
  // t^{1/2} t^{-1/2}: constant product
  const auto ok = ri::weighted_hardy_check({0.0, {}, 1.0}, {-1.0, {}, 1.0}, 2.0, 2.0);
  CHECK(ok.finite);
  CHECK(ok.sup_estimate == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(ok.windows_bounded);
  // critical tail norm diverges
  const auto bad = ri::weighted_hardy_check({0.0, {}, 1.0}, {-0.5, {}, 1.0}, 2.0, 2.0);
  CHECK_FALSE(bad.finite);
  // zero weight
  const auto zero = ri::weighted_hardy_check({0.0, {}, 1.0}, {-0.5, {}, 0.0}, 2.0, 2.0);
  CHECK(zero.finite);
  CHECK(zero.sup_estimate == 0.0);
  // mismatched powers blow up at one end
  const auto off = ri::weighted_hardy_check({0.1, {}, 1.0}, {-1.0, {}, 1.0}, 2.0, 2.0);
  CHECK_FALSE(off.finite);
  CHECK_FALSE(off.windows_bounded);
  // log factor on the tail weight, balanced by the inverse on u
  const auto lb = ri::weighted_hardy_check({0.0, SlowlyVarying::broken_log(1, -1.0, -1.0), 1.0},
                                           {-1.0, SlowlyVarying::broken_log(1, 1.0, 1.0), 1.0}, 2.0, 2.0);
  CHECK(lb.finite);
}

TEST_CASE("radial Polya-Szego") {
  const MonomialCone cone(3, 1, {1.0});
  RadialProfile g{{0.0, 0.5, 1.5, 3.0}, {2.0, 1.6, 0.4, 0.0}};
  const double c = ri::default_c_iso(cone);
  for (double S : {0.01, 0.4, 1.0, 2.5, 5.0}) {
    CHECK(ri::ps_prefix_t(g, cone, c, S) == doctest::Approx(ri::ps_prefix_r(g, cone, S)).epsilon(1e-10));
  }
  // full mass equals int phi over the support
  double total = 0.0;
  const double D = cone.D(), gam = (D - 1) / D;
  for (int i = 0; i < 3; ++i) {
    const double s = (g.values[i] - g.values[i + 1]) / (g.knots[i + 1] - g.knots[i]);
    total += c * s * (std::pow(g.knots[i + 1], gam + 1) - std::pow(g.knots[i], gam + 1)) / (gam + 1);
  }
  CHECK(ri::ps_prefix_t(g, cone, c, 10.0) == doctest::Approx(total).epsilon(1e-12));
  const auto r = ri::polya_szego_radial(g, cone, LKSpace::lebesgue(2.0), c);
  CHECK(r.prefix_max_rel_err < 1e-10);
  CHECK(r.lhs == doctest::Approx(r.rhs).epsilon(1e-8));
  CHECK_THROWS_AS(ri::RadialProfile({{0.0, 1.0, 2.0}, {1.0, 1.5, 0.0}}).validate(), ri::DomainError);
}
