#include <cmath>
#include <random>

#include "doctest.h"
#include "ri/error.hpp"
#include "ri/piecewise_power.hpp"
#include "ri/step_function.hpp"

using ri::StepFunction;

namespace {

StepFunction random_step(std::mt19937_64& rng, int cells) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> b{0.05 + u(rng)};
  std::vector<double> v;
  for (int i = 0; i < cells; ++i) {
    b.push_back(b.back() + 0.1 + 2.0 * u(rng));
    v.push_back(u(rng) < 0.2 ? 0.0 : 3.0 * u(rng));
  }
  return StepFunction(b, v);
}

}  // namespace

TEST_CASE("grid") {
  ri::GeometricGrid g;
  CHECK(g.cells() == 16 * 64);
  auto b = g.breakpoints();
  CHECK(b.front() == 1e-8);
  CHECK(b.back() == 1e8);
  CHECK(b[64] == doctest::Approx(1e-7).epsilon(1e-12));
  CHECK_THROWS_AS((ri::GeometricGrid{1.0, 0.5, 4}.validate()), ri::DomainError);
}

TEST_CASE("rearrangement examples") {
  auto r = ri::rearrange(StepFunction::indicator(2, 3));
  REQUIRE(r.cells() == 1);
  CHECK(r.breakpoints()[0] == 0.0);
  CHECK(r.breakpoints()[1] == 1.0);
  CHECK(r.values()[0] == 1.0);

  auto s = ri::rearrange(StepFunction::unit_cells({1, 3, 2}));
  REQUIRE(s.cells() == 3);
  CHECK(s.values()[0] == 3.0);
  CHECK(s.values()[1] == 2.0);
  CHECK(s.values()[2] == 1.0);
  CHECK(s.breakpoints()[3] == 3.0);
  CHECK(s.is_nonincreasing());

  auto f = StepFunction({0.0, 1.0, 4.0}, {5.0, 2.0});
  auto fr = ri::rearrange(f);
  CHECK(fr.values()[0] == 5.0);
  CHECK(fr.breakpoints()[2] == 4.0);
  CHECK(ri::rearrange(StepFunction()).cells() == 0);
}

TEST_CASE("equimeasurability and norm preservation") {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 50; ++trial) {
    auto f = random_step(rng, 12);
    auto fs = ri::rearrange(f);
    for (double v : f.values()) {
      CHECK(fs.distribution(v) == doctest::Approx(f.distribution(v)).epsilon(1e-12));
      CHECK(fs.distribution(0.5 * v) == doctest::Approx(f.distribution(0.5 * v)).epsilon(1e-12));
    }
    CHECK(fs.lp_norm(1) == doctest::Approx(f.lp_norm(1)).epsilon(1e-13));
    CHECK(fs.lp_norm(2) == doctest::Approx(f.lp_norm(2)).epsilon(1e-13));
    CHECK(fs.lp_norm(INFINITY) == f.lp_norm(INFINITY));
  }
}

TEST_CASE("maximal function") {
  auto m = ri::maximal(StepFunction::indicator(0, 1));
  CHECK(m(0.5) == doctest::Approx(1.0));
  CHECK(m(4.0) == doctest::Approx(0.25));
  auto c = ri::maximal(StepFunction::indicator(0, 3, 2.5));
  CHECK(c(3.0 - 1e-12) == doctest::Approx(2.5));
  auto two = ri::maximal(StepFunction::unit_cells({2, 1}));
  CHECK(two(2.0) == doctest::Approx(1.5));
  CHECK(two(1.5) == doctest::Approx((2.0 + 0.5) / 1.5));

  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    auto f = random_step(rng, 8);
    auto fs = ri::rearrange(f);
    auto ms = ri::maximal(f);
    for (double t : {0.01, 0.3, 1.0, 2.7, 9.0, 40.0}) {
      CHECK(ms(t) == doctest::Approx(fs.prefix_integral(t) / t).epsilon(1e-12));
      CHECK(ms(t) >= fs(t) * (1 - 1e-14));
    }
  }
}

TEST_CASE("power integral") {
  CHECK(ri::power_integral(StepFunction::indicator(0, 1), -0.75, 0, 1) == doctest::Approx(4.0));
  CHECK(ri::power_integral(StepFunction::indicator(1, std::exp(1.0)), -1.0, 0, INFINITY) ==
        doctest::Approx(1.0));
  CHECK(ri::power_integral(StepFunction(), 2.0, 0, 1) == 0.0);
  CHECK_THROWS_AS(ri::power_integral(StepFunction::indicator(0, 1), -1.0, 0, 1), ri::DomainError);
  CHECK(ri::power_integral(StepFunction::indicator(0, 2), 1.0, 1, 5) == doctest::Approx(1.5));
}

TEST_CASE("dilation and hlp") {
  auto d = ri::dilation(StepFunction::indicator(0, 1), 2.0);
  CHECK(d.breakpoints()[1] == 0.5);
  std::mt19937_64 rng(4);
  auto f = random_step(rng, 5);
  CHECK(ri::dilation(f, 2.0).integral() == doctest::Approx(0.5 * f.integral()));

  auto chi = StepFunction::indicator(0, 1);
  CHECK(ri::hlp_compare(chi, chi));
  CHECK(ri::hlp_compare(chi, chi.scaled(2)));
  CHECK_FALSE(ri::hlp_compare(chi.scaled(2), chi));
  CHECK_FALSE(ri::hlp_compare(StepFunction::unit_cells({3, 0}), StepFunction::unit_cells({2, 2})));
}
