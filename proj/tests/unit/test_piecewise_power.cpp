#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "ri/error.hpp"
#include "ri/piecewise_power.hpp"

using ri::PiecewisePower;
using ri::PowerPiece;
using ri::StepFunction;

namespace {

// midpoint rule in log t between the given cuts, used only as an independent oracle
template <class F>
double log_midpoint(F f, double a, double b, std::vector<double> cuts = {}, int n = 20000) {
  cuts.push_back(a);
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  double s = 0.0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double lo = std::max(a, cuts[k]), hi = std::min(b, cuts[k + 1]);
    if (hi <= lo) continue;
    const double la = std::log(lo), lb = std::log(hi);
    const double h = (lb - la) / n;
    for (int i = 0; i < n; ++i) {
      const double t = std::exp(la + (i + 0.5) * h);
      s += f(t) * t * h;
    }
  }
  return s;
}

}  // namespace

TEST_CASE("evaluation and integrals") {
  PiecewisePower p({PowerPiece{0.0, 1.0, {{4.0, 0.0}, {-4.0, 0.25}}}});
  CHECK(p(0.5) == doctest::Approx(4.0 * (1 - std::pow(0.5, 0.25))));
  CHECK(p(2.0) == 0.0);
  CHECK(std::exp(p.log_at(std::log(0.5))) == doctest::Approx(p(0.5)).epsilon(1e-14));
  // int_0^1 4(1 - t^{1/4}) = 4 - 16/5
  CHECK(p.total_integral() == doctest::Approx(0.8).epsilon(1e-14));

  auto q = PiecewisePower::power(2.0, -2.0, 1.0, INFINITY);
  CHECK(q.total_integral() == doctest::Approx(2.0));
  CHECK(q.integral(2.0, 4.0) == doctest::Approx(0.5));
  CHECK(std::isinf(PiecewisePower::power(1.0, -0.5, 1.0, INFINITY).total_integral()));
  CHECK(PiecewisePower::power(1.0, -1.0, 1.0, std::exp(2.0)).total_integral() == doctest::Approx(2.0));
}

TEST_CASE("products and sums") {
  auto a = PiecewisePower::from_step(StepFunction::unit_cells({1, 2, 3}));
  auto b = PiecewisePower::power(1.0, 1.0, 0.5, 2.5);
  auto c = a * b;
  for (double t : {0.2, 0.7, 1.4, 2.2, 2.7}) CHECK(c(t) == doctest::Approx(a(t) * b(t)));
  auto s = a + b;
  for (double t : {0.2, 0.7, 1.4, 2.2, 2.7, 5.0}) CHECK(s(t) == doctest::Approx(a(t) + b(t)));
  CHECK(c.total_integral() == doctest::Approx(log_midpoint([&](double t) { return a(t) * b(t); }, 1e-3, 3.0, {0.5, 1, 2, 2.5})).epsilon(1e-6));
}

TEST_CASE("maximal of nonincreasing power functions") {
  auto m = ri::tail_power_transform(PiecewisePower::from_step(StepFunction::unit_cells({3, 2, 1})), -0.5);
  auto mm = ri::maximal(m);
  for (double t : {0.3, 1.0, 2.5, 7.0}) {
    const double ref = log_midpoint([&](double x) { return m(x); }, 1e-14, t, {1, 2, 3}) / t;
    CHECK(mm(t) == doctest::Approx(ref).epsilon(1e-6));
  }
  auto inc = PiecewisePower::power(1.0, 1.0, 0.0, 1.0);
  CHECK_FALSE(inc.is_nonincreasing());
  CHECK_THROWS_AS(ri::maximal(inc), ri::DomainError);
  CHECK(m.is_nonincreasing());
}

TEST_CASE("tail transform") {
  auto f = PiecewisePower::from_step(StepFunction::indicator(0, 1));
  auto r = ri::tail_power_transform(f, -0.75);
  for (double t : {0.01, 0.5, 0.99}) CHECK(r(t) == doctest::Approx(4.0 * (1 - std::pow(t, 0.25))));
  CHECK(r(1.5) == 0.0);

  auto g = PiecewisePower::from_step(StepFunction({0.5, 1.0, 3.0, 4.0}, {2.0, 0.0, 1.0}));
  auto rg = ri::tail_power_transform(g, -0.5);
  for (double t : {0.1, 0.7, 2.0, 3.5}) {
    const double ref = log_midpoint([&](double x) { return g(x) * std::pow(x, -0.5); }, t, 5.0, {0.5, 1, 3, 4});
    CHECK(rg(t) == doctest::Approx(ref).epsilon(1e-6));
  }
  CHECK_THROWS_AS(ri::tail_power_transform(f, -1.0), ri::DomainError);
}

TEST_CASE("rearrangement of a non-monotone power function") {
  // h = t^{1/4} v** for v = chi_(0,1): increasing on (0,1), t^{-3/4} beyond
  auto h = ri::maximal(StepFunction::indicator(0, 1)).times_power(1.0, 0.25);
  CHECK_FALSE(h.is_nonincreasing());
  ri::GeometricGrid grid{1e-8, 1e8, 64};
  auto hs = ri::rearrange(h, grid);
  CHECK(hs.is_nonincreasing());
  CHECK(hs.integral(0.0, 1e6) == doctest::Approx(h.integral(0.0, 1e6)).epsilon(1e-6));
  // distribution function agrees up to one cell
  for (double level : {0.9, 0.5, 0.1, 0.01}) {
    const double exact = std::pow(level, -4.0 / 3.0) - std::pow(level, 4.0);
    double lo = 0.0, hi = 1e12;
    for (int i = 0; i < 200; ++i) {
      const double mid = 0.5 * (lo + hi);
      (hs(mid) > level ? lo : hi) = mid;
    }
    CHECK(lo == doctest::Approx(exact).epsilon(0.05));
  }
}
