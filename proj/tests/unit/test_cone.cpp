#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "ri/cone.hpp"
#include "ri/error.hpp"

using ri::MonomialCone;

TEST_CASE("weight is the monomial and homogeneous") {
  MonomialCone c(2, 2, {1.0, 1.0});
  const double x[] = {2.0, 3.0};
  CHECK(ri::weight_eval(c, x) == doctest::Approx(6.0));
  const double z[] = {0.0, 3.0};
  CHECK(ri::weight_eval(c, z) == 0.0);
  const double y[] = {2.0, 2.0};
  CHECK(ri::weight_eval(c, y) == doctest::Approx(4.0));
  const double bad[] = {-1.0, 1.0};
  CHECK_THROWS_AS(ri::weight_eval(c, bad), ri::DomainError);

  MonomialCone c3(3, 2, {0.5, 2.5});
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 3.0);
  for (int i = 0; i < 100; ++i) {
    double p[3] = {u(rng), u(rng), u(rng) - 1.5};
    const double s = u(rng) + 0.1;
    double q[3] = {s * p[0], s * p[1], s * p[2]};
    const double ref = std::pow(s, c3.alpha()) * ri::weight_eval(c3, p);
    CHECK(std::abs(ri::weight_eval(c3, q) - ref) <= 1e-12 * ref);
  }
}

TEST_CASE("closed form ball measure") {
  // polar integral int_0^{pi/2} int_0^1 r^3 cos sin dr dtheta = 1/8
  CHECK(MonomialCone(2, 2, {1.0, 1.0}).B_mu() == doctest::Approx(0.125).epsilon(1e-14));
  // int over the half disk of x_1 = 2/3
  CHECK(MonomialCone(2, 1, {1.0}).B_mu() == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  CHECK(MonomialCone(2, 1, {1e-9}).B_mu() == doctest::Approx(std::numbers::pi / 2).epsilon(1e-8));
  MonomialCone c(2, 2, {1.0, 1.0});
  CHECK(c.D() == 4.0);
  CHECK_THROWS_AS(MonomialCone(1, 1, {1.0}), ri::DomainError);
  CHECK_THROWS_AS(MonomialCone(2, 3, {1.0, 1.0, 1.0}), ri::DomainError);
  CHECK_THROWS_AS(MonomialCone(2, 1, {0.0}), ri::DomainError);
}

TEST_CASE("monte carlo ball measure") {
  MonomialCone c(2, 2, {1.0, 1.0});
  auto e = ri::ball_measure_mc(c, 1000000, 7);
  CHECK(std::abs(e.estimate - 0.125) <= 3 * e.stderr_);
  auto e2 = ri::ball_measure_mc(c, 1000000, 7);
  CHECK(e.estimate == e2.estimate);
  MonomialCone h(2, 1, {1.0});
  auto f = ri::ball_measure_mc(h, 1000000, 11);
  CHECK(std::abs(f.estimate - 2.0 / 3.0) <= 3 * f.stderr_);
}

TEST_CASE("sigma map and pushforward") {
  MonomialCone c(2, 2, {1.0, 1.0});
  const double x[] = {0.6, 0.8};
  CHECK(ri::sigma_map(c, x) == doctest::Approx(0.125));
  const double y[] = {1.2, 1.6};
  CHECK(ri::sigma_map(c, y) == doctest::Approx(2.0));
  auto e = ri::sigma_preimage_measure_mc(c, 0.0, 1.0, 400000, 5);
  CHECK(std::abs(e.estimate - 1.0) <= 3 * e.stderr_);
  auto g = ri::sigma_preimage_measure_mc(c, 0.5, 3.0, 400000, 6);
  CHECK(std::abs(g.estimate - 2.5) <= 3 * g.stderr_);
  CHECK(ri::default_c_iso(c) == doctest::Approx(4.0 * std::pow(0.125, 0.25)));
}
