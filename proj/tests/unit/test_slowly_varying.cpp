#include <cmath>

#include "doctest.h"
#include "ri/error.hpp"
#include "ri/slowly_varying.hpp"

using ri::Endpoint;
using ri::SlowlyVarying;

TEST_CASE("evaluation") {
  CHECK(SlowlyVarying::one()(3.7) == 1.0);
  CHECK(SlowlyVarying::broken_log(1, 0, 1)(std::exp(1.0)) == doctest::Approx(2.0));
  CHECK(SlowlyVarying::broken_log(1, 2, 0)(std::exp(-1.0)) == doctest::Approx(4.0));
  CHECK(SlowlyVarying::broken_log(2, 1, 1)(std::exp(std::exp(1.0) - 1.0)) == doctest::Approx(2.0));
  CHECK_THROWS_AS(SlowlyVarying(0.0, {}), ri::DomainError);
  CHECK_THROWS_AS(SlowlyVarying::broken_log(3, 1, 1), ri::DomainError);
}

TEST_CASE("algebra") {
  auto b = SlowlyVarying::broken_log(1, 1, 2);
  auto bi = b.inverse();
  for (double t : {1e-5, 0.3, 1.0, 7.0, 1e9}) CHECK(b(t) * bi(t) == doctest::Approx(1.0));
  auto p = b.pow(0.5) * b.pow(0.5);
  CHECK(p(13.0) == doctest::Approx(b(13.0)));
  CHECK(b.log_at(1e6) == doctest::Approx(2.0 * std::log(1.0 + 1e6)));
}

TEST_CASE("asymptotics and endpoint tests") {
  auto b = SlowlyVarying::broken_log(1, -2, 0);
  CHECK(ri::power_log_integrable(-1.0, b.asymptotics(Endpoint::Zero), Endpoint::Zero));
  CHECK_FALSE(ri::power_log_integrable(-1.0, {-1.0, 0.0}, Endpoint::Zero));
  CHECK(ri::power_log_integrable(-1.0, {-1.0, -2.0}, Endpoint::Infinity));
  CHECK_FALSE(ri::power_log_integrable(-1.0, {-1.0, -1.0}, Endpoint::Infinity));
  CHECK(ri::power_log_integrable(-0.5, {5.0, 0.0}, Endpoint::Zero));
  CHECK(ri::power_log_bounded(0.0, {0.0, -1.0}, Endpoint::Infinity));
  CHECK_FALSE(ri::power_log_bounded(0.0, {0.5, 0.0}, Endpoint::Infinity));
}

TEST_CASE("monotone equivalence") {
  CHECK_FALSE(SlowlyVarying::broken_log(1, 0, 1).equivalent_to_nonincreasing());
  CHECK_FALSE(SlowlyVarying::broken_log(1, 0, 1).equivalent_to_nonincreasing_at_infinity());
  CHECK(SlowlyVarying::broken_log(1, 1, -1).equivalent_to_nonincreasing());
  CHECK_FALSE(SlowlyVarying::broken_log(1, -1, 0).equivalent_to_nonincreasing());
  auto b = SlowlyVarying::broken_log(1, 1, 1);
  const double r1 = b.monotone_equivalence_ratio(0.1, 1e-8, 1e8);
  const double r2 = b.monotone_equivalence_ratio(0.1, 1e-8, 1e8, 256);
  CHECK(r1 > 0.05);
  CHECK(r2 == doctest::Approx(r1).epsilon(0.05));
}
