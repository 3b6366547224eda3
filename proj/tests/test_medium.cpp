#include <cmath>

#include "doctest.h"
#include "hgl/medium.hpp"

using namespace hgl;

TEST_CASE("coefficient validation accepts positive periodic media") {
  CoefficientField f =
      CoefficientField::validate("1 + 0.5*sin(2*pi*x1)^2*sin(2*pi*x2)^2", 2);
  CHECK(f.theta_hat() > 0.9);
  CHECK(f.theta_hat() <= 1.0);
  CHECK(f.Theta_hat() >= 1.5);
  CHECK(f.Theta_hat() < 1.7);
  CHECK(f(0.25, 0.25) == doctest::Approx(1.5));
}

TEST_CASE("validation rejects nonpositive and aperiodic coefficients") {
  CHECK_THROWS_AS(CoefficientField::validate("sin(2*pi*x1)", 2),
                  ValidationError);
  CHECK_THROWS_AS(CoefficientField::validate("0*x1", 2), ValidationError);
  CHECK_THROWS_AS(CoefficientField::validate("1 + x1", 2), ValidationError);
}

TEST_CASE("bounds bracket the true extrema with margin") {
  Expr e = Expr::parse("1 + 0.5*sin(2*pi*x1)^2", 2);
  auto [lo, hi] = estimate_bounds(e, 2, {1.0, 1.0}, 64);
  CHECK(lo <= 1.0);
  CHECK(hi >= 1.5);
  CHECK(lo > 0.9);
  CHECK(hi < 1.6);
}

TEST_CASE("direction frame normalizes and reduces integers") {
  DirectionFrame f = direction_frame(2LL, 4LL);
  REQUIRE(f.integer_vector.has_value());
  CHECK((*f.integer_vector)[0] == 1);
  CHECK((*f.integer_vector)[1] == 2);
  CHECK(f.nu[0] * f.nu[0] + f.nu[1] * f.nu[1] == doctest::Approx(1.0));
  CHECK(f.nu[0] == doctest::Approx(1.0 / std::sqrt(5.0)));
  REQUIRE(f.lateral_period.has_value());
  CHECK(*f.lateral_period == doctest::Approx(std::sqrt(5.0)));

  // R nu = e1.
  double r1 = f.rotation[0][0] * f.nu[0] + f.rotation[0][1] * f.nu[1];
  double r2 = f.rotation[1][0] * f.nu[0] + f.rotation[1][1] * f.nu[1];
  CHECK(r1 == doctest::Approx(1.0));
  CHECK(r2 == doctest::Approx(0.0));
}

TEST_CASE("non-integer direction has no lattice data") {
  DirectionFrame f = direction_frame(std::cos(0.4), std::sin(0.4));
  CHECK(!f.integer_vector.has_value());
  CHECK(!f.lateral_period.has_value());
  CHECK(f.nu[0] * f.nu[0] + f.nu[1] * f.nu[1] == doctest::Approx(1.0));
}

TEST_CASE("integer-valued doubles delegate to the integer path") {
  DirectionFrame f = direction_frame(3.0, -3.0);
  REQUIRE(f.integer_vector.has_value());
  CHECK((*f.integer_vector)[0] == 1);
  CHECK((*f.integer_vector)[1] == -1);
}
