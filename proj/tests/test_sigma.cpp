#include <cmath>

#include "doctest.h"
#include "hgl/sigma.hpp"

using namespace hgl;

namespace {
constexpr double kSqrt2 = 1.4142135623730951;
const double kSigmaFlat = 4.0 * kSqrt2 / 3.0;  // Modica-Mortola constant
const char* kSmooth = "1 + 0.5*sin(2*pi*x1)^2*sin(2*pi*x2)^2";
}  // namespace

TEST_CASE("tail rule") {
  CHECK(tail_height(1e-8, 1.0) ==
        doctest::Approx(std::log(16.0 / 1e-8) / (4.0 * kSqrt2)));
  CHECK(tail_height(0.5, 1.0) == 3.0);  // floor
  CHECK(sigma_tail_bound(1.0, 1.0, 10.0) ==
        doctest::Approx(32.0 * std::exp(-4.0 * kSqrt2 * 10.0) /
                        (4.0 * kSqrt2)));
  CHECK(sigma_tail_bound(1.0, 1.0, 12.0) < sigma_tail_bound(1.0, 1.0, 10.0));
}

TEST_CASE("calibration: homogeneous medium reproduces the 1D constant") {
  CoefficientField one = CoefficientField::validate("1 + 0*x1", 2);
  for (auto pq : {std::pair<long long, long long>{1, 0}, {1, 1}}) {
    SigmaEstimate e = sigma_estimate(one, direction_frame(pq.first, pq.second),
                                     1.0 / 32.0, 1e-8);
    CHECK(e.sigma_value == doctest::Approx(kSigmaFlat).epsilon(1e-6));
    CHECK(e.error_budget < 1e-6);
    CHECK(e.refinement_monotone);
  }
}

TEST_CASE("quadratic scaling: a -> lambda^2 a gives lambda sigma") {
  // With a = lambda^2, h = lambda s and the density integrates to
  // lambda * sigma_flat; checks both halves of the scaling at once.
  for (double lam : {0.5, 2.0}) {
    std::string expr = std::to_string(lam * lam) + " + 0*x1";
    CoefficientField f = CoefficientField::validate(expr, 2);
    SigmaEstimate e =
        sigma_estimate(f, direction_frame(1LL, 0LL), 1.0 / 32.0, 1e-8);
    CHECK(e.sigma_value == doctest::Approx(lam * kSigmaFlat).epsilon(1e-5));
  }
}

TEST_CASE("coarea route agrees with the direct average") {
  CoefficientField field = CoefficientField::validate(kSmooth, 2);
  DirectionFrame frame = direction_frame(1LL, 1LL);
  double H0 = tail_height(1e-8, field.theta_hat());
  StripGrid g = make_strip_grid(frame, 1.0 / 64.0, 4.0 * H0);
  DistanceField df = solve_signed_distance(field, g);
  double T = 6.0 * H0;
  double direct = sigma_at_T(field, df, T);
  double coarea = coarea_sigma_at_T(field, df, T, 64);
  CHECK(coarea == doctest::Approx(direct).epsilon(0.01));
}

TEST_CASE("equipartition of the geodesic profile") {
  CoefficientField field = CoefficientField::validate(kSmooth, 2);
  DirectionFrame frame = direction_frame(1LL, 0LL);
  double H0 = tail_height(1e-8, field.theta_hat());

  StripGrid g64 = make_strip_grid(frame, 1.0 / 64.0, 4.0 * H0);
  DistanceField df64 = solve_signed_distance(field, g64);
  double r64 = equipartition_residual(field, df64);
  CHECK(r64 < 2e-2);

  StripGrid g128 = make_strip_grid(frame, 1.0 / 128.0, 4.0 * H0);
  DistanceField df128 = solve_signed_distance(field, g128);
  double r128 = equipartition_residual(field, df128);
  double factor = r64 / r128;
  CHECK(factor > 1.4);
  CHECK(factor < 2.6);

  // negative control: the wrongly rescaled profile fails equipartition
  double bad = equipartition_residual(field, df64, 2.0);
  CHECK(bad > 10.0 * r64);
  CHECK(bad > 0.3);
}

TEST_CASE("metric slope for the homogeneous medium is exactly 1") {
  CoefficientField one = CoefficientField::validate("1 + 0*x1", 2);
  MetricSlope ms =
      metric_slope_c(one, direction_frame(1LL, 0LL), {1, 2, 4}, 1.0 / 32.0);
  for (double c : ms.c_m) CHECK(c == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(ms.cauchy);
}

TEST_CASE("metric slope stays inside the comparison interval") {
  CoefficientField field = CoefficientField::validate(kSmooth, 2);
  MetricSlope ms = metric_slope_c(field, direction_frame(1LL, 2LL),
                                  {1, 2, 4, 8}, 1.0 / 32.0);
  double lo = std::sqrt(field.theta_hat()), hi = std::sqrt(field.Theta_hat());
  for (double c : ms.c_m) {
    CHECK(c >= lo - 0.02);
    CHECK(c <= hi + 0.02);
  }
  CHECK(std::abs(ms.c_m[3] - ms.c_m[2]) / ms.c_m[3] <= 0.03);
}

TEST_CASE("laminate direction sees the 1D structure") {
  // a depends on x1 only; along e1 the distance and the density are 1D and
  // the estimate must be independent of the lateral coordinate.
  CoefficientField lam = CoefficientField::validate("1 + 0.5*sin(2*pi*x1)^2", 2);
  SigmaEstimate e =
      sigma_estimate(lam, direction_frame(1LL, 0LL), 1.0 / 64.0, 1e-8);
  CHECK(e.sigma_value > kSigmaFlat);  // heavier medium than a = 1
  CHECK(e.error_budget < 0.02 * e.sigma_value);
}
