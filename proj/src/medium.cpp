#include "hgl/medium.hpp"

#include <cmath>
#include <numeric>
#include <random>

namespace hgl {

std::pair<double, double> estimate_bounds(const Expr& expr, int dim,
                                          const std::vector<double>& period,
                                          int samples_per_axis) {
  if (samples_per_axis < 64)
    throw ValidationError("estimate_bounds: samples_per_axis must be >= 64");
  if (dim != 2 && dim != 3)
    throw ValidationError("estimate_bounds: dim must be 2 or 3");

  const int n = samples_per_axis;
  std::vector<double> x(static_cast<std::size_t>(dim));
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  double max_slope = 0.0;  // grid Lipschitz estimate, per unit length
  double min_spacing = std::numeric_limits<double>::infinity();
  for (int d = 0; d < dim; ++d)
    min_spacing = std::min(min_spacing, period[static_cast<std::size_t>(d)] / n);

  std::vector<double> prev_row;  // finite differences along the last axis
  const long total = static_cast<long>(std::pow(n, dim));
  std::vector<double> vals(static_cast<std::size_t>(total));
  for (long idx = 0; idx < total; ++idx) {
    long rem = idx;
    for (int d = 0; d < dim; ++d) {
      int i = static_cast<int>(rem % n);
      rem /= n;
      x[static_cast<std::size_t>(d)] =
          period[static_cast<std::size_t>(d)] * (i + 0.5) / n;
    }
    double v = expr.eval(x);
    if (!std::isfinite(v))
      throw ValidationError("coefficient evaluates to a non-finite value");
    vals[static_cast<std::size_t>(idx)] = v;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
    if (idx % n != 0) {
      double h = period[0] / n;
      max_slope = std::max(
          max_slope, std::abs(v - vals[static_cast<std::size_t>(idx - 1)]) / h);
    }
    if ((idx / n) % n != 0) {
      double h = period[1] / n;
      max_slope = std::max(
          max_slope, std::abs(v - vals[static_cast<std::size_t>(idx - n)]) / h);
    }
  }

  const double margin = max_slope * min_spacing;
  if (lo - margin <= 0.0)
    throw ValidationError(
        "coefficient is not bounded away from zero on the period cell");
  return {lo - margin, hi + margin};
}

CoefficientField CoefficientField::validate(const Expr& expr, int dim,
                                            std::vector<double> period,
                                            int samples_per_axis) {
  CoefficientField f;
  f.expr_ = expr;
  f.dim_ = dim;
  if (period.empty()) period.assign(static_cast<std::size_t>(dim), 1.0);
  if (static_cast<int>(period.size()) != dim)
    throw ValidationError("period length must match dimension");
  for (double p : period)
    if (!(p > 0.0)) throw ValidationError("period entries must be positive");
  f.period_ = std::move(period);

  auto [lo, hi] = estimate_bounds(expr, dim, f.period_, samples_per_axis);
  f.theta_hat_ = lo;
  f.Theta_hat_ = hi;

  // Periodicity check on random points (1e-12 relative).
  std::mt19937_64 rng(0x9e3779b97f4a7c15ull);
  std::uniform_real_distribution<double> unif(-2.0, 2.0);
  std::vector<double> x(static_cast<std::size_t>(dim)),
      xp(static_cast<std::size_t>(dim));
  for (int trial = 0; trial < 100; ++trial) {
    for (auto& c : x) c = unif(rng);
    double v = expr.eval(x);
    for (int d = 0; d < dim; ++d) {
      xp = x;
      xp[static_cast<std::size_t>(d)] += f.period_[static_cast<std::size_t>(d)];
      double vp = expr.eval(xp);
      if (std::abs(vp - v) > 1e-12 * std::max(1.0, std::abs(v)))
        throw ValidationError("coefficient is not periodic with the declared period");
    }
  }
  return f;
}

namespace {

DirectionFrame frame_from_unit(double n1, double n2) {
  DirectionFrame f;
  f.nu = {n1, n2};
  // 2D: rotation by -angle(nu) maps nu to e1 and has det 1.
  f.rotation = {{{n1, n2}, {-n2, n1}}};
  return f;
}

}  // namespace

DirectionFrame direction_frame(long long p1, long long p2) {
  if (p1 == 0 && p2 == 0)
    throw ValidationError("direction vector must be nonzero");
  long long g = std::gcd(std::abs(p1), std::abs(p2));
  p1 /= g;
  p2 /= g;
  double len = std::hypot(static_cast<double>(p1), static_cast<double>(p2));
  DirectionFrame f = frame_from_unit(p1 / len, p2 / len);
  f.integer_vector = {{p1, p2}};
  f.lateral_period = len;
  return f;
}

DirectionFrame direction_frame(double v1, double v2) {
  if (v1 == 0.0 && v2 == 0.0)
    throw ValidationError("direction vector must be nonzero");
  // Detect rational (integer-valued) input.
  double r1 = std::round(v1), r2 = std::round(v2);
  if (v1 == r1 && v2 == r2 && std::abs(r1) < 1e15 && std::abs(r2) < 1e15)
    return direction_frame(static_cast<long long>(r1),
                           static_cast<long long>(r2));
  double len = std::hypot(v1, v2);
  return frame_from_unit(v1 / len, v2 / len);
}

}  // namespace hgl
