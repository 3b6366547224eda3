#pragma once

#include <array>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "hgl/expr.hpp"

namespace hgl {

struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Periodic coefficient a(x) with verified positivity bounds.
// Immutable after construction; all evaluations are pure.
class CoefficientField {
 public:
  // Parses, samples one period cell densely, and verifies
  // 0 < theta_hat <= a <= Theta_hat and periodicity. Throws ValidationError
  // if a takes nonpositive values or evaluation is not finite.
  static CoefficientField validate(const Expr& expr, int dim,
                                   std::vector<double> period = {},
                                   int samples_per_axis = 64);
  static CoefficientField validate(const std::string& text, int dim,
                                   std::vector<double> period = {},
                                   int samples_per_axis = 64) {
    return validate(Expr::parse(text, dim), dim, std::move(period),
                    samples_per_axis);
  }

  double operator()(std::span<const double> x) const { return expr_.eval(x); }
  double operator()(double x1, double x2) const { return expr_.eval(x1, x2); }

  int dim() const { return dim_; }
  const std::vector<double>& period() const { return period_; }
  double theta_hat() const { return theta_hat_; }
  double Theta_hat() const { return Theta_hat_; }
  const Expr& expr() const { return expr_; }

 private:
  Expr expr_;
  int dim_ = 2;
  std::vector<double> period_;
  double theta_hat_ = 0.0, Theta_hat_ = 0.0;
};

// Grid min/max of a over one period cell with a Lipschitz safety margin.
// Throws ValidationError if the margin-adjusted minimum is nonpositive.
std::pair<double, double> estimate_bounds(const Expr& expr, int dim,
                                          const std::vector<double>& period,
                                          int samples_per_axis);

// Orthonormal frame attached to a unit direction nu: rotation R with
// R nu = e1, det R = 1. Rational directions carry the reduced integer
// vector and the length of the lateral lattice translation.
struct DirectionFrame {
  std::array<double, 2> nu{1.0, 0.0};
  std::array<std::array<double, 2>, 2> rotation{{{1.0, 0.0}, {0.0, 1.0}}};
  std::optional<std::array<long long, 2>> integer_vector;
  std::optional<double> lateral_period;

  // Unit lateral vector nu_perp = (-nu2, nu1); R maps it to e2.
  std::array<double, 2> perp() const { return {-nu[1], nu[0]}; }
};

// From a nonzero vector; integer-valued inputs are reduced by gcd.
DirectionFrame direction_frame(double v1, double v2);
DirectionFrame direction_frame(long long p1, long long p2);

}  // namespace hgl
