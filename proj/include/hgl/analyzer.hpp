#pragma once

#include <string>
#include <vector>

#include "hgl/sigma.hpp"

namespace hgl {

// Reduced rational directions with max coordinate <= max_den, all four
// quadrants, sorted by angle in [0, 2pi).
std::vector<DirectionFrame> farey_directions(int max_den);

struct DirectionSweep {
  std::vector<double> angle;  // strictly increasing, [0, 2pi)
  std::vector<SigmaEstimate> est;

  double max_error_budget() const;
};

// Fans sigma_estimate over the directions with `workers` threads;
// results are merged by direction index, so the output is independent of
// the worker count.
DirectionSweep run_sweep(const CoefficientField& field,
                         const std::vector<DirectionFrame>& dirs, double delta,
                         double eps_tail, int workers = 1);

// Periodic (2pi) cubic spline through the sweep samples.
class SigmaInterpolant {
 public:
  SigmaInterpolant() = default;
  explicit SigmaInterpolant(const DirectionSweep& sweep);
  double operator()(double theta) const;
  int n_knots() const { return static_cast<int>(t_.size()); }

 private:
  std::vector<double> t_, y_, m_;  // knots, values, second derivatives
};

// One-homogeneous extension: |w| sigma(angle(w)); exactly 0 at w = 0.
double sigma_tilde(double w1, double w2, const SigmaInterpolant& interp);

struct AngularDerivatives {
  std::vector<double> theta;   // uniform grid, [0, 2pi)
  std::vector<double> sigma, d1, d2;
  double eta = 0.0;            // FD step (radians)
  bool conclusive = true;      // false when the sweep budget exceeds 1e-2
};

// 5-point central stencils on a uniform resampling of the interpolant;
// eta = max(2 deg, eps_sigma^{1/3} rad).
AngularDerivatives angular_derivatives(const DirectionSweep& sweep);

struct ConvexityReport {
  AngularDerivatives deriv;
  std::vector<double> hessian_gap;  // sigma + sigma'' - sigma0
  double sigma0 = 0.0;              // (4/3) sqrt(2 theta_hat)
  double min_gap = 0.0;
  double noise_floor = 0.0;         // 3x budget propagated through the stencil
  double max_abs_d1 = 0.0;
  double d1_noise_floor = 0.0;
  std::string b_verdict;            // which regime the tangential slope supports
};

ConvexityReport convexity_report(const DirectionSweep& sweep, double theta_hat);

// Intersection of half-planes {x . nu_k <= sigma(nu_k)} over n uniformly
// spread support directions; closed convex polygon.
std::vector<std::array<double, 2>> wulff_shape_2d(const SigmaInterpolant& interp,
                                                  int n_halfplanes);

}  // namespace hgl
