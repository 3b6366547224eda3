#pragma once

#include <array>
#include <vector>

#include "hgl/eikonal.hpp"

namespace hgl {

// Per-direction surface tension estimate from the geodesic formula, with
// truncation / extrapolation error budget.
struct SigmaEstimate {
  std::array<double, 2> nu{1.0, 0.0};
  double sigma_value = 0.0;
  double tail_bound = 0.0;
  double error_budget = 0.0;
  double delta = 0.0;
  double H = 0.0;
  std::vector<double> T_schedule;
  std::vector<double> per_T_coarse;  // sigma_at_T at delta
  std::vector<double> per_T_fine;    // sigma_at_T at delta/2
  bool refinement_monotone = true;
};

// Integrand tail rule: H0 = max(3, ln(16/eps_tail)/(4 sqrt(2) sqrt(theta))).
double tail_height(double eps_tail, double theta_hat);

// Neglected sech^4 mass beyond half-height H, per unit lateral measure:
// 2 Theta 16 e^{-4 sqrt(2 theta) H} / (4 sqrt(2 theta)).
double sigma_tail_bound(double theta_hat, double Theta_hat, double H);

// Lateral-period average of 2 a(y) sech^4(sqrt(2) h(y)) over |x.nu| <= T/2.
double sigma_at_T(const CoefficientField& field, const DistanceField& df,
                  double T);

// Full evaluation: T schedule {4,6,8} H0, grids at delta and delta/2,
// Richardson extrapolation in delta, exponential tail bound.
SigmaEstimate sigma_estimate(const CoefficientField& field,
                             const DirectionFrame& frame, double delta,
                             double eps_tail);

// Coarea route: level sets of h extracted by marching segments at
// Gauss-Legendre levels in s, level integrals of sqrt(a) weighted by
// sech^4(sqrt(2) s). Shares the normalization of sigma_at_T.
double coarea_sigma_at_T(const CoefficientField& field,
                         const DistanceField& df, double T, int n_levels);

// Discrete L1 average of | |grad u|^2/2 - a W(u) | for u = q(scale * h),
// normalized by the mean energy density. scale != 1 is the negative
// control (deliberately wrong profile).
double equipartition_residual(const CoefficientField& field,
                              const DistanceField& df,
                              double profile_scale = 1.0);

struct MetricSlope {
  std::vector<int> m_list;
  std::vector<double> c_m;
  double c_fit = 0.0;
  bool cauchy = true;  // spread of the last two values <= 5%
};

// Large-scale slope of the planar metric: c_m = average of k_m(z)/(z.nu)
// over 0.5 <= z.nu <= 1 where k_m = h(m .)/m.
MetricSlope metric_slope_c(const CoefficientField& field,
                           const DirectionFrame& frame,
                           const std::vector<int>& m_list, double delta);

}  // namespace hgl
