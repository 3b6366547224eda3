#include "hgl/sigma.hpp"

#include <cmath>

#include "hgl/profile.hpp"
#include "hgl/quadrature.hpp"

namespace hgl {

namespace {
constexpr double kSqrt2 = 1.4142135623730951;

double sech4_sqrt2(double h) {
  double c = std::cosh(kSqrt2 * h);
  double s = 1.0 / (c * c);
  return s * s;
}
}  // namespace

double tail_height(double eps_tail, double theta_hat) {
  return std::max(3.0, std::log(16.0 / eps_tail) /
                           (4.0 * kSqrt2 * std::sqrt(theta_hat)));
}

double sigma_tail_bound(double theta_hat, double Theta_hat, double H) {
  double r = 4.0 * kSqrt2 * std::sqrt(theta_hat);
  return 2.0 * Theta_hat * 16.0 * std::exp(-r * H) / r;
}

double sigma_at_T(const CoefficientField& field, const DistanceField& df,
                  double T) {
  const StripGrid& g = df.grid;
  const double half = 0.5 * T;
  if (g.H + 1e-9 < half)
    throw ValidationError("sigma_at_T: strip does not cover height T");
  double sum = 0.0;
  for (int js = 0; js < g.ns; ++js) {
    double s = g.s(js);
    if (std::abs(s) > half + 1e-12) continue;
    double wj = (std::abs(std::abs(s) - half) <= 1e-12) ? 0.5 : 1.0;
    for (int iy = 0; iy < g.ny; ++iy) {
      auto x = g.point(iy, js);
      sum += wj * 2.0 * field(x[0], x[1]) * sech4_sqrt2(df.at(iy, js));
    }
  }
  return sum * g.ds * g.dy / g.lateral_extent;
}

SigmaEstimate sigma_estimate(const CoefficientField& field,
                             const DirectionFrame& frame, double delta,
                             double eps_tail) {
  SigmaEstimate est;
  est.nu = frame.nu;
  est.delta = delta;

  const double H0 = tail_height(eps_tail, field.theta_hat());
  est.T_schedule = {4.0 * H0, 6.0 * H0, 8.0 * H0};
  est.H = 0.5 * est.T_schedule.back();

  for (int level = 0; level < 2; ++level) {
    double d = level == 0 ? delta : 0.5 * delta;
    StripGrid grid = make_strip_grid(frame, d, est.H, std::nullopt,
                                     field.period());
    DistanceField df = solve_signed_distance(field, grid);
    auto& per_T = level == 0 ? est.per_T_coarse : est.per_T_fine;
    for (double T : est.T_schedule) per_T.push_back(sigma_at_T(field, df, T));
  }

  double coarse = est.per_T_coarse.back();
  double fine = est.per_T_fine.back();
  est.sigma_value = 2.0 * fine - coarse;  // first-order Richardson in delta
  est.tail_bound =
      sigma_tail_bound(field.theta_hat(), field.Theta_hat(), est.H);
  est.error_budget = std::abs(fine - coarse) + est.tail_bound + 1e-12;

  // Refinement diagnostic: the last two T increments should not grow.
  auto incr = [](const std::vector<double>& v, std::size_t k) {
    return std::abs(v[k + 1] - v[k]);
  };
  double slack = 1e-12 * (1.0 + std::abs(fine));
  est.refinement_monotone =
      incr(est.per_T_fine, 1) <= incr(est.per_T_fine, 0) + slack;
  return est;
}

double coarea_sigma_at_T(const CoefficientField& field,
                         const DistanceField& df, double T, int n_levels) {
  const StripGrid& g = df.grid;
  const double half = 0.5 * T;
  if (g.H + 1e-9 < half)
    throw ValidationError("coarea_sigma_at_T: strip does not cover height T");

  auto [nodes, weights] = gauss_legendre(n_levels);

  // Level integral of sqrt(a) over {h = level} by marching segments.
  auto perp = g.frame.perp();
  auto level_integral = [&](double level) {
    double acc = 0.0;
    int jlo = 0, jhi = g.ns - 1;
    while (g.s(jlo) < -half - 1e-12) ++jlo;
    while (g.s(jhi) > half + 1e-12) --jhi;
    const int ncols = g.periodic_lateral ? g.ny : g.ny - 1;
    for (int js = jlo; js < jhi; ++js) {
      for (int ic = 0; ic < ncols; ++ic) {
        int i1 = (ic + 1) % g.ny;
        // Cell corners: (ic,js) (i1,js) (i1,js+1) (ic,js+1).
        double v00 = df.at(ic, js) - level;
        double v10 = df.at(i1, js) - level;
        double v11 = df.at(i1, js + 1) - level;
        double v01 = df.at(ic, js + 1) - level;
        // Crossing points in local cell coordinates (u along y, v along s).
        std::array<std::array<double, 2>, 4> pts;
        int npts = 0;
        auto cross = [&](double a, double b, double ua, double va, double ub,
                         double vb) {
          if ((a < 0.0) == (b < 0.0)) return;
          double t = a / (a - b);
          pts[static_cast<std::size_t>(npts++)] = {ua + t * (ub - ua),
                                                   va + t * (vb - va)};
        };
        cross(v00, v10, 0, 0, 1, 0);
        cross(v10, v11, 1, 0, 1, 1);
        cross(v01, v11, 0, 1, 1, 1);
        cross(v00, v01, 0, 0, 0, 1);
        if (npts < 2) continue;
        // Ambiguous saddle (4 crossings): split by the center average.
        auto add_seg = [&](const std::array<double, 2>& p,
                          const std::array<double, 2>& q) {
          double du = (q[0] - p[0]) * g.dy, dv = (q[1] - p[1]) * g.ds;
          double len = std::hypot(du, dv);
          if (len == 0.0) return;
          double um = 0.5 * (p[0] + q[0]), vm = 0.5 * (p[1] + q[1]);
          double yy = (ic + um) * g.dy;
          double ss = g.s(js) + vm * g.ds;
          double px = ss * g.frame.nu[0] + yy * perp[0];
          double py = ss * g.frame.nu[1] + yy * perp[1];
          acc += len * std::sqrt(field(px, py));
        };
        if (npts == 2) {
          add_seg(pts[0], pts[1]);
        } else if (npts == 4) {
          double center = 0.25 * (v00 + v10 + v11 + v01);
          // Pair crossings consistently with the center sign.
          if ((center < 0.0) == (v00 < 0.0)) {
            add_seg(pts[0], pts[1]);
            add_seg(pts[2], pts[3]);
          } else {
            add_seg(pts[0], pts[3]);
            add_seg(pts[1], pts[2]);
          }
        }
      }
    }
    return acc;
  };

  // s-range: levels beyond the metric range of the strip contribute
  // nothing; integrate over [-S, S], S = sqrt(Theta) * half.
  const double S = std::sqrt(field.Theta_hat()) * half;
  double total = 0.0;
  for (int k = 0; k < n_levels; ++k) {
    double s = S * nodes[static_cast<std::size_t>(k)];
    double w = S * weights[static_cast<std::size_t>(k)];
    double dens = sech4_sqrt2(s);
    if (dens < 1e-300) continue;
    total += w * 2.0 * level_integral(s) * dens;
  }
  return total / g.lateral_extent;
}

double equipartition_residual(const CoefficientField& field,
                              const DistanceField& df, double profile_scale) {
  const StripGrid& g = df.grid;
  double num = 0.0, den = 0.0;
  for (int js = 1; js + 1 < g.ns; ++js) {
    for (int iy = 0; iy < g.ny; ++iy) {
      int im, ip;
      if (g.periodic_lateral) {
        im = (iy + g.ny - 1) % g.ny;
        ip = (iy + 1) % g.ny;
      } else {
        if (iy == 0 || iy + 1 == g.ny) continue;
        im = iy - 1;
        ip = iy + 1;
      }
      auto u_of = [&](int i, int j) {
        return std::tanh(kSqrt2 * profile_scale * df.at(i, j));
      };
      double us = (u_of(iy, js + 1) - u_of(iy, js - 1)) / (2.0 * g.ds);
      double uy = (u_of(ip, js) - u_of(im, js)) / (2.0 * g.dy);
      double grad2 = us * us + uy * uy;
      double u = u_of(iy, js);
      auto x = g.point(iy, js);
      double aw = field(x[0], x[1]) * W(u);
      num += std::abs(0.5 * grad2 - aw);
      den += 0.5 * grad2 + aw;
    }
  }
  return num / den;
}

MetricSlope metric_slope_c(const CoefficientField& field,
                           const DirectionFrame& frame,
                           const std::vector<int>& m_list, double delta) {
  if (!frame.integer_vector)
    throw ValidationError("metric_slope_c: rational direction required");
  MetricSlope ms;
  ms.m_list = m_list;
  int m_max = *std::max_element(m_list.begin(), m_list.end());
  StripGrid grid = make_strip_grid(frame, delta, static_cast<double>(m_max),
                                   std::nullopt, field.period());
  DistanceField df = solve_signed_distance(field, grid);
  for (int m : m_list) {
    DistanceField km = rescaled_field(df, m);
    double sum = 0.0;
    std::size_t count = 0;
    for (int js = 0; js < km.grid.ns; ++js) {
      double s = km.grid.s(js);
      if (s < 0.5 - 1e-12 || s > 1.0 + 1e-12) continue;
      for (int iy = 0; iy < km.grid.ny; ++iy) {
        sum += km.at(iy, js) / s;
        ++count;
      }
    }
    ms.c_m.push_back(sum / static_cast<double>(count));
  }
  ms.c_fit = ms.c_m.back();
  if (ms.c_m.size() >= 2) {
    double a = ms.c_m[ms.c_m.size() - 2], b = ms.c_m.back();
    ms.cauchy = std::abs(a - b) <= 0.05 * std::abs(b);
  }
  return ms;
}

}  // namespace hgl
