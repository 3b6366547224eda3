#include "hgl/eikonal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hgl {

StripGrid make_strip_grid(const DirectionFrame& frame, double delta, double H,
                          std::optional<double> lateral_extent,
                          const std::vector<double>& period) {
  double min_period = *std::min_element(period.begin(), period.end());
  if (delta > min_period / 8.0 + 1e-15)
    throw ValidationError("grid too coarse: delta must be <= min(period)/8");

  StripGrid g;
  g.frame = frame;
  g.delta = delta;
  g.ds = delta;
  g.j0 = std::max(1, static_cast<int>(std::ceil(H / delta - 1e-12)));
  g.H = g.j0 * g.ds;
  g.ns = 2 * g.j0 + 1;

  double L;
  if (lateral_extent) {
    L = *lateral_extent;
    g.periodic_lateral = frame.integer_vector.has_value() &&
                         frame.lateral_period &&
                         std::abs(L / *frame.lateral_period -
                                  std::round(L / *frame.lateral_period)) < 1e-9;
  } else if (frame.lateral_period) {
    L = *frame.lateral_period;
    g.periodic_lateral = true;
  } else {
    throw ValidationError(
        "irrational direction: an explicit lateral window is required");
  }
  g.ny = std::max(2, static_cast<int>(std::round(L / delta)));
  g.dy = L / g.ny;
  g.lateral_extent = L;
  return g;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Godunov update with (possibly missing) one-sided neighbor minima a, b
// and spacings da, db; f is the local slowness sqrt(a(x)).
double godunov_update(double a, double da, double b, double db, double f) {
  if (a > b) {
    std::swap(a, b);
    std::swap(da, db);
  }
  if (a == kInf) return kInf;
  double u1 = a + f * da;  // 1D fallback (degenerate single-neighbor case)
  if (u1 <= b) return u1;
  double ia = 1.0 / (da * da), ib = 1.0 / (db * db);
  double A = ia + ib;
  double B = -2.0 * (a * ia + b * ib);
  double C = a * a * ia + b * b * ib - f * f;
  double disc = B * B - 4.0 * A * C;
  if (disc < 0.0) disc = 0.0;  // discriminant clamp
  return (-B + std::sqrt(disc)) / (2.0 * A);
}

// Solves the one-sided problem u >= 0, |grad u| = f on rows 0..nrows-1
// (row 0 frozen at 0) by fast sweeping; returns (residual, sweeps).
// f and u are indexed u[row*ny + iy].
std::pair<double, int> sweep_half(std::vector<double>& u,
                                  const std::vector<double>& f, int ny,
                                  int nrows, double ds, double dy,
                                  bool periodic, double tol, int max_iter) {
  auto idx = [ny](int row, int iy) {
    return static_cast<std::size_t>(row) * ny + iy;
  };
  double change = kInf;
  int iter = 0;
  for (; iter < max_iter && change > tol; ++iter) {
    change = 0.0;
    for (int sweep = 0; sweep < 4; ++sweep) {
      int r0 = (sweep & 1) ? nrows - 1 : 1;
      int r1 = (sweep & 1) ? 0 : nrows;
      int rstep = (sweep & 1) ? -1 : 1;
      int i0 = (sweep & 2) ? ny - 1 : 0;
      int i1 = (sweep & 2) ? -1 : ny;
      int istep = (sweep & 2) ? -1 : 1;
      for (int row = r0; row != r1; row += rstep) {
        if (row == 0) continue;
        for (int iy = i0; iy != i1; iy += istep) {
          double below = u[idx(row - 1, iy)];
          double above = (row + 1 < nrows) ? u[idx(row + 1, iy)] : kInf;
          double a = std::min(below, above);
          double left, right;
          if (periodic) {
            left = u[idx(row, (iy + ny - 1) % ny)];
            right = u[idx(row, (iy + 1) % ny)];
          } else {
            left = (iy > 0) ? u[idx(row, iy - 1)] : kInf;
            right = (iy + 1 < ny) ? u[idx(row, iy + 1)] : kInf;
          }
          double b = std::min(left, right);
          double cand = godunov_update(a, ds, b, dy, f[idx(row, iy)]);
          double& cur = u[idx(row, iy)];
          if (cand < cur) {
            change = std::max(change, cur - cand);
            cur = cand;
          }
        }
      }
    }
  }
  return {change, iter};
}

}  // namespace

DistanceField solve_signed_distance(const CoefficientField& field,
                                    const StripGrid& grid) {
  DistanceField df;
  df.grid = grid;
  df.h.assign(grid.size(), 0.0);

  const int ny = grid.ny;
  const int half_rows = grid.j0 + 1;  // plane row + one half
  const double tol = 1e-10 * std::sqrt(field.Theta_hat()) * grid.delta;

  // Slowness cache, full strip.
  std::vector<double> f(grid.size());
  for (int js = 0; js < grid.ns; ++js)
    for (int iy = 0; iy < ny; ++iy) {
      auto x = grid.point(iy, js);
      f[grid.index(iy, js)] = std::sqrt(field(x[0], x[1]));
    }

  double residual = 0.0;
  int sweeps = 0;
  for (int sign = 0; sign < 2; ++sign) {
    std::vector<double> u(static_cast<std::size_t>(half_rows) * ny, kInf);
    std::vector<double> fh(u.size());
    for (int row = 0; row < half_rows; ++row) {
      int js = sign == 0 ? grid.j0 + row : grid.j0 - row;
      for (int iy = 0; iy < ny; ++iy)
        fh[static_cast<std::size_t>(row) * ny + iy] = f[grid.index(iy, js)];
    }
    for (int iy = 0; iy < ny; ++iy) u[static_cast<std::size_t>(iy)] = 0.0;
    auto [resid, it] =
        sweep_half(u, fh, ny, half_rows, grid.ds, grid.dy,
                   grid.periodic_lateral, tol, 1000);
    if (resid > tol)
      throw ConvergenceError("fast sweeping did not converge", resid);
    residual = std::max(residual, resid);
    sweeps = std::max(sweeps, it);
    for (int row = 0; row < half_rows; ++row) {
      int js = sign == 0 ? grid.j0 + row : grid.j0 - row;
      double s = sign == 0 ? 1.0 : -1.0;
      for (int iy = 0; iy < ny; ++iy)
        df.h[grid.index(iy, js)] =
            s * u[static_cast<std::size_t>(row) * ny + iy];
    }
  }
  df.residual = residual;
  df.sweeps = sweeps;
  return df;
}

BoundsReport check_distance_bounds(const DistanceField& df, double theta_hat,
                                   double Theta_hat) {
  const StripGrid& g = df.grid;
  const double rt = std::sqrt(theta_hat), rT = std::sqrt(Theta_hat);
  const double slack = 2.0 * rT * g.delta;
  BoundsReport rep;
  for (int js = 0; js < g.ns; ++js) {
    double s = std::abs(g.s(js));
    for (int iy = 0; iy < g.ny; ++iy) {
      double h = std::abs(df.at(iy, js));
      double viol = std::max(rt * s - h, h - rT * s);
      rep.worst_violation = std::max(rep.worst_violation, viol);
      if (viol > slack) ++rep.violating_nodes;
    }
  }
  rep.worst_over_delta = rep.worst_violation / g.delta;
  return rep;
}

DistanceField rescaled_field(const DistanceField& df, int m) {
  const StripGrid& g = df.grid;
  if (g.H + 1e-12 < static_cast<double>(m))
    throw ValidationError("rescaled_field: source height below m");
  DistanceField out;
  StripGrid sg = g;
  int j0_new = static_cast<int>(std::floor(m / g.ds + 1e-9));
  sg.delta = g.delta / m;
  sg.ds = g.ds / m;
  sg.dy = g.dy / m;
  sg.j0 = j0_new;
  sg.ns = 2 * j0_new + 1;
  sg.H = sg.j0 * sg.ds;
  sg.lateral_extent = g.lateral_extent / m;
  out.grid = sg;
  out.h.resize(out.grid.size());
  for (int js = 0; js < sg.ns; ++js) {
    int src_js = g.j0 + (js - sg.j0);
    for (int iy = 0; iy < sg.ny; ++iy)
      out.h[sg.index(iy, js)] = df.at(iy, src_js) / m;
  }
  out.residual = df.residual / m;
  out.sweeps = df.sweeps;
  return out;
}

}  // namespace hgl
