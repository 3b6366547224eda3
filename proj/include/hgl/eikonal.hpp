#pragma once

#include <array>
#include <optional>
#include <vector>

#include "hgl/medium.hpp"

namespace hgl {

// Rotated strip grid aligned with a direction frame. Coordinates
// x(iy, js) = s_js * nu + y_iy * nu_perp with a grid line exactly on the
// plane {x . nu = 0}. The lateral axis wraps periodically when the
// direction is rational (one lateral lattice period), otherwise the
// lateral extent is a user-set window with one-sided closure.
struct StripGrid {
  DirectionFrame frame;
  double delta = 0.0;          // requested spacing
  double H = 0.0;              // half-height along nu, H = j0 * ds
  double lateral_extent = 0.0; // L = ny * dy
  int ns = 0;                  // nodes along nu (odd, plane at j0)
  int ny = 0;                  // nodes across (row 0 .. ny-1)
  int j0 = 0;                  // index of the plane row
  double ds = 0.0, dy = 0.0;
  bool periodic_lateral = false;

  double s(int js) const { return (js - j0) * ds; }
  double y(int iy) const { return iy * dy; }
  std::array<double, 2> point(int iy, int js) const {
    double ss = s(js), yy = y(iy);
    return {ss * frame.nu[0] + yy * frame.perp()[0],
            ss * frame.nu[1] + yy * frame.perp()[1]};
  }
  std::size_t index(int iy, int js) const {
    return static_cast<std::size_t>(js) * static_cast<std::size_t>(ny) +
           static_cast<std::size_t>(iy);
  }
  std::size_t size() const {
    return static_cast<std::size_t>(ns) * static_cast<std::size_t>(ny);
  }
};

// lateral_extent defaults to the frame's lateral period (rational nu);
// irrational directions must pass an explicit window.
StripGrid make_strip_grid(const DirectionFrame& frame, double delta, double H,
                          std::optional<double> lateral_extent = std::nullopt,
                          const std::vector<double>& period = {1.0, 1.0});

// Signed geodesic distance samples h(iy, js) on a strip grid.
struct DistanceField {
  StripGrid grid;
  std::vector<double> h;
  double residual = 0.0;  // max Godunov residual at convergence
  int sweeps = 0;

  double at(int iy, int js) const { return h[grid.index(iy, js)]; }
};

struct ConvergenceError : std::runtime_error {
  ConvergenceError(const std::string& m, double resid)
      : std::runtime_error(m), residual(resid) {}
  double residual;
};

// Godunov upwind fast sweeping for |grad h| = sqrt(a), h = 0 on the plane
// row; positive and negative halves solved independently, the negative
// half negated. Converges when the max nodal update drops below
// 1e-10 * sqrt(Theta_hat) * delta.
DistanceField solve_signed_distance(const CoefficientField& field,
                                    const StripGrid& grid);

// Lattice shortest-path oracle (multi-source Dijkstra from the plane
// nodes); neighborhood is 8 or 16. Systematically >= the true distance.
DistanceField dijkstra_distance_oracle(const CoefficientField& field,
                                       const StripGrid& grid,
                                       int neighborhood = 16);

struct BoundsReport {
  double worst_violation = 0.0;       // max positive violation, length units
  double worst_over_delta = 0.0;      // normalized by delta
  std::size_t violating_nodes = 0;    // nodes beyond 2 sqrt(Theta) delta slack
};

// Scan h against sqrt(theta) (x.nu) <= |h| <= sqrt(Theta) (x.nu) with
// 2 sqrt(Theta) delta slack.
BoundsReport check_distance_bounds(const DistanceField& df, double theta_hat,
                                   double Theta_hat);

// k_m(.) = h(m .)/m restricted to the unit-height strip; pure reindex/scale.
DistanceField rescaled_field(const DistanceField& df, int m);

}  // namespace hgl
