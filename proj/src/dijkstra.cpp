#include <cmath>
#include <cstdint>
#include <queue>
#include <vector>

#include "hgl/eikonal.hpp"

namespace hgl {

namespace {

struct QItem {
  double dist;
  std::uint32_t node;
  bool operator>(const QItem& o) const { return dist > o.dist; }
};

}  // namespace

DistanceField dijkstra_distance_oracle(const CoefficientField& field,
                                       const StripGrid& grid,
                                       int neighborhood) {
  if (neighborhood != 8 && neighborhood != 16)
    throw ValidationError("dijkstra oracle: neighborhood must be 8 or 16");
  if (grid.size() > 512ull * 512ull * 2ull)
    throw ValidationError("dijkstra oracle: grid exceeds the 512^2 node guard");

  // Offsets (di lateral, dj along nu); 16-neighborhood adds knight moves.
  std::vector<std::pair<int, int>> offs = {{1, 0},  {-1, 0}, {0, 1},  {0, -1},
                                           {1, 1},  {1, -1}, {-1, 1}, {-1, -1}};
  if (neighborhood == 16) {
    for (auto [a, b] : {std::pair{1, 2}, {2, 1}})
      for (int sa : {1, -1})
        for (int sb : {1, -1}) offs.push_back({sa * a, sb * b});
  }

  DistanceField df;
  df.grid = grid;
  df.h.assign(grid.size(), 0.0);

  const int ny = grid.ny, j0 = grid.j0;

  // Each half-space solved independently (a geodesic to the plane stays
  // on its own side up to first touch).
  for (int sign = 0; sign < 2; ++sign) {
    const int nrows = j0 + 1;
    const std::size_t n = static_cast<std::size_t>(nrows) * ny;
    std::vector<double> dist(n, std::numeric_limits<double>::infinity());
    std::priority_queue<QItem, std::vector<QItem>, std::greater<QItem>> pq;
    auto idx = [ny](int row, int iy) {
      return static_cast<std::size_t>(row) * ny + iy;
    };
    auto strip_js = [&](int row) { return sign == 0 ? j0 + row : j0 - row; };

    for (int iy = 0; iy < ny; ++iy) {
      dist[idx(0, iy)] = 0.0;
      pq.push({0.0, static_cast<std::uint32_t>(idx(0, iy))});
    }
    while (!pq.empty()) {
      auto [d, node] = pq.top();
      pq.pop();
      if (d > dist[node]) continue;
      int row = static_cast<int>(node) / ny;
      int iy = static_cast<int>(node) % ny;
      auto xa = grid.point(iy, strip_js(row));
      for (auto [di, dj] : offs) {
        int nrow = row + (sign == 0 ? dj : dj);
        if (nrow < 0 || nrow >= nrows) continue;
        int niy = iy + di;
        if (grid.periodic_lateral) {
          niy = (niy % ny + ny) % ny;
        } else if (niy < 0 || niy >= ny) {
          continue;
        }
        // Physical edge length from index steps (wrap keeps |dy| exact).
        double len = std::hypot(di * grid.dy, dj * grid.ds);
        // Midpoint across a wrapped edge: step from xa in the true
        // geometric direction rather than averaging wrapped coordinates.
        auto perp = grid.frame.perp();
        double mx = xa[0] + 0.5 * (dj * grid.ds * (sign == 0 ? 1 : -1) *
                                       grid.frame.nu[0] +
                                   di * grid.dy * perp[0]);
        double my = xa[1] + 0.5 * (dj * grid.ds * (sign == 0 ? 1 : -1) *
                                       grid.frame.nu[1] +
                                   di * grid.dy * perp[1]);
        double w = len * std::sqrt(field(mx, my));
        std::size_t nn = idx(nrow, niy);
        if (dist[node] + w < dist[nn]) {
          dist[nn] = dist[node] + w;
          pq.push({dist[nn], static_cast<std::uint32_t>(nn)});
        }
      }
    }
    for (int row = 0; row < nrows; ++row) {
      double s = sign == 0 ? 1.0 : -1.0;
      for (int iy = 0; iy < ny; ++iy)
        df.h[grid.index(iy, strip_js(row))] = s * dist[idx(row, iy)];
    }
  }
  return df;
}

}  // namespace hgl
