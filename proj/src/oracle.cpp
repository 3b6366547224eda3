#include "hgl/oracle.hpp"

#include <cassert>
#include <cmath>

#include "hgl/profile.hpp"
#include "hgl/quadrature.hpp"
#include "hgl/sigma.hpp"

namespace hgl {

namespace {
constexpr double kSqrt2 = 1.4142135623730951;

double bump_marginal(double u) {
  double t = 1.0 - u * u;
  return t > 0.0 ? std::pow(t, 4.5) : 0.0;
}

// int_{-1}^{1} (1-u^2)^{9/2} du = Beta(1/2, 11/2) = pi 63/256.
const double kBumpMass = 2.0 * adaptive_simpson(bump_marginal, 0.0, 1.0);
}  // namespace

double mollified_step(double t) {
  if (t <= -1.0) return -1.0;
  if (t >= 1.0) return 1.0;
  double half = adaptive_simpson(bump_marginal, 0.0, std::abs(t));
  double m = 2.0 * half / kBumpMass;
  return t < 0.0 ? -m : m;
}

namespace {

// Bilinear sample of a strip distance field at rotated coordinates (s, y),
// wrapping laterally over one period.
double sample_h(const DistanceField& df, double s, double y) {
  const StripGrid& g = df.grid;
  double js = s / g.ds + g.j0;
  js = std::clamp(js, 0.0, static_cast<double>(g.ns - 1));
  double L = g.lateral_extent;
  double yy = std::fmod(y, L);
  if (yy < 0.0) yy += L;
  double iy = yy / g.dy;
  int j0i = std::min(static_cast<int>(js), g.ns - 2);
  int i0 = static_cast<int>(iy) % g.ny;
  int i1 = (i0 + 1) % g.ny;
  double fs = js - j0i, fy = iy - static_cast<int>(iy);
  return (1 - fs) * ((1 - fy) * df.at(i0, j0i) + fy * df.at(i1, j0i)) +
         fs * ((1 - fy) * df.at(i0, j0i + 1) + fy * df.at(i1, j0i + 1));
}

}  // namespace

double CellProblem::energy() const {
  const double d2 = delta * delta;
  double e = 0.0;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      std::size_t k = static_cast<std::size_t>(j) * n + i;
      e += a[k] * W(u[k]) * d2;
      if (i + 1 < n) {
        double g = u[k + 1] - u[k];
        e += 0.5 * g * g;
      }
      if (j + 1 < n) {
        double g = u[k + static_cast<std::size_t>(n)] - u[k];
        e += 0.5 * g * g;
      }
    }
  return e;
}

namespace {

void energy_grad(const CellProblem& p, std::vector<double>& grad) {
  const int n = p.n;
  const double d2 = p.delta * p.delta;
  grad.assign(p.u.size(), 0.0);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      std::size_t k = static_cast<std::size_t>(j) * n + i;
      grad[k] += p.a[k] * dW(p.u[k]) * d2;
      if (i + 1 < n) {
        double g = p.u[k + 1] - p.u[k];
        grad[k] -= g;
        grad[k + 1] += g;
      }
      if (j + 1 < n) {
        double g = p.u[k + static_cast<std::size_t>(n)] - p.u[k];
        grad[k] -= g;
        grad[k + static_cast<std::size_t>(n)] += g;
      }
    }
  for (std::size_t k = 0; k < grad.size(); ++k)
    if (p.fixed[k]) grad[k] = 0.0;
}

}  // namespace

CellProblem make_cell_problem(const CoefficientField& field,
                              const DirectionFrame& frame, double T,
                              double delta, BcKind bc, int start) {
  CellProblem p;
  p.field = &field;
  p.frame = frame;
  p.T = T;
  p.delta = delta;
  p.bc = bc;
  p.n = static_cast<int>(std::round(T / delta)) + 1;

  // Signed distance on a strip covering the cube height; finer than the
  // cube grid to keep interpolation bias below the optimizer's resolution.
  StripGrid sgrid = make_strip_grid(frame, delta / 2.0, T / 2.0 + delta,
                                    std::nullopt, field.period());
  DistanceField df = solve_signed_distance(field, sgrid);

  const int n = p.n;
  const std::size_t nn = static_cast<std::size_t>(n) * n;
  p.u.resize(nn);
  p.fixed.assign(nn, 0);
  p.a.resize(nn);
  p.h.resize(nn);

  auto perp = frame.perp();
  for (int j = 0; j < n; ++j) {
    double s = -T / 2.0 + j * delta;
    for (int i = 0; i < n; ++i) {
      double y = -T / 2.0 + i * delta;
      std::size_t k = static_cast<std::size_t>(j) * n + i;
      double px = s * frame.nu[0] + y * perp[0];
      double py = s * frame.nu[1] + y * perp[1];
      p.a[k] = field(px, py);
      p.h[k] = sample_h(df, s, y);
      bool boundary = (i == 0 || j == 0 || i == n - 1 || j == n - 1);
      if (boundary) {
        p.fixed[k] = 1;
        p.u[k] = (bc == BcKind::kMollifiedStep) ? mollified_step(s)
                                                : std::tanh(kSqrt2 * p.h[k]);
      } else {
        p.u[k] = (start == 0) ? std::tanh(kSqrt2 * p.h[k]) : mollified_step(s);
      }
    }
  }
  return p;
}

MinimizeResult minimize_cell_energy(CellProblem& p, const MinimizeOptions& opt) {
  const double grad_tol = opt.grad_tol_factor * p.delta * p.delta;
  const std::size_t nn = p.u.size();

  std::vector<double> boundary_snapshot;
  for (std::size_t k = 0; k < nn; ++k)
    if (p.fixed[k]) boundary_snapshot.push_back(p.u[k]);

  std::vector<double> grad, grad_prev, dir(nn, 0.0), trial(nn);
  double e = p.energy();
  energy_grad(p, grad);

  MinimizeResult res;
  double alpha_prev = 1.0;
  double e_window = e;
  for (int it = 0; it < opt.max_iter; ++it) {
    double gmax = 0.0, gg = 0.0;
    for (double g : grad) {
      gmax = std::max(gmax, std::abs(g));
      gg += g * g;
    }
    res.grad_norm = gmax;
    res.iterations = it;
    if (gmax < grad_tol) {
      res.converged = true;
      break;
    }
    if (it > 0 && it % opt.stagnation_window == 0) {
      if (e_window - e <= opt.stagnation_rtol * std::max(1.0, std::abs(e))) {
        res.converged = true;
        break;
      }
      e_window = e;
    }

    double beta = 0.0;
    if (it > 0) {
      double num = 0.0, den = 0.0;
      for (std::size_t k = 0; k < nn; ++k) {
        num += grad[k] * (grad[k] - grad_prev[k]);
        den += grad_prev[k] * grad_prev[k];
      }
      beta = std::max(0.0, num / den);  // PR+
    }
    double dg = 0.0;
    for (std::size_t k = 0; k < nn; ++k) {
      dir[k] = -grad[k] + beta * dir[k];
      dg += dir[k] * grad[k];
    }
    if (dg >= 0.0) {  // not a descent direction: restart on steepest descent
      dg = -gg;
      for (std::size_t k = 0; k < nn; ++k) dir[k] = -grad[k];
    }

    // Armijo backtracking.
    double alpha = std::min(4.0, 1.5 * alpha_prev);
    bool accepted = false;
    std::vector<double>& u = p.u;
    double e_new = 0.0;
    for (int halving = 0; halving < 60; ++halving) {
      for (std::size_t k = 0; k < nn; ++k) trial[k] = u[k] + alpha * dir[k];
      std::swap(u, trial);
      e_new = p.energy();
      std::swap(u, trial);
      if (e_new <= e + 1e-4 * alpha * dg) {
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) {
      // At rounding level near a minimum the Armijo test cannot be met;
      // accept the current iterate instead of failing.
      if (std::abs(dg) <= 1e-10 * std::max(1.0, std::abs(e))) {
        res.converged = true;
        break;
      }
      throw ConvergenceError("cell minimizer: line search failed", gmax);
    }
    std::swap(p.u, trial);
    // Descent guard: Armijo with dg < 0 enforces strict decrease.
    assert(e_new <= e);
    e = e_new;
    alpha_prev = alpha;

    grad_prev = grad;
    energy_grad(p, grad);
  }

  // Boundary preservation, bit level.
  std::size_t bi = 0;
  for (std::size_t k = 0; k < nn; ++k)
    if (p.fixed[k]) assert(p.u[k] == boundary_snapshot[bi++]);

  res.energy_per_area = p.energy() / p.T;
  return res;
}

MinimizeResult oracle_sigma(const CoefficientField& field,
                            const DirectionFrame& frame, double T,
                            double delta, BcKind bc,
                            const MinimizeOptions& opt) {
  MinimizeResult best;
  best.energy_per_area = std::numeric_limits<double>::infinity();
  for (int start = 0; start < 2; ++start) {
    CellProblem p = make_cell_problem(field, frame, T, delta, bc, start);
    MinimizeResult r = minimize_cell_energy(p, opt);
    if (r.energy_per_area < best.energy_per_area) best = r;
  }
  return best;
}

double laminate_sigma_1d(const Expr& a_1d, double quad_tol) {
  // theta estimate for the tail rule.
  double lo = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 4096; ++i) {
    double v = a_1d.eval({{(i + 0.5) / 4096.0, 0.0}});
    lo = std::min(lo, v);
  }
  if (!(lo > 0.0))
    throw ValidationError("laminate_sigma_1d: coefficient must be positive");

  const double S = 2.0 * tail_height(1e-10, lo);
  const int steps = 200000;  // composite Simpson, O(ds^4)
  const double ds = S / steps;
  auto sqrt_a = [&](double s) { return std::sqrt(a_1d.eval({{s, 0.0}})); };
  auto dens = [](double a_val, double h) {
    double c = std::cosh(kSqrt2 * h);
    double s2 = 1.0 / (c * c);
    return 2.0 * a_val * s2 * s2;
  };
  (void)quad_tol;

  double total = 0.0;
  for (int sign : {1, -1}) {
    double h = 0.0, s = 0.0;
    for (int k = 0; k < steps; ++k) {
      double s0 = s, s1 = s + sign * ds;
      double sm = 0.5 * (s0 + s1);
      double f0 = sqrt_a(s0), fm = sqrt_a(sm), f1 = sqrt_a(s1);
      double h0 = h;
      double hm = h + sign * ds / 2.0 / 6.0 *
                          (f0 + 4.0 * sqrt_a(0.5 * (s0 + sm)) + fm);
      double h1 = h + sign * ds / 6.0 * (f0 + 4.0 * fm + f1);
      double g0 = dens(f0 * f0, h0), gm = dens(fm * fm, hm),
             g1 = dens(f1 * f1, h1);
      total += sign * (s1 - s0) / 6.0 * (g0 + 4.0 * gm + g1);
      h = h1;
      s = s1;
    }
  }
  return total;
}

}  // namespace hgl
