#pragma once

#include <cstdint>
#include <vector>

#include "hgl/eikonal.hpp"
#include "hgl/expr.hpp"

namespace hgl {

enum class BcKind { kMollifiedStep, kProfileTrace };

// Mollified sharp interface: CDF profile of the polynomial bump
// (1-|x|^2)^4 in the normal coordinate t = x.nu; -1 for t <= -1, +1 for
// t >= 1, smooth odd monotone in between.
double mollified_step(double t);

// Discrete cell problem on the rotated T-cube: nodal values on an
// n x n grid over [-T/2, T/2]^2 in (lateral, normal) coordinates, with the
// boundary trace fixed to the chosen condition.
struct CellProblem {
  const CoefficientField* field = nullptr;
  DirectionFrame frame;
  double T = 8.0;
  double delta = 1.0 / 32.0;
  BcKind bc = BcKind::kProfileTrace;
  int n = 0;
  std::vector<double> u;
  std::vector<std::uint8_t> fixed;
  std::vector<double> a;       // coefficient cache at nodes
  std::vector<double> h;       // signed distance cache at nodes

  double energy() const;       // discrete E(u), forward-difference gradient
  double energy_per_area() const { return energy() / T; }
};

// Assembles the problem; initial guess q o h_nu (start = 0) or the
// mollified step (start = 1).
CellProblem make_cell_problem(const CoefficientField& field,
                              const DirectionFrame& frame, double T,
                              double delta, BcKind bc, int start = 0);

struct MinimizeOptions {
  int max_iter = 50000;
  double grad_tol_factor = 1e-4;  // tolerance = factor * delta^N
  // Secondary stop: relative energy decrease over `stagnation_window`
  // iterations below `stagnation_rtol`.
  int stagnation_window = 100;
  double stagnation_rtol = 1e-12;
};

struct MinimizeResult {
  double energy_per_area = 0.0;
  int iterations = 0;
  double grad_norm = 0.0;
  bool converged = false;
};

// Nonlinear conjugate gradient (Polak-Ribiere+) with Armijo backtracking;
// hard-asserts monotone energy descent and fixed-node preservation.
MinimizeResult minimize_cell_energy(CellProblem& problem,
                                    const MinimizeOptions& opt = {});

// Runs both starts (geodesic profile and mollified step) and keeps the
// lower energy.
MinimizeResult oracle_sigma(const CoefficientField& field,
                            const DirectionFrame& frame, double T,
                            double delta, BcKind bc,
                            const MinimizeOptions& opt = {});

// Laminate 1D quadrature oracle for a = a(x.nu):
// sigma = 2 int a(s) sech^4(sqrt(2) h(s)) ds with h(s) = int_0^s sqrt(a).
double laminate_sigma_1d(const Expr& a_1d, double quad_tol = 1e-10);

}  // namespace hgl
