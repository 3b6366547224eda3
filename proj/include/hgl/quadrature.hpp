#pragma once

#include <cmath>
#include <utility>
#include <vector>

namespace hgl {

// Adaptive Simpson to absolute tolerance `tol`, max recursion depth `depth`.
template <typename F>
double adaptive_simpson(F&& f, double a, double b, double tol = 1e-12,
                        int depth = 60) {
  struct Impl {
    const F& f;
    double rec(double a, double b, double fa, double fm, double fb,
               double whole, double tol, int depth) const {
      double m = 0.5 * (a + b);
      double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
      double flm = f(lm), frm = f(rm);
      double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
      double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
      if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
      return rec(a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
             rec(m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
    }
  };
  if (a == b) return 0.0;
  double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return Impl{f}.rec(a, b, fa, fm, fb, whole, tol, depth);
}

// Gauss-Legendre nodes/weights on [-1,1].
std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n);

}  // namespace hgl
