#include "hgl/profile.hpp"

#include <cmath>
#include <limits>

#include "hgl/quadrature.hpp"

namespace hgl {

namespace {
constexpr double kSqrt2 = 1.4142135623730951;

double sech(double x) { return 1.0 / std::cosh(x); }
}  // namespace

double W(double u) {
  double t = 1.0 - u * u;
  return t * t;
}

double dW(double u) { return -4.0 * u * (1.0 - u * u); }

double q(double z) { return std::tanh(kSqrt2 * z); }

double q_prime(double z) {
  double s = sech(kSqrt2 * z);
  return kSqrt2 * s * s;
}

double phi(double z) { return kSqrt2 * (z - z * z * z / 3.0); }

ProfileParams ProfileParams::make(double T, double Theta_hat) {
  ProfileParams p;
  p.T = T;
  p.kappa = std::max(4, static_cast<int>(std::ceil(5.0 * std::sqrt(2.0 * Theta_hat))));
  p.delta_T = std::pow(sech(T), p.kappa);
  p.zeta_max = 20.0;
  return p;
}

double F_T(double zeta, const ProfileParams& p) {
  if (std::abs(zeta) > p.zeta_max)
    throw DomainError("F_T: |zeta| exceeds zeta_max");
  const double d = p.delta_T;
  auto integrand = [d](double xi) {
    double s2 = sech(xi);
    s2 *= s2;
    return s2 / (kSqrt2 * std::sqrt(s2 * s2 + d));
  };
  return adaptive_simpson(integrand, 0.0, zeta, 1e-12, 60);
}

double q_T(double z, const ProfileParams& p) {
  if (z == 0.0) return 0.0;
  if (z < 0.0) return -q_T(-z, p);

  double hi = p.zeta_max;
  double f_hi = F_T(hi, p);
  if (z >= f_hi) {
    // Saturated: inversion clamp, return 1 minus one ulp.
    return std::nextafter(1.0, 0.0);
  }
  // Bracketed bisection, then Newton polish. F_T' = sech^2 / (sqrt2 sqrt(...)).
  double lo = 0.0, f_lo = 0.0;
  for (int it = 0; it < 80 && hi - lo > 1e-14 * (1.0 + hi); ++it) {
    double mid = 0.5 * (lo + hi);
    double fm = F_T(mid, p);
    if (fm < z) {
      lo = mid;
      f_lo = fm;
    } else {
      hi = mid;
      f_hi = fm;
    }
    if (hi - lo < 1e-6) break;
  }
  double zeta = 0.5 * (lo + hi);
  for (int it = 0; it < 40; ++it) {
    double s2 = sech(zeta);
    s2 *= s2;
    double deriv = s2 / (kSqrt2 * std::sqrt(s2 * s2 + p.delta_T));
    double resid = F_T(zeta, p) - z;
    if (std::abs(resid) < 1e-13 * (1.0 + std::abs(z))) break;
    double step = resid / deriv;
    zeta -= step;
    if (zeta < lo || zeta > hi) zeta = 0.5 * (lo + hi);  // keep bracket
    if (std::abs(step) < 1e-14 * (1.0 + std::abs(zeta))) break;
  }
  return std::tanh(zeta);
}

double psi_T(double z, const ProfileParams& p) {
  if (p.delta_T == 0.0 && std::abs(z) >= 1.0)
    throw DomainError("psi_T: |z| >= 1 with delta_T = 0");
  const double d = p.delta_T;
  auto integrand = [d](double xi) {
    return 1.0 / (kSqrt2 * std::sqrt(W(xi) + d));
  };
  return adaptive_simpson(integrand, 0.0, z, 1e-12, 60);
}

}  // namespace hgl
