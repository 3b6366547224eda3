#pragma once

#include <stdexcept>

namespace hgl {

// Double well and the 1D transition profiles.
//
// W(u) = (1-u^2)^2, q(z) = tanh(sqrt(2) z), and the regularized profile
// q_T(z) = tanh(F_T^{-1}(z)) with delta_T = sech(T)^kappa.

double W(double u);
double dW(double u);

double q(double z);        // tanh(sqrt(2) z)
double q_prime(double z);  // sqrt(2) sech^2(sqrt(2) z), positive

// phi(z) = sqrt(2) (z - z^3/3), primitive of sqrt(2) sqrt(W).
double phi(double z);

struct ProfileParams {
  double T;
  int kappa;
  double delta_T;
  double zeta_max;

  // kappa = max(4, ceil(5 sqrt(2 Theta_hat))); delta_T = sech(T)^kappa.
  static ProfileParams make(double T, double Theta_hat = 1.0);
};

// F_T(zeta) = int_0^zeta sech^2 xi / (sqrt(2) sqrt(sech^4 xi + delta_T)) dxi.
// Odd and strictly increasing; requires |zeta| <= zeta_max.
double F_T(double zeta, const ProfileParams& p);

// q_T(z) = tanh(F_T^{-1}(z)). Beyond the inversion range the value
// saturates at +-(1 - eps), which respects the comparison bounds there.
double q_T(double z, const ProfileParams& p);

// psi_T(z) = int_0^z 1 / (sqrt(2) sqrt(W(xi) + delta_T)) dxi.
// Inverse of z -> q_T(z); domain error at |z| >= 1 when delta_T = 0.
double psi_T(double z, const ProfileParams& p);

struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

}  // namespace hgl
