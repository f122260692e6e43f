#ifndef NEUMANN_SPECIAL_HPP
#define NEUMANN_SPECIAL_HPP

namespace neumann::special {

// Bessel functions of the first kind, power series evaluation. Intended for
// the moderate arguments this toolkit needs (|x| <= ~30).
double bessel_j0(double x);
double bessel_j1(double x);
// d/dx J1(x) = J0(x) - J1(x)/x.
double bessel_j1_prime(double x);

// First positive zero of J0 (~2.4048), Newton-refined to 1e-14.
double j0_zero();
// First positive zero of J1' (~1.8411).
double j1_prime_zero();

struct Constants {
  double j0;          // first zero of J0
  double j1p;         // first zero of J1'
  double rho_ground;  // j1p / 2
  double rho_excited; // j1p / sqrt(2)
  double gamma_area;  // (4*sqrt(2)/pi^2) * Int_0^inf arcsin(exp(-x^2)) dx
  double alpha_min;   // gamma_area * pi^2 / (2 j0^2)
  double alpha_max;   // pi / 4
};

// Runtime-computed constants, cross-checked against their 4-decimal reference
// values on first use.
const Constants& constants();

// The area constant evaluated by a second, independent quadrature route
// (tanh-sinh after the substitution t = exp(-x^2)).
double gamma_area_tanh_sinh();

}  // namespace neumann::special

#endif
