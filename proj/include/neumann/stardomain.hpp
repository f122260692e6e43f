#ifndef NEUMANN_STARDOMAIN_HPP
#define NEUMANN_STARDOMAIN_HPP

#include <string>
#include <vector>

#include "neumann/common.hpp"

namespace neumann::stardomain {

// The (a, b) pair of the explicit star-like domain; for the separable torus
// eigenfunction with indices (n1, n2) these are a = 1/(4 n1), b = 1/(4 n2).
struct StarParams {
  double a = 1.0;
  double b = 1.0;

  StarParams() = default;
  StarParams(double a_, double b_);

  double ratio() const { return a / b; }
  double exponent() const { return (a / b) * (a / b); }  // cusp exponent (a/b)^2
};

struct SectorParams {
  double alpha = 0.0;  // opening angle in (0, 2*pi]
  double radius = 0.0;

  double area() const { return 0.5 * alpha * radius * radius; }
};

// Boundary profile gamma_{a,b}(x) = (2b/pi) asin(cos(pi x / 2a)^{(a/b)^2}),
// even in x, gamma(0) = b, gamma(+-a) = 0.
double gamma_boundary(const StarParams& p, double x);
// d gamma / dx, evaluated in a cancellation-free form (gamma'(0+) = -1).
double gamma_derivative(const StarParams& p, double x);
// log(gamma(a - s)) for small s > 0; stays finite where gamma underflows.
double log_gamma_near_cusp(const StarParams& p, double s);

// lambda_{a,b} = (pi^2/4)(a^-2 + b^-2)
double lambda_ab(const StarParams& p);

// |Lambda_{a,b}| = Int_0^a gamma, adaptive quadrature (relative 1e-9 or better).
double quarter_area(const StarParams& p);

// Length of the full star boundary: 4x the arclength of gamma over [0, a].
double perimeter(const StarParams& p);

// The analytic gradient-flow line of the separable eigenfunction in centered
// coordinates: x2(x1) = (2b/pi) asin(sin(g) cos(pi x1/2a)^{(a/b)^2}).
double flow_line(const StarParams& p, double g, double x1);

// Remainder R_b(x) of cos(pi x/2a)^{(a/b)^2} = exp(-(pi^2/8)(x/b)^2)(1 - R_b(x)),
// computed by exact division in log space; positive and increasing in x.
double cos_power_remainder(const StarParams& p, double x);

struct AsymptoticsReport {
  double wedge_slope = 0.0;     // fitted d gamma/dx at 0+, expected -1
  double wedge_residual = 0.0;  // rms residual of the linear fit
  double cusp_exponent = 0.0;   // fitted log-log exponent at the cusp, expected (a/b)^2
  double cusp_residual = 0.0;
};

// Fits the wedge slope near x=0 and the cusp exponent near x=a over a window
// of the given width. Throws FitError when a fit fails to match its model.
AsymptoticsReport boundary_asymptotics_check(const StarParams& p, double window = 1e-3);

struct SectorGroundState {
  double lambda = 0.0;  // j0^2 / R^2
  double j0 = 0.0;
  double radius = 0.0;

  // Radial profile J0(r j0 / R); zero at the rim by construction.
  double profile(double r) const;
};

SectorGroundState sector_ground_state(const SectorParams& s);

// Equal-area reference sector: R = sqrt(2 |Lambda_{a,b}| / alpha).
SectorParams reference_sector(const StarParams& p, double alpha);

struct AdmissibilityWindow {
  double alpha_lo = 0.0;  // alpha_min constant
  double alpha_hi = 0.0;  // pi/4
  bool feasible = false;  // some alpha in the window clears the eigenvalue margin
  double alpha_best = 0.0;
  double margin = 0.0;  // max over the grid of lambda_{alpha,R(alpha)} - lambda_{a,b}
};

// Scans a 64-point alpha grid in (alpha_min, pi/4) and reports whether the
// reference sector's ground state clears lambda_{a,b} by the fixed margin
// eps0 = 1e-6 * lambda_{a,b}.
AdmissibilityWindow admissibility_window(const StarParams& p);

struct RhoPair {
  double rho_star = 0.0;
  double rho_lens = 0.0;
};

// rho = A sqrt(lambda) / perimeter for the star domain and its lens partner
// (tile complement, same perimeter). rho_star <= rho_lens always.
RhoPair rho_star_lens(const StarParams& p);

struct SweepRow {
  double a, b, ratio, rho_star, rho_lens;
  bool feasible;
  double alpha_best, margin;
};

SweepRow sweep_row(const StarParams& p);
void export_sweep_csv(const std::vector<SweepRow>& rows, const std::string& path,
                      const std::string& metadata = "");

}  // namespace neumann::stardomain

#endif
