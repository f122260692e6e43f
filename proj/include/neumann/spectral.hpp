#ifndef NEUMANN_SPECTRAL_HPP
#define NEUMANN_SPECTRAL_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "neumann/common.hpp"
#include "neumann/stardomain.hpp"

namespace neumann::spectral {

// Sides of the quarter domain Lambda_{a,b}: v is the vertical segment
// {x1 = 0}, h the horizontal one {x2 = 0}.
enum class DirichletSide { v, h };

const char* side_name(DirichletSide side);

struct EigenResult {
  double eigenvalue = 0.0;    // fine-level discrete eigenvalue
  double extrapolated = 0.0;  // Richardson over the two mesh levels
  // Normwise backward error ||Ax - lambda Mx|| / ((||A||_1 + |lambda| ||M||_1) ||x||),
  // long-double accumulated: the solver-convergence certificate.
  double residual = 0.0;
  int n_cells = 0;            // fine-level cell count actually used
  int nu = 0, nw = 0;         // fine-level cells per direction
  double u_max = 0.0;         // truncated domain length in x1
  std::vector<double> eigenvector;  // fine-level nodes, (nu+1)*(nw+1) row-major in (i,j)
};

// Ratio of the dominant sign's peak to the opposite sign's peak; infinity
// when the eigenvector never changes sign.
double single_sign_ratio(const std::vector<double>& values);

struct QuarterOptions {
  int n_cells = 40000;            // target fine-level cell budget
  double gamma_floor_rel = 1e-5;  // truncate the cusp where gamma < rel * gamma(0)
};

// Generic mapped-strip problem {0 < u < u_len, 0 < x2 < profile(u)} with
// Neumann walls except one Dirichlet side.
struct ProfileProblem {
  std::function<double(double)> profile;     // strictly positive on [0, u_len]
  std::function<double(double)> dprofile;
  double u_len = 1.0;
  DirichletSide side = DirichletSide::v;
};

// Single-level solve of the mapped problem on an nu x nw cell grid
// (bilinear elements on the rectangle image of (x1, x2/profile(x1))).
EigenResult solve_profile_level(const ProfileProblem& problem, int nu, int nw);

// Two-level solve of the quarter-domain operator for the star boundary
// gamma_{a,b}, with Richardson extrapolation.
EigenResult solve_quarter(const stardomain::StarParams& p, DirichletSide side,
                          const QuarterOptions& opts = {});

struct GapResult {
  double lambda_v = 0.0;
  double lambda_h = 0.0;
  double gap = 0.0;             // lambda_h - lambda_v, extrapolated values
  double error_estimate = 0.0;  // combined Richardson error estimate
  EigenResult v_result;
  EigenResult h_result;
};

GapResult ground_state_gap(const stardomain::StarParams& p, int n_cells = 40000);

// Mixed-boundary sector: Dirichlet on the rim r = R, Neumann on the straight
// sides. Cell-centered polar finite volumes, two levels + Richardson.
EigenResult solve_sector(double alpha, double radius, int n_cells = 10000);

enum class ShapeClass { I, II, III };

const char* shape_name(ShapeClass shape);

// A quarter-domain eigenvector reflected onto the full star domain
// (antisymmetric across the Dirichlet side, symmetric across the other).
struct UnfoldedState {
  int nu = 0, nw = 0;          // quarter-level cells
  double u_max = 0.0;
  std::vector<double> values;  // (2nu+1) x (2nw+1) row-major, index 0 = -u_max side
};

UnfoldedState unfold(const EigenResult& quarter, DirichletSide side);

// Nodal-set pattern of a full-domain state: closed interior curve (I),
// nodal line on h (II) or on v (III).
ShapeClass classify_shape(const UnfoldedState& state, double zero_tol_rel = 1e-9);

// Smallest Dirichlet eigenvalue of the 5-point Laplacian restricted to the
// masked nodes of a uniform grid with spacing h (mask true = unknown).
struct MaskResult {
  double eigenvalue = 0.0;
  double residual = 0.0;
  int unknowns = 0;
};

MaskResult dirichlet_ground_state(const std::vector<uint8_t>& mask, int nx, int ny, double h);

void export_result_json(const stardomain::StarParams& p, DirichletSide side,
                        const EigenResult& result, const std::string& path,
                        const std::string& config_json = "{}");

}  // namespace neumann::spectral

#endif
