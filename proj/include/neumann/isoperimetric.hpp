#ifndef NEUMANN_ISOPERIMETRIC_HPP
#define NEUMANN_ISOPERIMETRIC_HPP

#include <string>
#include <vector>

#include "neumann/common.hpp"
#include "neumann/stardomain.hpp"

namespace neumann::isoperimetric {

// F(A) = |∂ʰA|² / (2|A|): the squared non-Neumann boundary length against
// twice the area. For a subsector of angle beta this equals beta.
double F_functional(double boundary_h_length, double area);

// C(A) = (1/4) (F(A)/|∂ʰA|)² = |∂ʰA|² / (16 |A|²).
double cheeger_functional(double boundary_h_length, double area);

// The constrained-area minimizer of |∂ʰ(.)| around the wedge corner w:
// a circular arc centered on v, meeting v and gamma orthogonally.
struct ArcSet {
  stardomain::StarParams params;
  double eta = 0.0;     // enclosed area
  Vec2 center;          // on v: (0, yc)
  double radius = 0.0;
  double attach_x = 0.0;      // abscissa of the gamma attachment
  Vec2 attach_v;              // endpoint on v
  Vec2 attach_gamma;          // endpoint on gamma
  double phi = 0.0;           // sector angle of the arc at its center
  double boundary_h_length = 0.0;
  double ortho_residual_v = 0.0;      // radians
  double ortho_residual_gamma = 0.0;  // radians
  std::vector<Vec2> arc;              // densified, from attach_v to attach_gamma

  // Closed boundary loop v-segment -> gamma -> arc, for independent area checks.
  std::vector<Vec2> closed_boundary(int n_gamma = 512, int n_arc = 512) const;
};

// Solves the orthogonal-attachment conditions by shooting on the attachment
// abscissa. Fails with NoArcFound for areas beyond the configuration where
// the arc reaches the corner v∩h.
ArcSet arc_minimizer(const stardomain::StarParams& p, double eta);

struct CurvePoint {
  double eta = 0.0;
  double F = 0.0;
  double C = 0.0;
  double radius = 0.0;
  double phi = 0.0;  // |∂ʰA| / radius; the arc angle on the first branch
  int branch = 1;    // 1: orthogonal arc on v; 2: arc tangent to h + h-segment
};

struct CheegerCurve {
  std::vector<CurvePoint> points;
  // Area of the transition set: the largest arc family member, whose circle
  // touches h exactly at the corner v∩h.
  double eta_transition = 0.0;
  bool transition_within_grid = false;
  double min_C = 0.0;
  double eta_min_C = 0.0;
  double cutoff_eta = 0.0;  // largest eta the family could realize
};

// Evaluates F and C along the minimizer family over the eta grid, switching
// to the tangent-arc continuation past the transition. With
// `gaussian_approx`, gamma is replaced by its small-b Gaussian profile.
CheegerCurve cheeger_curve(const stardomain::StarParams& p, const std::vector<double>& eta_grid,
                           bool gaussian_approx = false);

// Discrete convexity of the boundary profile on a 1e4-point grid.
bool convexity_check(const stardomain::StarParams& p);

void export_curve_csv(const CheegerCurve& curve, const std::string& path,
                      const std::string& metadata = "");

}  // namespace neumann::isoperimetric

#endif
