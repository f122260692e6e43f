#ifndef NEUMANN_REARRANGE_HPP
#define NEUMANN_REARRANGE_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "neumann/common.hpp"
#include "neumann/stardomain.hpp"

namespace neumann::rearrange {

// Area-weighted function samples over some domain.
struct SampleSet {
  std::vector<double> values;
  std::vector<double> areas;
  double total_area = 0.0;
};

// A scalar test function with analytic gradient.
struct TestFunction {
  std::function<double(Vec2)> value;
  std::function<Vec2(Vec2)> gradient;
};

// Midpoint samples over the quarter domain Lambda_{a,b} on the mapped
// (x1, x2/gamma(x1)) grid.
SampleSet quarter_samples(const stardomain::StarParams& p, int nu, int nw,
                          const std::function<double(Vec2)>& f);

// Midpoint samples over the sector S_{alpha,R} (symmetric about the x-axis).
SampleSet sector_samples(const stardomain::SectorParams& s, int nr, int nphi,
                         const std::function<double(Vec2)>& f);

struct LevelProfile {
  std::vector<double> thresholds;       // increasing
  std::vector<double> superlevel_area;  // mu(t), nonincreasing
  double total_area = 0.0;
  double max_value = 0.0;

  // Piecewise-linear mu(t); total below the grid, 0 above the max.
  double mu(double t) const;
};

// Superlevel-set areas mu(t) = |{psi > t}| on an equispaced threshold grid in
// (0, max psi); n_thresholds <= 0 keeps the exact empirical profile (one
// threshold per distinct sample value). Rejects inputs with min psi < -1e-12.
LevelProfile level_profile(const SampleSet& samples, int n_thresholds = 512);

struct RearrangedFunction {
  stardomain::SectorParams sector;
  LevelProfile profile;

  // psi*(r) = sup{t : mu(t) > alpha r^2 / 2}; radial and nonincreasing.
  double value(double r) const;

  // Int |psi*'|^2 over the sector, evaluated segment-by-segment on the
  // profile's own piecewise structure.
  double dirichlet_energy() const;
};

// Requires the sector area to match the profile's total area to 1e-9.
RearrangedFunction rearrange_to_sector(const LevelProfile& profile,
                                       const stardomain::SectorParams& s);

struct GradientCheck {
  double lhs = 0.0;  // ||grad psi*||^2 over the sector
  double rhs = 0.0;  // ||grad psi||^2 over the quarter domain
  bool holds = false;
};

// Dirichlet-integral comparison for a function vanishing near h, rearranged
// to the equal-area sector with the given opening angle.
GradientCheck gradient_inequality_check(const stardomain::StarParams& p, const TestFunction& f,
                                        double alpha, int nu = 384, int nw = 192,
                                        int n_thresholds = 512);

struct ThresholdRow {
  double t = 0.0;
  double mu = 0.0;
  double perim_h_original = 0.0;  // marching-squares contour length inside Lambda
  double perim_h_star = 0.0;      // alpha * r(t)
  bool holds = false;
};

struct PerimeterReport {
  std::vector<ThresholdRow> rows;
  double fraction_holds = 0.0;
};

PerimeterReport perimeter_inequality_check(const stardomain::StarParams& p, const TestFunction& f,
                                           double alpha, int nu = 384, int nw = 192,
                                           int n_thresholds = 64);

void export_report_json(const PerimeterReport& report, const std::string& path,
                        const std::string& config_json = "{}");

// Nonnegative random bump combination vanishing near h, with analytic
// gradient; Lipschitz on the closed quarter domain.
TestFunction random_bumps(const stardomain::StarParams& p, uint64_t seed, int n_bumps = 5);

// The partner separable eigenfunction 2 cos(pi x1/2a) sin(pi x2/2b) in
// centered quarter-domain coordinates: vanishes on h, Neumann on v.
TestFunction separable_partner(const stardomain::StarParams& p);

}  // namespace neumann::rearrange

#endif
