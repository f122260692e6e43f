#ifndef NEUMANN_TRACER_HPP
#define NEUMANN_TRACER_HPP

#include <array>
#include <string>
#include <vector>

#include "neumann/common.hpp"
#include "neumann/morse.hpp"
#include "neumann/wavefield.hpp"

namespace neumann::tracer {

// Vertices are continuous in R^2 (lifted off the torus); consecutive points
// are closer than the integrator's step bound.
struct Polyline {
  std::vector<Vec2> points;

  double length() const;
  // Point at a given arclength measured from the front or the back.
  Vec2 at_arclength(double s, bool from_end = false) const;
  // Unit direction away from the chosen end, sampled at arclength delta.
  Vec2 end_direction(bool from_end, double delta) const;
};

struct TraceOptions {
  double saddle_offset = 1e-6;   // initial offset along the Hessian eigenvector
  double capture_radius = 1e-4;  // termination ball around extrema
  double max_arc_length = 4.0;   // EscapeError beyond this
  double max_step = 1e-3;        // also bounds polyline vertex spacing
  double rtol = 1e-9;
  double atol = 1e-12;
  double grad_switch = 1e-3;     // |grad| below this integrates the unit field
};

struct TracedLine {
  Polyline line;  // front() is the saddle, back() the captured extremum
  int saddle = -1;
  int extremum = -1;
  bool ascending = false;
  Vec2 initial_direction;
};

// Integrates dx/dt = +-grad(psi)/min(|grad|,s) from a saddle offset until an
// extremum of the matching kind captures the trajectory.
TracedLine trace_neumann_line(const wavefield::ScalarField& field,
                              const morse::CriticalSet& crit, int saddle_index, bool ascending,
                              int sign, const TraceOptions& opts = {});

enum class DomainKind { lens, wedge, star };
const char* kind_name(DomainKind kind);

struct NeumannDomain {
  // Four oriented boundary pieces forming a closed loop; piece k runs from
  // corners[k] to corners[(k+1)%4].
  std::vector<Polyline> boundary;
  std::array<int, 4> corners{-1, -1, -1, -1};
  int max_index = -1;
  int min_index = -1;
  std::array<int, 2> saddle_indices{-1, -1};
  DomainKind kind = DomainKind::star;
  double angle_at_max = 0.0;
  double angle_at_min = 0.0;
  double area = 0.0;
  double perimeter = 0.0;
  double rho = 0.0;
};

struct DomainCensus {
  std::vector<NeumannDomain> domains;
  int excluded_count = 0;  // faces dropped by tracing/assembly/classification
  int failed_lines = 0;
  int excluded_orbits = 0;     // face walks that were not quadrilaterals
  int excluded_closure = 0;    // lifted boundaries that failed to close
  int excluded_ambiguous = 0;  // classification failures
  double lambda = 0.0;
};

struct AssembleOptions {
  TraceOptions trace;
  double angle_probe = 1e-3;   // arclength at which corner tangents are taken
  double angle_order = 0.05;   // arclength for the angular ordering at extrema
  int threads = 1;
};

// Traces all four separatrices of every saddle, stitches them into the
// quadrilateral Neumann domains, classifies and measures each.
DomainCensus assemble_domains(const wavefield::ScalarField& field, const morse::CriticalSet& crit,
                              const AssembleOptions& opts = {});

struct ClassifyResult {
  DomainKind kind;
  double angle_at_max;
  double angle_at_min;
};

// Interior angle of the two boundary lines at each extremum: ~0 at both is
// star, ~pi at both lens, mixed wedge. Throws AmbiguousAngle when neither
// the angle thresholds nor the Hessian axes decide.
ClassifyResult classify_domain(const NeumannDomain& domain, const wavefield::ScalarField& field,
                               const morse::CriticalSet& crit, double angle_probe = 1e-3);

struct Geometry {
  double area;
  double perimeter;
  double rho;
};

// Shoelace area of the lifted boundary polygon, polyline perimeter, and
// rho = area*sqrt(lambda)/perimeter.
Geometry domain_geometry(const NeumannDomain& domain, double lambda);

struct RhoStatistics {
  double bin_width = 0.01;
  double lo = 0.0;
  double hi = 1.5;
  // index 0 = all domains, then lens/wedge/star as in DomainKind.
  std::array<std::vector<long>, 4> counts;
  std::array<long, 4> totals{0, 0, 0, 0};
  std::array<long, 4> exceed_ground{0, 0, 0, 0};
  std::array<long, 4> exceed_excited{0, 0, 0, 0};
  long excluded = 0;

  void add(DomainKind kind, double rho);
  void add_census(const DomainCensus& census);
  double fraction_exceeding_ground(int klass = 0) const;
  double fraction_exceeding_excited(int klass = 0) const;
};

RhoStatistics rho_statistics(const std::vector<DomainCensus>& censuses, double bin_width = 0.01,
                             double hi = 1.5);

void export_census_csv(const DomainCensus& census, const std::string& path,
                       const std::string& metadata = "");
void export_histogram_csv(const RhoStatistics& stats, const std::string& path,
                          const std::string& metadata = "");
void export_statistics_json(const RhoStatistics& stats, const std::string& path,
                            const std::string& config_json = "{}");

}  // namespace neumann::tracer

#endif
