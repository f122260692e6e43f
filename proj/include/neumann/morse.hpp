#ifndef NEUMANN_MORSE_HPP
#define NEUMANN_MORSE_HPP

#include <array>
#include <string>
#include <vector>

#include "neumann/common.hpp"
#include "neumann/wavefield.hpp"

namespace neumann::morse {

enum class CriticalKind { maximum, minimum, saddle };

const char* kind_name(CriticalKind kind);

struct CriticalPoint {
  Vec2 position;  // wrapped into [0,1)^2
  CriticalKind kind = CriticalKind::saddle;
  double value = 0.0;
  std::array<double, 2> hessian_eigs{};  // ascending
  std::array<Vec2, 2> hessian_axes{};    // matching unit eigenvectors
};

struct CriticalSet {
  std::vector<CriticalPoint> points;
  int n_max = 0;
  int n_min = 0;
  int n_saddle = 0;

  std::vector<int> indices_of(CriticalKind kind) const;
  // Euler characteristic of the torus: n_max + n_min - n_saddle must be 0.
  int euler_defect() const { return n_max + n_min - n_saddle; }
};

struct RefineOptions {
  double gradient_tol = 1e-12;
  double degenerate_tol = 1e-8;  // |det H| below this is rejected as non-Morse
  int max_iterations = 50;
  double max_step = 0.0;  // 0 = unlimited Newton steps
};

// Newton iteration on the exact gradient from `approx`; classifies by the
// Hessian signature at the refined point.
CriticalPoint refine_critical_point(const wavefield::ScalarField& field, Vec2 approx,
                                    const RefineOptions& opts = {});

struct DetectOptions {
  RefineOptions refine;
  int scan_resolution = 0;  // 0 = use the field's own sample resolution
};

// Sign-change cell scan on the exact gradient grid, Newton refinement,
// dedup at radius 1/(4*scan_resolution), Euler-relation validation.
CriticalSet find_critical_points(const wavefield::ScalarField& field,
                                 const DetectOptions& opts = {});

void export_critical_csv(const CriticalSet& set, const std::string& path,
                         const std::string& metadata = "");

}  // namespace neumann::morse

#endif
