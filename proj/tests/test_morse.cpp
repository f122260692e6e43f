#include <doctest.h>

#include <cmath>

#include "neumann/morse.hpp"
#include "neumann/wavefield.hpp"

using namespace neumann;
using namespace neumann::morse;

namespace {

bool has_point_near(const CriticalSet& set, Vec2 pos, CriticalKind kind, double tol) {
  for (const auto& cp : set.points)
    if (cp.kind == kind && torus_distance(cp.position, pos) < tol) return true;
  return false;
}

}  // namespace

TEST_CASE("separable (1,1): the eight analytic critical points") {
  auto field = wavefield::sample_separable(1, 1, 512);
  auto set = find_critical_points(field);
  CHECK(set.n_max == 2);
  CHECK(set.n_min == 2);
  CHECK(set.n_saddle == 4);
  CHECK(has_point_near(set, {0.0, 0.0}, CriticalKind::maximum, 1e-8));
  CHECK(has_point_near(set, {0.5, 0.5}, CriticalKind::maximum, 1e-8));
  CHECK(has_point_near(set, {0.0, 0.5}, CriticalKind::minimum, 1e-8));
  CHECK(has_point_near(set, {0.5, 0.0}, CriticalKind::minimum, 1e-8));
  for (double x : {0.25, 0.75})
    for (double y : {0.25, 0.75}) CHECK(has_point_near(set, {x, y}, CriticalKind::saddle, 1e-8));
}

TEST_CASE("euler relation holds for random waves") {
  for (uint64_t seed : {1ull, 2ull, 3ull}) {
    auto field = wavefield::sample_random_wave(wavefield::random_wave_spec(65, seed), 256);
    auto set = find_critical_points(field);
    CHECK(set.euler_defect() == 0);
    CHECK(set.n_saddle > 0);
  }
}

TEST_CASE("refinement converges to the saddle from a coarse guess") {
  auto field = wavefield::sample_separable(1, 1, 64);
  auto cp = refine_critical_point(field, {0.26, 0.24});
  CHECK(cp.kind == CriticalKind::saddle);
  CHECK(torus_distance(cp.position, {0.25, 0.25}) < 1e-10);
}

TEST_CASE("refinement at an exact critical point is a fixed point") {
  auto field = wavefield::sample_separable(1, 1, 64);
  auto cp = refine_critical_point(field, {0.0, 0.0});
  CHECK(cp.kind == CriticalKind::maximum);
  CHECK(cp.position.x == doctest::Approx(0.0));
  CHECK(cp.value == doctest::Approx(2.0));
}

TEST_CASE("refined points have tiny gradients and refinement is idempotent") {
  auto field = wavefield::sample_random_wave(wavefield::random_wave_spec(65, 7), 512);
  auto set = find_critical_points(field);
  REQUIRE(!set.points.empty());
  for (size_t k = 0; k < set.points.size(); k += 5) {
    const auto& cp = set.points[k];
    CHECK(field.gradient(cp.position.x, cp.position.y).norm() < 1e-12);
    auto again = refine_critical_point(field, cp.position);
    CHECK(torus_distance(again.position, cp.position) < 1e-10);
  }
}

TEST_CASE("scan resolution does not change the refined critical set") {
  auto field = wavefield::sample_random_wave(wavefield::random_wave_spec(65, 7), 512);
  DetectOptions base;
  auto set1 = find_critical_points(field, base);
  DetectOptions doubled;
  doubled.scan_resolution = 1024;
  auto set2 = find_critical_points(field, doubled);
  REQUIRE(set1.points.size() == set2.points.size());
  CHECK(set1.n_max == set2.n_max);
  CHECK(set1.n_saddle == set2.n_saddle);
  for (const auto& cp : set1.points) CHECK(has_point_near(set2, cp.position, cp.kind, 1e-9));
}

TEST_CASE("counts match an exhaustive fine-grid scan") {
  auto field = wavefield::sample_random_wave(wavefield::random_wave_spec(65, 7), 512);
  auto set = find_critical_points(field);
  DetectOptions fine;
  fine.scan_resolution = 2048;
  auto oracle = find_critical_points(field, fine);
  CHECK(set.n_max == oracle.n_max);
  CHECK(set.n_min == oracle.n_min);
  CHECK(set.n_saddle == oracle.n_saddle);
}
