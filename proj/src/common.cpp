#include "neumann/common.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <thread>

namespace neumann {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_argument: return "InvalidArgument";
    case ErrorCode::degenerate_critical: return "DegenerateCritical";
    case ErrorCode::no_convergence: return "NoConvergence";
    case ErrorCode::escape: return "EscapeError";
    case ErrorCode::assembly: return "AssemblyError";
    case ErrorCode::ambiguous_angle: return "AmbiguousAngle";
    case ErrorCode::fit: return "FitError";
    case ErrorCode::solver_failure: return "SolverFailure";
    case ErrorCode::area_mismatch: return "AreaMismatch";
    case ErrorCode::negative_input: return "NegativeInput";
    case ErrorCode::no_arc_found: return "NoArcFound";
    case ErrorCode::unclassifiable_shape: return "UnclassifiableShape";
    case ErrorCode::euler_violation: return "EulerViolation";
    case ErrorCode::io: return "IoError";
  }
  return "UnknownError";
}

void Sym2::eigen(std::array<double, 2>& values, std::array<Vec2, 2>& vectors) const {
  double half_tr = 0.5 * (xx + yy);
  double diff = 0.5 * (xx - yy);
  double disc = std::hypot(diff, xy);
  values[0] = half_tr - disc;
  values[1] = half_tr + disc;
  if (std::abs(xy) > 1e-300 * std::max(std::abs(xx), std::abs(yy))) {
    vectors[0] = Vec2{values[0] - yy, xy}.normalized();
    vectors[1] = Vec2{values[1] - yy, xy}.normalized();
    if (vectors[0].norm() < 0.5) vectors[0] = Vec2{xy, values[0] - xx}.normalized();
    if (vectors[1].norm() < 0.5) vectors[1] = Vec2{xy, values[1] - xx}.normalized();
  } else if (xx <= yy) {
    vectors[0] = {1, 0};
    vectors[1] = {0, 1};
  } else {
    vectors[0] = {0, 1};
    vectors[1] = {1, 0};
  }
}

Vec2 Sym2::solve(const Vec2& rhs) const {
  double d = det();
  return {(yy * rhs.x - xy * rhs.y) / d, (xx * rhs.y - xy * rhs.x) / d};
}

double torus_delta(double a, double b) {
  double d = b - a;
  d -= std::round(d);
  return d;
}

Vec2 torus_delta(const Vec2& a, const Vec2& b) {
  return {torus_delta(a.x, b.x), torus_delta(a.y, b.y)};
}

double torus_distance(const Vec2& a, const Vec2& b) { return torus_delta(a, b).norm(); }

int resolve_thread_count(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("NEUMANN_ATLAS_THREADS")) {
    int n = std::atoi(env);
    if (n > 0) return n;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& body) {
  threads = std::max(1, std::min<int>(threads, static_cast<int>(n)));
  if (threads == 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&]() {
      for (;;) {
        std::size_t i = next.fetch_add(1);
        if (i >= n) break;
        body(i);
      }
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace neumann
