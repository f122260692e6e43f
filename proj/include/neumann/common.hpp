#ifndef NEUMANN_COMMON_HPP
#define NEUMANN_COMMON_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace neumann {

enum class ErrorCode {
  invalid_argument,
  degenerate_critical,
  no_convergence,
  escape,
  assembly,
  ambiguous_angle,
  fit,
  solver_failure,
  area_mismatch,
  negative_input,
  no_arc_found,
  unclassifiable_shape,
  euler_violation,
  io,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2() = default;
  Vec2(double x_, double y_) : x(x_), y(y_) {}

  Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  Vec2& operator+=(const Vec2& o) {
    x += o.x;
    y += o.y;
    return *this;
  }
  double dot(const Vec2& o) const { return x * o.x + y * o.y; }
  double cross(const Vec2& o) const { return x * o.y - y * o.x; }
  double norm() const { return std::hypot(x, y); }
  Vec2 normalized() const {
    double n = norm();
    return n > 0 ? Vec2{x / n, y / n} : Vec2{0, 0};
  }
};

inline Vec2 operator*(double s, const Vec2& v) { return v * s; }

// Symmetric 2x2 matrix, used for Hessians.
struct Sym2 {
  double xx = 0.0;
  double xy = 0.0;
  double yy = 0.0;

  double det() const { return xx * yy - xy * xy; }
  double trace() const { return xx + yy; }

  // Eigenvalues sorted ascending, with matching unit eigenvectors.
  void eigen(std::array<double, 2>& values, std::array<Vec2, 2>& vectors) const;

  Vec2 solve(const Vec2& rhs) const;
};

// Wrap a coordinate into [0, 1).
inline double wrap01(double x) {
  double w = x - std::floor(x);
  return (w >= 1.0) ? 0.0 : w;
}

inline Vec2 wrap01(const Vec2& p) { return {wrap01(p.x), wrap01(p.y)}; }

// Shortest signed displacement from a to b on the unit torus, component-wise in (-1/2, 1/2].
double torus_delta(double a, double b);
Vec2 torus_delta(const Vec2& a, const Vec2& b);
double torus_distance(const Vec2& a, const Vec2& b);

// SplitMix64: the counter-based generator used for every stochastic input.
// Fully specified so runs reproduce bit-identically across platforms.
struct SplitMix64 {
  uint64_t state;

  explicit SplitMix64(uint64_t seed) : state(seed) {}

  uint64_t next() {
    uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in (0, 1]: never returns 0, so it is safe inside log().
  double uniform() { return (next() >> 11) * 0x1.0p-53 + 0x1.0p-54; }

  // Standard normal via Box-Muller.
  double gaussian() {
    double u1 = uniform();
    double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }
};

// Number of worker threads: explicit argument wins, then NEUMANN_ATLAS_THREADS,
// then hardware concurrency.
int resolve_thread_count(int requested = 0);

// Index-parallel loop with deterministic semantics: the body must only write
// state owned by its index. Runs inline when threads == 1.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& body);

}  // namespace neumann

#endif
