#include <doctest.h>

#include <cmath>

#include "neumann/special.hpp"
#include "neumann/stardomain.hpp"

using namespace neumann;
using namespace neumann::stardomain;

TEST_CASE("gamma boundary endpoint values") {
  StarParams p{1.0, 0.4};
  CHECK(gamma_boundary(p, 0.0) == doctest::Approx(0.4).epsilon(1e-14));
  CHECK(gamma_boundary(p, 1.0) == doctest::Approx(0.0));
  CHECK(gamma_boundary(p, -1.0) == doctest::Approx(0.0));
}

TEST_CASE("gamma for a=b is the triangle profile") {
  StarParams p{0.5, 0.5};
  for (double x : {0.0, 0.1, 0.25, 0.4, 0.49}) {
    CHECK(gamma_boundary(p, x) == doctest::Approx(0.5 - x).epsilon(1e-12));
    CHECK(gamma_derivative(p, x) == doctest::Approx(-1.0).epsilon(1e-9));
  }
}

TEST_CASE("gamma is even, decreasing and convex") {
  StarParams p{1.0, 0.3};
  double prev = gamma_boundary(p, 0.0);
  double prev2 = 0;
  const int n = 2000;
  for (int k = 1; k <= n; ++k) {
    double x = k * (p.a / n);
    double g = gamma_boundary(p, x);
    CHECK(gamma_boundary(p, -x) == doctest::Approx(g));
    CHECK(g <= prev + 1e-15);
    if (k >= 2) CHECK(g - 2 * prev + prev2 >= -1e-10);
    prev2 = prev;
    prev = g;
  }
}

TEST_CASE("lambda_ab") {
  CHECK(lambda_ab({1, 1}) == doctest::Approx(M_PI * M_PI / 2).epsilon(1e-14));
  CHECK(lambda_ab({0.25, 0.25}) == doctest::Approx(8 * M_PI * M_PI).epsilon(1e-14));
  double base = lambda_ab({1.0, 0.4});
  CHECK(lambda_ab({2.0, 0.8}) == doctest::Approx(base / 4.0).epsilon(1e-13));
  CHECK(lambda_ab({0.5, 0.2}) == doctest::Approx(base * 4.0).epsilon(1e-13));
}

TEST_CASE("quarter area: triangle case and scaling") {
  CHECK(quarter_area({1, 1}) == doctest::Approx(0.5).epsilon(1e-11));
  CHECK(quarter_area({0.25, 0.25}) == doctest::Approx(0.25 * 0.25 / 2).epsilon(1e-11));
  double base = quarter_area({1.0, 0.2});
  CHECK(quarter_area({2.0, 0.4}) == doctest::Approx(4.0 * base).epsilon(1e-11));
}

TEST_CASE("quarter area approaches the gaussian limit as b -> 0") {
  const double gamma_c = special::constants().gamma_area;
  double prev_ratio = 0.0;
  for (int k = 2; k <= 10; ++k) {
    double b = std::pow(2.0, -k);
    double ratio = quarter_area({1.0, b}) / (b * b);
    CHECK(ratio < gamma_c);
    CHECK(ratio > prev_ratio);  // monotone toward the limit
    prev_ratio = ratio;
  }
  double b = 1e-2;
  double ratio = quarter_area({1.0, b});
  CHECK(std::abs(ratio / (b * b) - gamma_c) < 1.0 * b);
}

TEST_CASE("cos-power remainder: positivity, monotonicity, reference value") {
  StarParams p{1.0, 1.0};
  // R(0.5) = 1 - cos(pi/4) exp(pi^2/32)
  long double ref = 1.0L - std::cos(M_PI / 4.0L) * std::exp(M_PI * M_PI / 32.0L);
  CHECK(cos_power_remainder(p, 0.5) == doctest::Approx(static_cast<double>(ref)).epsilon(1e-12));
  StarParams q{1.0, 0.05};
  double prev = 0.0;
  for (double x : {0.01, 0.02, 0.05, 0.1, 0.2, 0.4}) {
    double r = cos_power_remainder(q, x);
    CHECK(r > 0.0);
    CHECK(r > prev);
    prev = r;
  }
}

TEST_CASE("cos-power remainder obeys the small-b bound at x = b^0.75") {
  // R(x) = O(x^4/b^2); at x = b^beta with beta=3/4 this is O(b).
  double b = 1e-2;
  StarParams p{1.0, b};
  double x = std::pow(b, 0.75);
  double r = cos_power_remainder(p, x);
  // pi^4/192 ~ 0.507 is the leading coefficient
  CHECK(r <= 0.7 * b);
  CHECK(r >= 0.3 * b);
}

TEST_CASE("boundary asymptotics: wedge slope and cusp exponent") {
  auto r1 = boundary_asymptotics_check({1.0, 0.3});
  CHECK(std::abs(r1.wedge_slope + 1.0) < 1e-3);
  auto r2 = boundary_asymptotics_check({1.0, 0.5});
  CHECK(std::abs(r2.cusp_exponent - 4.0) < 1e-2);
  auto r3 = boundary_asymptotics_check({0.7, 0.7});
  CHECK(std::abs(r3.cusp_exponent - 1.0) < 1e-2);
}

TEST_CASE("sector ground state") {
  auto gs = sector_ground_state({0.25 * M_PI, 1.0});
  CHECK(gs.lambda == doctest::Approx(5.7832).epsilon(1e-4));
  CHECK(std::abs(gs.profile(1.0)) < 1e-12);
  CHECK(gs.profile(0.0) == doctest::Approx(1.0));
  auto gs2 = sector_ground_state({0.25 * M_PI, 2.0});
  CHECK(gs2.lambda == doctest::Approx(gs.lambda / 4).epsilon(1e-12));
}

TEST_CASE("reference sector has equal area") {
  StarParams p{1.0, 0.2};
  double alpha = 0.5;
  auto sec = reference_sector(p, alpha);
  CHECK(sec.area() == doctest::Approx(quarter_area(p)).epsilon(1e-12));
}

TEST_CASE("admissibility window") {
  auto good = admissibility_window({1.0, 0.05});
  CHECK(good.feasible);
  CHECK(good.alpha_lo < good.alpha_hi);
  CHECK(good.margin > 0);
  auto bad = admissibility_window({1.0, 1.0});
  CHECK(!bad.feasible);
}

TEST_CASE("rho star and lens") {
  auto diamond = rho_star_lens({0.25, 0.25});
  CHECK(diamond.rho_star == doctest::Approx(M_PI / 4).epsilon(1e-11));
  CHECK(diamond.rho_lens == doctest::Approx(M_PI / 4).epsilon(1e-11));
  auto pair = rho_star_lens({1.0, 0.25});
  CHECK(pair.rho_star < pair.rho_lens);
  // ratio invariance
  auto scaled = rho_star_lens({2.0, 0.5});
  CHECK(std::abs(scaled.rho_star - pair.rho_star) < 1e-10);
  CHECK(std::abs(scaled.rho_lens - pair.rho_lens) < 1e-10);
}

TEST_CASE("b > a is rejected") {
  CHECK_THROWS_AS(StarParams(0.2, 0.5), Error);
}
