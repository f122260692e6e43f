#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "neumann/isoperimetric.hpp"
#include "neumann/rearrange.hpp"

using namespace neumann;
using namespace neumann::rearrange;

TEST_CASE("constant function: flat profile, constant rearrangement") {
  stardomain::SectorParams sec{0.5, 1.0};
  auto samples = sector_samples(sec, 64, 32, [](Vec2) { return 2.5; });
  auto prof = level_profile(samples, 512);
  CHECK(prof.total_area == doctest::Approx(sec.area()).epsilon(1e-12));
  CHECK(prof.mu(1.0) == doctest::Approx(prof.total_area));
  CHECK(prof.mu(2.6) == 0.0);
  auto star = rearrange_to_sector(prof, sec);
  for (double r : {0.1, 0.4, 0.8, 0.99})
    CHECK(star.value(r) == doctest::Approx(2.5).epsilon(5e-3));
}

TEST_CASE("cone on a sector has the analytic profile") {
  stardomain::SectorParams sec{2.0, 1.0};
  auto samples = sector_samples(sec, 512, 64, [](Vec2 x) {
    return std::max(0.0, 1.0 - std::hypot(x.x, x.y));
  });
  auto prof = level_profile(samples, 512);
  // |{1 - r > t}| = alpha (1-t)^2 / 2
  for (double t : {0.2, 0.5, 0.8}) {
    double exact = 0.5 * sec.alpha * (1 - t) * (1 - t);
    CHECK(prof.mu(t) == doctest::Approx(exact).epsilon(5e-3));
  }
}

TEST_CASE("rearrangement is equimeasurable and nonincreasing") {
  stardomain::StarParams p{1.0, 0.1};
  auto f = random_bumps(p, 42);
  auto samples = quarter_samples(p, 512, 256, f.value);
  auto prof = level_profile(samples, 512);
  stardomain::SectorParams sec;
  sec.alpha = 0.2 * M_PI;
  sec.radius = std::sqrt(2.0 * prof.total_area / sec.alpha);
  auto star = rearrange_to_sector(prof, sec);

  double cell_area = prof.total_area / (512.0 * 256.0) * 400.0;  // a generous cell bound
  for (double tf : {0.15, 0.35, 0.55, 0.75, 0.95}) {
    double t = tf * prof.max_value;
    // measure |{psi* > t}| directly
    double area = 0.0;
    const int n_r = 20000;
    for (int i = 0; i < n_r; ++i) {
      double r0 = sec.radius * i / n_r, r1 = sec.radius * (i + 1) / n_r;
      if (star.value(0.5 * (r0 + r1)) > t) area += 0.5 * sec.alpha * (r1 * r1 - r0 * r0);
    }
    CHECK(std::abs(area - prof.mu(t)) < cell_area);
  }
  double prev = star.value(0.0);
  for (int k = 1; k <= 100; ++k) {
    double v = star.value(sec.radius * k / 100.0);
    CHECK(v <= prev + 1e-14);
    prev = v;
  }
}

TEST_CASE("norm identities under composition with borel maps") {
  stardomain::StarParams p{1.0, 0.1};
  auto f = random_bumps(p, 3);
  auto samples = quarter_samples(p, 512, 256, f.value);
  auto prof = level_profile(samples, 2048);
  stardomain::SectorParams sec;
  sec.alpha = 0.2 * M_PI;
  sec.radius = std::sqrt(2.0 * prof.total_area / sec.alpha);
  auto star = rearrange_to_sector(prof, sec);

  auto lhs_norm = [&](auto rho) {
    double acc = 0.0;
    for (size_t i = 0; i < samples.values.size(); ++i) {
      double r = rho(samples.values[i]);
      acc += r * r * samples.areas[i];
    }
    return std::sqrt(acc);
  };
  auto rhs_norm = [&](auto rho) {
    double acc = 0.0;
    const int n_r = 20000;
    for (int i = 0; i < n_r; ++i) {
      double r0 = sec.radius * i / n_r, r1 = sec.radius * (i + 1) / n_r;
      double v = rho(star.value(0.5 * (r0 + r1)));
      acc += v * v * 0.5 * sec.alpha * (r1 * r1 - r0 * r0);
    }
    return std::sqrt(acc);
  };
  auto ident = [](double x) { return x; };
  auto square = [](double x) { return x * x; };
  auto root = [](double x) { return std::sqrt(std::abs(x)); };
  CHECK(lhs_norm(ident) == doctest::Approx(rhs_norm(ident)).epsilon(1e-3));
  CHECK(lhs_norm(square) == doctest::Approx(rhs_norm(square)).epsilon(1e-3));
  CHECK(lhs_norm(root) == doctest::Approx(rhs_norm(root)).epsilon(1e-3));
}

TEST_CASE("monotone inputs give monotone rearrangements") {
  stardomain::StarParams p{1.0, 0.1};
  auto f = random_bumps(p, 5);
  TestFunction bigger;
  bigger.value = [f](Vec2 x) { return f.value(x) * 1.5 + 0.1 * f.value({x.x, x.y * 0.9}); };
  bigger.gradient = f.gradient;  // unused here
  auto s1 = quarter_samples(p, 384, 192, f.value);
  auto s2 = quarter_samples(p, 384, 192, bigger.value);
  auto prof1 = level_profile(s1, 512);
  auto prof2 = level_profile(s2, 512);
  stardomain::SectorParams sec;
  sec.alpha = 0.2 * M_PI;
  sec.radius = std::sqrt(2.0 * prof1.total_area / sec.alpha);
  auto star1 = rearrange_to_sector(prof1, sec);
  stardomain::SectorParams sec2 = sec;  // same area by construction
  auto star2 = rearrange_to_sector(prof2, sec2);
  for (int k = 0; k <= 50; ++k) {
    double r = sec.radius * k / 50.0;
    CHECK(star1.value(r) <= star2.value(r) + 1e-9);
  }
}

TEST_CASE("radial nonincreasing function rearranges to itself") {
  stardomain::SectorParams sec{0.2 * M_PI, 1.0};
  auto psi = [](double r) { return std::cos(0.5 * M_PI * r); };
  // one cell per ring, valued at the ring's inner radius: the empirical
  // level profile of a radial nonincreasing function is then exact, since
  // {psi > psi(r_i)} is exactly the diskful of rings inside r_i
  SampleSet samples;
  const int n_rings = 8192;
  for (int i = 0; i < n_rings; ++i) {
    double r0 = sec.radius * i / n_rings, r1 = sec.radius * (i + 1) / n_rings;
    samples.values.push_back(psi(r0));
    samples.areas.push_back(0.5 * sec.alpha * (r1 * r1 - r0 * r0));
    samples.total_area += samples.areas.back();
  }
  auto prof = level_profile(samples, 0);
  auto star = rearrange_to_sector(prof, sec);
  // the rearrangement reproduces the function
  for (double r : {0.05, 0.3, 0.6, 0.9}) {
    CHECK(star.value(r) == doctest::Approx(psi(r)).epsilon(1e-6));
  }
  // Dirichlet integrals agree to 1e-6 relative
  double exact = 0.0;
  const int n_r = 200000;
  for (int i = 0; i < n_r; ++i) {
    double r0 = sec.radius * i / n_r, r1 = sec.radius * (i + 1) / n_r;
    double rm = 0.5 * (r0 + r1);
    double slope_exact = (psi(r1) - psi(r0)) / (r1 - r0);
    exact += slope_exact * slope_exact * sec.alpha * rm * (r1 - r0);
  }
  CHECK(star.dirichlet_energy() == doctest::Approx(exact).epsilon(1e-6));
}

TEST_CASE("gradient inequality holds for the partner eigenfunction and for bumps") {
  stardomain::StarParams p{1.0, 0.1};
  auto check_eig = gradient_inequality_check(p, separable_partner(p), 0.2 * M_PI);
  CHECK(check_eig.holds);
  CHECK(check_eig.lhs < check_eig.rhs);
  for (uint64_t seed = 1; seed <= 10; ++seed) {
    auto check = gradient_inequality_check(p, random_bumps(p, seed), 0.2 * M_PI, 256, 128, 512);
    CHECK(check.holds);
  }
}

TEST_CASE("perimeter inequality holds below alpha_max and fails above") {
  stardomain::StarParams p{1.0, 0.2};
  auto report = perimeter_inequality_check(p, separable_partner(p), 0.2 * M_PI, 384, 192, 48);
  CHECK(report.fraction_holds == doctest::Approx(1.0));

  // alpha far above pi/4 with a corner-concentrated function: must fail somewhere
  TestFunction corner;
  corner.value = [p](Vec2 x) {
    double r2 = x.x * x.x + (x.y - p.b) * (x.y - p.b);
    return std::exp(-r2 / (0.08 * p.b * p.b)) * x.y / p.b;
  };
  corner.gradient = [](Vec2) { return Vec2{0, 0}; };
  auto bad = perimeter_inequality_check(p, corner, 0.9 * M_PI, 384, 192, 48);
  CHECK(bad.fraction_holds < 1.0);

  auto tmp = (std::filesystem::temp_directory_path() / "na_rearrange_report.json").string();
  export_report_json(report, tmp, "{\"alpha\":0.628}");
  CHECK(std::filesystem::file_size(tmp) > 0);
}

TEST_CASE("arc-minimizer level sets have F/alpha above alpha_max/alpha") {
  stardomain::StarParams p{1.0, 0.2};
  double alpha = 0.2 * M_PI;
  double area = stardomain::quarter_area(p);
  for (double frac : {0.02, 0.1, 0.25}) {
    auto arc = isoperimetric::arc_minimizer(p, frac * area);
    double F = isoperimetric::F_functional(arc.boundary_h_length, arc.eta);
    CHECK(F / alpha > (M_PI / 4) / alpha);
    CHECK(F / alpha > 1.0);
  }
}

TEST_CASE("negative inputs are rejected") {
  stardomain::SectorParams sec{1.0, 1.0};
  auto samples = sector_samples(sec, 32, 16, [](Vec2 x) { return x.x - 10.0; });
  CHECK_THROWS_AS((void)level_profile(samples, 64), Error);
}

TEST_CASE("area mismatch is rejected") {
  stardomain::SectorParams sec{1.0, 1.0};
  auto samples = sector_samples(sec, 64, 16, [](Vec2 x) { return 1.0 + x.x; });
  auto prof = level_profile(samples, 64);
  stardomain::SectorParams wrong{1.0, 1.1};
  CHECK_THROWS_AS((void)rearrange_to_sector(prof, wrong), Error);
}
