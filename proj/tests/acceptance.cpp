// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Run through ctest as `acceptance`, or directly with an optional
// `--only N` argument.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "neumann/isoperimetric.hpp"
#include "neumann/morse.hpp"
#include "neumann/rearrange.hpp"
#include "neumann/special.hpp"
#include "neumann/spectral.hpp"
#include "neumann/stardomain.hpp"
#include "neumann/tracer.hpp"
#include "neumann/wavefield.hpp"

using namespace neumann;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

#define REQUIRE_NEAR(x, ref, tol, what)                                     \
  do {                                                                      \
    double x_ = (x), ref_ = (ref), tol_ = (tol);                            \
    if (!(std::abs(x_ - ref_) <= tol_)) {                                   \
      out.pass = false;                                                     \
      append(out, std::string(what) + " off: got " + std::to_string(x_) +   \
                      " want " + std::to_string(ref_) + " +- " +            \
                      std::to_string(tol_));                                \
    }                                                                       \
  } while (0)

#define REQUIRE_TRUE(cond, what)                    \
  do {                                              \
    if (!(cond)) {                                  \
      out.pass = false;                             \
      append(out, std::string("failed: ") + what);  \
    }                                               \
  } while (0)

void append(Outcome& out, const std::string& msg) {
  if (!out.detail.empty()) out.detail += "; ";
  out.detail += msg;
}

// ---- 1: special-function constants --------------------------------------
Outcome criterion_constants() {
  Outcome out;
  const auto& c = special::constants();
  REQUIRE_NEAR(c.j0, 2.4048, 1e-4, "j0");
  REQUIRE_NEAR(c.j1p, 1.8411, 1e-4, "j1'");
  REQUIRE_NEAR(c.rho_ground, 0.9206, 1e-4, "j1'/2");
  REQUIRE_NEAR(c.rho_excited, 1.3019, 1e-4, "j1'/sqrt(2)");
  std::ostringstream ss;
  ss << "j0=" << c.j0 << " j1p=" << c.j1p;
  append(out, ss.str());
  return out;
}

// ---- 2: area constant by two quadratures ---------------------------------
Outcome criterion_area_constant() {
  Outcome out;
  const auto& c = special::constants();
  double route2 = special::gamma_area_tanh_sinh();
  REQUIRE_NEAR(c.gamma_area, 0.6080, 1e-4, "gamma (Gauss-Kronrod route)");
  REQUIRE_NEAR(route2, 0.6080, 1e-4, "gamma (tanh-sinh route)");
  REQUIRE_NEAR(c.alpha_min / M_PI, 0.1652, 1e-3, "alpha_min/pi");
  std::ostringstream ss;
  ss << "gamma=" << c.gamma_area << " vs " << route2 << ", alpha_min/pi=" << c.alpha_min / M_PI;
  append(out, ss.str());
  return out;
}

// ---- 3: quarter-area asymptotics -----------------------------------------
Outcome criterion_area_asymptotics() {
  Outcome out;
  const double gamma_c = special::constants().gamma_area;
  std::vector<double> logb, logerr;
  for (int k = 4; k <= 10; ++k) {
    double b = std::pow(2.0, -k);
    double ratio = stardomain::quarter_area({1.0, b}) / (b * b);
    double err = std::abs(ratio - gamma_c);
    REQUIRE_TRUE(err > 0, "zero error term");
    logb.push_back(std::log(b));
    logerr.push_back(std::log(err));
  }
  // least-squares slope of log err against log b = empirical order
  double n = logb.size(), sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < logb.size(); ++i) {
    sx += logb[i];
    sy += logerr[i];
    sxx += logb[i] * logb[i];
    sxy += logb[i] * logerr[i];
  }
  double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  REQUIRE_TRUE(slope >= 1.0, "empirical order in b below 1: " + std::to_string(slope));
  append(out, "order=" + std::to_string(slope));
  return out;
}

// ---- 4: separable census ---------------------------------------------------
Outcome criterion_separable_census() {
  Outcome out;
  auto field = wavefield::sample_separable(1, 1, 512);
  auto crit = morse::find_critical_points(field);
  REQUIRE_TRUE(crit.n_max == 2 && crit.n_min == 2 && crit.n_saddle == 4,
               "critical counts not 2/2/4");
  auto near = [&](Vec2 pos, morse::CriticalKind kind) {
    for (const auto& cp : crit.points)
      if (cp.kind == kind && torus_distance(cp.position, pos) < 1e-8) return true;
    return false;
  };
  REQUIRE_TRUE(near({0, 0}, morse::CriticalKind::maximum), "max at (0,0)");
  REQUIRE_TRUE(near({0.5, 0.5}, morse::CriticalKind::maximum), "max at (1/2,1/2)");
  REQUIRE_TRUE(near({0, 0.5}, morse::CriticalKind::minimum), "min at (0,1/2)");
  REQUIRE_TRUE(near({0.5, 0}, morse::CriticalKind::minimum), "min at (1/2,0)");
  for (double x : {0.25, 0.75})
    for (double y : {0.25, 0.75})
      REQUIRE_TRUE(near({x, y}, morse::CriticalKind::saddle), "saddle position");

  auto census = tracer::assemble_domains(field, crit);
  REQUIRE_TRUE(census.domains.size() == 8, "expected 8 domains, got " +
                                               std::to_string(census.domains.size()));
  double total = 0;
  int stars = 0;
  for (const auto& d : census.domains) {
    total += d.area;
    REQUIRE_TRUE(d.kind != tracer::DomainKind::wedge, "wedge domain in the separable census");
    if (d.kind == tracer::DomainKind::star) {
      ++stars;
      REQUIRE_NEAR(d.rho, M_PI / 4, 1e-4, "star rho");
    }
  }
  REQUIRE_NEAR(total, 1.0, 1e-3, "total census area");
  REQUIRE_TRUE(stars == 4, "expected 4 star domains");
  append(out, "area=" + std::to_string(total));
  return out;
}

// ---- 5: traced vs analytic flow lines -------------------------------------
double point_segment_distance(Vec2 p, Vec2 a, Vec2 b) {
  Vec2 ab = b - a;
  double len2 = ab.dot(ab);
  double t = len2 > 0 ? std::clamp((p - a).dot(ab) / len2, 0.0, 1.0) : 0.0;
  return (p - (a + ab * t)).norm();
}

double directed_hausdorff(const std::vector<Vec2>& from, const std::vector<Vec2>& to) {
  double worst = 0.0;
  for (const auto& p : from) {
    double best = 1e300;
    for (size_t i = 1; i < to.size(); ++i)
      best = std::min(best, point_segment_distance(p, to[i - 1], to[i]));
    worst = std::max(worst, best);
  }
  return worst;
}

Outcome criterion_flow_lines() {
  Outcome out;
  auto field = wavefield::sample_separable(1, 2, 256);
  auto crit = morse::find_critical_points(field);
  stardomain::StarParams p{0.25, 0.125};
  tracer::TraceOptions opts;
  opts.max_step = 5e-4;

  double worst = 0.0;
  for (double saddle_y : {0.125, 0.875}) {
    int saddle = -1;
    for (size_t i = 0; i < crit.points.size(); ++i)
      if (crit.points[i].kind == morse::CriticalKind::saddle &&
          torus_distance(crit.points[i].position, {0.25, saddle_y}) < 1e-6)
        saddle = static_cast<int>(i);
    REQUIRE_TRUE(saddle >= 0, "saddle not found");
    if (saddle < 0) return out;
    for (int sign : {1, -1}) {
      for (bool ascending : {true, false}) {
        auto line = tracer::trace_neumann_line(field, crit, saddle, ascending, sign, opts);
        // map into the chart centered on the star at (1/4, 0)
        std::vector<Vec2> traced = line.line.points;
        for (auto& pt : traced) {
          pt.x = wrap01(pt.x) - 0.25;
          if (pt.x > 0.5) pt.x -= 1.0;
          pt.y = wrap01(pt.y);
          if (pt.y > 0.5) pt.y -= 1.0;
        }
        // this line might belong to the lens partner; only compare boundary
        // lines of the star tile |x1|<=a, |x2|<=b
        bool in_tile = true;
        for (const auto& pt : traced)
          if (std::abs(pt.x) > 0.25 + 1e-6 || std::abs(pt.y) > 0.125 + 1e-6) in_tile = false;
        if (!in_tile) continue;
        double side = traced[1].y > 0 ? 1.0 : -1.0;
        double x_lo = std::min(traced.front().x, traced.back().x);
        double x_hi = std::max(traced.front().x, traced.back().x);
        std::vector<Vec2> analytic;
        for (int k = 0; k <= 4000; ++k) {
          double x = x_lo + (x_hi - x_lo) * k / 4000.0;
          analytic.push_back({x, side * stardomain::flow_line(p, 0.5 * M_PI, x)});
        }
        double d = std::max(directed_hausdorff(traced, analytic),
                            directed_hausdorff(analytic, traced));
        worst = std::max(worst, d);
      }
    }
  }
  REQUIRE_TRUE(worst < 1e-5, "Hausdorff distance " + std::to_string(worst));
  append(out, "hausdorff=" + std::to_string(worst));
  return out;
}

// ---- 6: desk-scale random-wave statistics ---------------------------------
Outcome criterion_random_wave_stats() {
  Outcome out;
  const int realizations = 200;
  std::vector<tracer::DomainCensus> censuses;
  int failed = 0;
  for (int k = 0; k < realizations; ++k) {
    try {
      auto spec = wavefield::random_wave_spec(65, 1 + static_cast<uint64_t>(k));
      auto field = wavefield::sample_random_wave(spec, 512);
      auto crit = morse::find_critical_points(field);
      tracer::AssembleOptions opts;
      opts.trace.max_step = 2e-3;
      censuses.push_back(tracer::assemble_domains(field, crit, opts));
    } catch (const Error&) {
      ++failed;
    }
  }
  REQUIRE_TRUE(failed < realizations / 10, "too many failed realizations");
  auto stats = tracer::rho_statistics(censuses);
  REQUIRE_TRUE(stats.totals[1] > 0 && stats.totals[2] > 0 && stats.totals[3] > 0,
               "missing a domain type");
  double overall = stats.fraction_exceeding_ground(0);
  REQUIRE_TRUE(overall >= 0.15 && overall <= 0.27,
               "overall exceedance " + std::to_string(overall) + " outside [0.15, 0.27]");
  double lens = stats.fraction_exceeding_ground(1);
  double wedge = stats.fraction_exceeding_ground(2);
  REQUIRE_TRUE(lens > wedge, "lens exceedance must dominate wedge exceedance");
  std::ostringstream ss;
  ss << "domains=" << stats.totals[0] << " overall=" << overall << " lens=" << lens
     << " wedge=" << wedge << " excluded=" << stats.excluded << " failed_realizations=" << failed;
  append(out, ss.str());
  return out;
}

// ---- 7: sector eigensolver oracle -----------------------------------------
Outcome criterion_sector_solver() {
  Outcome out;
  const auto& c = special::constants();
  double exact = c.j0 * c.j0;
  auto res = spectral::solve_sector(0.25 * M_PI, 1.0, 10000);
  REQUIRE_TRUE(std::abs(res.eigenvalue - exact) / exact < 0.01,
               "fine-level sector eigenvalue off by " +
                   std::to_string(std::abs(res.eigenvalue - exact) / exact));
  REQUIRE_TRUE(std::abs(res.extrapolated - exact) / exact < 0.001,
               "extrapolated sector eigenvalue off by " +
                   std::to_string(std::abs(res.extrapolated - exact) / exact));
  std::ostringstream ss;
  ss << "lambda=" << res.eigenvalue << " extrapolated=" << res.extrapolated << " exact=" << exact;
  append(out, ss.str());
  return out;
}

// ---- 8: main-theorem verification ------------------------------------------
Outcome criterion_main_theorem() {
  Outcome out;
  for (double b : {0.05, 0.1, 0.2}) {
    auto gap = spectral::ground_state_gap({1.0, b}, 40000);
    double exact = stardomain::lambda_ab({1.0, b});
    double rel = std::abs(gap.lambda_v - exact) / exact;
    REQUIRE_TRUE(rel < 0.01,
                 "lambda_v off by " + std::to_string(rel) + " at b=" + std::to_string(b));
    REQUIRE_TRUE(gap.gap > 0, "gap not positive at b=" + std::to_string(b));
    REQUIRE_TRUE(gap.gap > 3.0 * gap.error_estimate,
                 "gap margin below 3x extrapolation error at b=" + std::to_string(b));
    std::ostringstream ss;
    ss << "b=" << b << ": lambda_v=" << gap.lambda_v << " lambda_h=" << gap.lambda_h
       << " gap=" << gap.gap << " err=" << gap.error_estimate;
    append(out, ss.str());
  }
  return out;
}

// ---- 9: rearrangement properties -------------------------------------------
Outcome criterion_rearrangement() {
  Outcome out;
  stardomain::StarParams p{1.0, 0.1};
  const double alpha = 0.2 * M_PI;
  const int nu = 384, nw = 192, thresholds = 512;
  for (uint64_t seed = 1; seed <= 20; ++seed) {
    auto f = rearrange::random_bumps(p, seed);
    auto samples = rearrange::quarter_samples(p, nu, nw, f.value);
    auto prof = rearrange::level_profile(samples, thresholds);
    stardomain::SectorParams sec;
    sec.alpha = alpha;
    sec.radius = std::sqrt(2.0 * prof.total_area / alpha);
    auto star = rearrange::rearrange_to_sector(prof, sec);

    // equimeasurability within 1e-3 of the total area
    double max_err = 0.0;
    const int n_r = 8192;
    for (int k = 1; k <= 8; ++k) {
      double t = prof.max_value * k / 9.0;
      double area = 0.0;
      for (int i = 0; i < n_r; ++i) {
        double r0 = sec.radius * i / n_r, r1 = sec.radius * (i + 1) / n_r;
        if (star.value(0.5 * (r0 + r1)) > t) area += 0.5 * alpha * (r1 * r1 - r0 * r0);
      }
      max_err = std::max(max_err, std::abs(area - prof.mu(t)));
    }
    REQUIRE_TRUE(max_err < 1e-3 * prof.total_area,
                 "equimeasurability error at seed " + std::to_string(seed));

    // norm identity within 1e-3
    double norm2 = 0.0;
    for (size_t i = 0; i < samples.values.size(); ++i)
      norm2 += samples.values[i] * samples.values[i] * samples.areas[i];
    double norm2_star = 0.0;
    for (int i = 0; i < n_r; ++i) {
      double r0 = sec.radius * i / n_r, r1 = sec.radius * (i + 1) / n_r;
      double v = star.value(0.5 * (r0 + r1));
      norm2_star += v * v * 0.5 * alpha * (r1 * r1 - r0 * r0);
    }
    double rel = std::abs(std::sqrt(norm2) - std::sqrt(norm2_star)) / std::sqrt(norm2);
    REQUIRE_TRUE(rel < 1e-3, "norm identity off by " + std::to_string(rel) + " at seed " +
                                 std::to_string(seed));

    auto grad = rearrange::gradient_inequality_check(p, f, alpha, nu, nw, thresholds);
    REQUIRE_TRUE(grad.holds, "gradient inequality failed at seed " + std::to_string(seed));
  }
  append(out, "20 seeded bump functions verified");
  return out;
}

// ---- 10: isoperimetric infimum and Cheeger bound ----------------------------
Outcome criterion_isoperimetric() {
  Outcome out;
  stardomain::StarParams p{1.0, 0.05};
  double area = stardomain::quarter_area(p);
  // F along the orthogonally attached family on [1e-6, 0.3]|Lambda|
  double min_F = 1e300;
  double first_F = 0.0;
  for (int k = 0; k < 80; ++k) {
    double eta = area * (1e-6 + (0.3 - 1e-6) * k / 79.0);
    auto arc = isoperimetric::arc_minimizer(p, eta);
    double F = isoperimetric::F_functional(arc.boundary_h_length, arc.eta);
    if (k == 0) first_F = F;
    min_F = std::min(min_F, F);
  }
  REQUIRE_TRUE(min_F > M_PI / 4, "F dropped to pi/4");
  REQUIRE_TRUE(first_F - M_PI / 4 < 1e-2,
               "F at the smallest eta too far above pi/4: " + std::to_string(first_F));

  // Cheeger curve across the full family, against the solver's lambda_0
  std::vector<double> etas;
  const int n = 120;
  for (int k = 0; k < n; ++k) etas.push_back(area * (1e-6 + (0.95 - 1e-6) * k / (n - 1.0)));
  auto curve = isoperimetric::cheeger_curve(p, etas);
  size_t min_idx = 0;
  for (size_t k = 1; k < curve.points.size(); ++k)
    if (curve.points[k].C < curve.points[min_idx].C) min_idx = k;
  REQUIRE_TRUE(min_idx > 0 && min_idx + 1 < curve.points.size(),
               "Cheeger minimum sits at the grid edge");
  bool shape_ok = true;
  for (size_t k = 0; k + 1 < curve.points.size(); ++k) {
    if (k + 1 <= min_idx && !(curve.points[k].C > curve.points[k + 1].C)) shape_ok = false;
    if (k >= min_idx && !(curve.points[k].C < curve.points[k + 1].C)) shape_ok = false;
  }
  REQUIRE_TRUE(shape_ok, "Cheeger curve is not single-dipped");

  spectral::QuarterOptions opts;
  opts.n_cells = 20000;
  auto lambda0 = spectral::solve_quarter(p, spectral::DirichletSide::h, opts);
  REQUIRE_TRUE(curve.min_C <= lambda0.extrapolated,
               "Cheeger lower bound exceeded the solver eigenvalue");
  std::ostringstream ss;
  ss << "minF=" << min_F << " F(eta_min)=" << first_F << " minC=" << curve.min_C
     << " at eta=" << curve.eta_min_C << " lambda0=" << lambda0.extrapolated;
  append(out, ss.str());
  return out;
}

// ---- 11: scaling law ---------------------------------------------------------
Outcome criterion_scaling() {
  Outcome out;
  stardomain::StarParams base{1.0, 0.1};
  double lam = stardomain::lambda_ab(base);
  double area = stardomain::quarter_area(base);
  double rho = stardomain::rho_star_lens(base).rho_star;
  auto gap = spectral::ground_state_gap(base, 16000);
  for (double g : {0.5, 2.0}) {
    stardomain::StarParams scaled{g * base.a, g * base.b};
    REQUIRE_NEAR(stardomain::lambda_ab(scaled) * g * g, lam, 1e-9 * lam, "lambda_ab scaling");
    REQUIRE_NEAR(stardomain::quarter_area(scaled) / (g * g), area, 1e-9 * area,
                 "quarter-area scaling");
    REQUIRE_NEAR(stardomain::rho_star_lens(scaled).rho_star, rho, 1e-10, "rho_star invariance");
    auto sgap = spectral::ground_state_gap(scaled, 16000);
    double tol_v = 3.0 * (gap.error_estimate + sgap.error_estimate * g * g) + 1e-9 * lam;
    REQUIRE_NEAR(sgap.lambda_v * g * g, gap.lambda_v, tol_v, "lambda_v scaling");
    REQUIRE_NEAR(sgap.lambda_h * g * g, gap.lambda_h, tol_v, "lambda_h scaling");
  }
  append(out, "gamma in {1/2, 2} verified");
  return out;
}

struct Criterion {
  const char* name;
  double budget_seconds;
  std::function<Outcome()> fn;
};

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i)
    if (!std::strcmp(argv[i], "--only") && i + 1 < argc) only = std::atoi(argv[i + 1]);

  std::vector<Criterion> criteria = {
      {"constants", 1, criterion_constants},
      {"area-constant", 1, criterion_area_constant},
      {"area-asymptotics", 10, criterion_area_asymptotics},
      {"separable-census", 30, criterion_separable_census},
      {"flow-lines", 30, criterion_flow_lines},
      {"random-wave-stats", 1200, criterion_random_wave_stats},
      {"sector-solver", 120, criterion_sector_solver},
      {"main-theorem", 600, criterion_main_theorem},
      {"rearrangement", 300, criterion_rearrangement},
      {"isoperimetric", 300, criterion_isoperimetric},
      {"scaling", 600, criterion_scaling},
  };

  int failures = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    if (only > 0 && static_cast<int>(i + 1) != only) continue;
    auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = criteria[i].fn();
    } catch (const std::exception& e) {
      out.pass = false;
      out.detail = std::string("exception: ") + e.what();
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs > criteria[i].budget_seconds) {
      out.pass = false;
      append(out, "runtime " + std::to_string(secs) + "s exceeded budget " +
                      std::to_string(criteria[i].budget_seconds) + "s");
    }
    std::printf("%s %2zu %-18s (%.1fs) %s\n", out.pass ? "PASS" : "FAIL", i + 1,
                criteria[i].name, secs, out.detail.c_str());
    std::fflush(stdout);
    if (!out.pass) ++failures;
  }
  if (failures == 0) std::printf("ALL ACCEPTANCE CRITERIA PASSED\n");
  else std::printf("%d ACCEPTANCE CRITERIA FAILED\n", failures);
  return failures;
}
