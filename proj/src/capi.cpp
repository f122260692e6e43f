#include "neumann_atlas.h"

#include <cmath>
#include <cstring>
#include <string>

#include "neumann/common.hpp"
#include "neumann/isoperimetric.hpp"
#include "neumann/morse.hpp"
#include "neumann/rearrange.hpp"
#include "neumann/special.hpp"
#include "neumann/spectral.hpp"
#include "neumann/stardomain.hpp"
#include "neumann/tracer.hpp"
#include "neumann/wavefield.hpp"

using namespace neumann;

struct na_field {
  wavefield::ScalarField field;
};
struct na_critical_set {
  morse::CriticalSet set;
};
struct na_census {
  tracer::DomainCensus census;
};
struct na_rho_stats {
  tracer::RhoStatistics stats;
};

namespace {

thread_local std::string g_last_error;

na_status fail(na_status code, const char* what) {
  g_last_error = what;
  return code;
}

na_status from_error(const Error& e) {
  g_last_error = e.what();
  switch (e.code()) {
    case ErrorCode::invalid_argument:
      return NA_ERR_INVALID_ARGUMENT;
    case ErrorCode::io:
      return NA_ERR_IO;
    default:
      return NA_ERR_NUMERICAL;
  }
}

template <typename Fn>
na_status guarded(Fn&& fn) {
  try {
    fn();
    return NA_OK;
  } catch (const Error& e) {
    return from_error(e);
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return NA_ERR_NUMERICAL;
  }
}

std::string opt_str(const char* s) { return s ? std::string(s) : std::string(); }

}  // namespace

extern "C" {

const char* na_version(void) { return "0.1.0"; }

const char* na_last_error(void) { return g_last_error.c_str(); }

na_status na_lattice_count(int energy, int* n_modes, int* n_pairs) {
  return guarded([&] {
    auto modes = wavefield::enumerate_lattice(energy);
    if (n_modes) *n_modes = static_cast<int>(modes.size());
    if (n_pairs) *n_pairs = wavefield::antipodal_class_count(modes);
  });
}

na_status na_field_separable(int n1, int n2, int resolution, na_field** out) {
  if (!out) return fail(NA_ERR_INVALID_ARGUMENT, "null output pointer");
  return guarded([&] { *out = new na_field{wavefield::sample_separable(n1, n2, resolution)}; });
}

na_status na_field_random_wave(int energy, uint64_t seed, int resolution, na_field** out) {
  if (!out) return fail(NA_ERR_INVALID_ARGUMENT, "null output pointer");
  return guarded([&] {
    auto spec = wavefield::random_wave_spec(energy, seed);
    *out = new na_field{wavefield::sample_random_wave(spec, resolution)};
  });
}

void na_field_destroy(na_field* field) { delete field; }

na_status na_field_eval(const na_field* field, double x1, double x2, double* value) {
  if (!field || !value) return fail(NA_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] { *value = field->field.value(x1, x2); });
}

na_status na_field_gradient(const na_field* field, double x1, double x2, double* g1, double* g2) {
  if (!field || !g1 || !g2) return fail(NA_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    Vec2 g = field->field.gradient(x1, x2);
    *g1 = g.x;
    *g2 = g.y;
  });
}

double na_field_lambda(const na_field* field) { return field ? field->field.lambda() : 0.0; }

int na_field_resolution(const na_field* field) { return field ? field->field.resolution() : 0; }

int na_field_energy(const na_field* field) { return field ? field->field.energy() : 0; }

na_status na_field_dump_csv(const na_field* field, const char* path, const char* metadata) {
  if (!field || !path) return fail(NA_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] { wavefield::dump_field_csv(field->field, path, opt_str(metadata)); });
}

na_status na_find_critical_points(const na_field* field, na_critical_set** out) {
  if (!field || !out) return fail(NA_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] { *out = new na_critical_set{morse::find_critical_points(field->field)}; });
}

void na_critical_set_destroy(na_critical_set* set) { delete set; }

int na_critical_set_size(const na_critical_set* set) {
  return set ? static_cast<int>(set->set.points.size()) : 0;
}

na_status na_critical_set_counts(const na_critical_set* set, int* n_max, int* n_min,
                                 int* n_saddle) {
  if (!set) return fail(NA_ERR_INVALID_ARGUMENT, "null argument");
  if (n_max) *n_max = set->set.n_max;
  if (n_min) *n_min = set->set.n_min;
  if (n_saddle) *n_saddle = set->set.n_saddle;
  return NA_OK;
}

na_status na_critical_set_get(const na_critical_set* set, int index, double* x1, double* x2,
                              int* kind, double* value) {
  if (!set) return fail(NA_ERR_INVALID_ARGUMENT, "null argument");
  if (index < 0 || index >= static_cast<int>(set->set.points.size()))
    return fail(NA_ERR_INVALID_ARGUMENT, "index out of range");
  const auto& cp = set->set.points[index];
  if (x1) *x1 = cp.position.x;
  if (x2) *x2 = cp.position.y;
  if (kind) *kind = static_cast<int>(cp.kind);
  if (value) *value = cp.value;
  return NA_OK;
}

na_status na_critical_set_export_csv(const na_critical_set* set, const char* path,
                                     const char* metadata) {
  if (!set || !path) return fail(NA_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] { morse::export_critical_csv(set->set, path, opt_str(metadata)); });
}

na_status na_assemble_domains(const na_field* field, const na_critical_set* crit,
                              double max_step, int threads, na_census** out) {
  if (!field || !crit || !out) return fail(NA_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    tracer::AssembleOptions opts;
    if (max_step > 0) opts.trace.max_step = max_step;
    opts.threads = resolve_thread_count(threads);
    *out = new na_census{tracer::assemble_domains(field->field, crit->set, opts)};
  });
}

void na_census_destroy(na_census* census) { delete census; }

int na_census_size(const na_census* census) {
  return census ? static_cast<int>(census->census.domains.size()) : 0;
}

int na_census_excluded(const na_census* census) {
  return census ? census->census.excluded_count : 0;
}

na_status na_census_get(const na_census* census, int index, int* kind, double* area,
                        double* perimeter, double* rho) {
  if (!census) return fail(NA_ERR_INVALID_ARGUMENT, "null argument");
  if (index < 0 || index >= static_cast<int>(census->census.domains.size()))
    return fail(NA_ERR_INVALID_ARGUMENT, "index out of range");
  const auto& d = census->census.domains[index];
  if (kind) *kind = static_cast<int>(d.kind);
  if (area) *area = d.area;
  if (perimeter) *perimeter = d.perimeter;
  if (rho) *rho = d.rho;
  return NA_OK;
}

na_status na_census_export_csv(const na_census* census, const char* path, const char* metadata) {
  if (!census || !path) return fail(NA_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] { tracer::export_census_csv(census->census, path, opt_str(metadata)); });
}

na_status na_rho_stats_new(double bin_width, double hi, na_rho_stats** out) {
  if (!out) return fail(NA_ERR_INVALID_ARGUMENT, "null output pointer");
  if (!(bin_width > 0) || !(hi > bin_width))
    return fail(NA_ERR_INVALID_ARGUMENT, "invalid histogram geometry");
  return guarded([&] {
    auto* stats = new na_rho_stats;
    stats->stats.bin_width = bin_width;
    stats->stats.hi = hi;
    int bins = static_cast<int>(std::ceil(hi / bin_width));
    for (auto& c : stats->stats.counts) c.assign(bins, 0);
    *out = stats;
  });
}

void na_rho_stats_destroy(na_rho_stats* stats) { delete stats; }

na_status na_rho_stats_add_census(na_rho_stats* stats, const na_census* census) {
  if (!stats || !census) return fail(NA_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] { stats->stats.add_census(census->census); });
}

long na_rho_stats_count(const na_rho_stats* stats, int klass) {
  if (!stats || klass < 0 || klass > 3) return 0;
  return stats->stats.totals[klass];
}

long na_rho_stats_excluded(const na_rho_stats* stats) { return stats ? stats->stats.excluded : 0; }

na_status na_rho_stats_exceedance(const na_rho_stats* stats, int klass, double* frac_ground,
                                  double* frac_excited) {
  if (!stats || klass < 0 || klass > 3) return fail(NA_ERR_INVALID_ARGUMENT, "bad class");
  if (frac_ground) *frac_ground = stats->stats.fraction_exceeding_ground(klass);
  if (frac_excited) *frac_excited = stats->stats.fraction_exceeding_excited(klass);
  return NA_OK;
}

na_status na_rho_stats_export_csv(const na_rho_stats* stats, const char* path,
                                  const char* metadata) {
  if (!stats || !path) return fail(NA_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] { tracer::export_histogram_csv(stats->stats, path, opt_str(metadata)); });
}

na_status na_rho_stats_export_json(const na_rho_stats* stats, const char* path,
                                   const char* config_json) {
  if (!stats || !path) return fail(NA_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    tracer::export_statistics_json(stats->stats, path, config_json ? config_json : "{}");
  });
}

na_status na_get_constants(na_constants* out) {
  if (!out) return fail(NA_ERR_INVALID_ARGUMENT, "null output pointer");
  return guarded([&] {
    const auto& c = special::constants();
    out->j0 = c.j0;
    out->j1p = c.j1p;
    out->rho_ground = c.rho_ground;
    out->rho_excited = c.rho_excited;
    out->gamma_area = c.gamma_area;
    out->alpha_min = c.alpha_min;
    out->alpha_max = c.alpha_max;
  });
}

double na_gamma_area_second_route(void) { return special::gamma_area_tanh_sinh(); }

na_status na_star_gamma(double a, double b, double x, double* value) {
  if (!value) return fail(NA_ERR_INVALID_ARGUMENT, "null output pointer");
  return guarded([&] { *value = stardomain::gamma_boundary({a, b}, x); });
}

na_status na_star_gamma_deriv(double a, double b, double x, double* value) {
  if (!value) return fail(NA_ERR_INVALID_ARGUMENT, "null output pointer");
  return guarded([&] { *value = stardomain::gamma_derivative({a, b}, x); });
}

na_status na_star_lambda(double a, double b, double* value) {
  if (!value) return fail(NA_ERR_INVALID_ARGUMENT, "null output pointer");
  return guarded([&] { *value = stardomain::lambda_ab({a, b}); });
}

na_status na_star_quarter_area(double a, double b, double* value) {
  if (!value) return fail(NA_ERR_INVALID_ARGUMENT, "null output pointer");
  return guarded([&] { *value = stardomain::quarter_area({a, b}); });
}

na_status na_star_perimeter(double a, double b, double* value) {
  if (!value) return fail(NA_ERR_INVALID_ARGUMENT, "null output pointer");
  return guarded([&] { *value = stardomain::perimeter({a, b}); });
}

na_status na_star_cos_power_remainder(double a, double b, double x, double* value) {
  if (!value) return fail(NA_ERR_INVALID_ARGUMENT, "null output pointer");
  return guarded([&] { *value = stardomain::cos_power_remainder({a, b}, x); });
}

na_status na_star_flow_line(double a, double b, double g, double x1, double* x2) {
  if (!x2) return fail(NA_ERR_INVALID_ARGUMENT, "null output pointer");
  return guarded([&] { *x2 = stardomain::flow_line({a, b}, g, x1); });
}

na_status na_star_asymptotics(double a, double b, double window, double* wedge_slope,
                              double* cusp_exponent) {
  return guarded([&] {
    auto report = stardomain::boundary_asymptotics_check({a, b}, window);
    if (wedge_slope) *wedge_slope = report.wedge_slope;
    if (cusp_exponent) *cusp_exponent = report.cusp_exponent;
  });
}

na_status na_star_reference_sector(double a, double b, double alpha, double* radius) {
  if (!radius) return fail(NA_ERR_INVALID_ARGUMENT, "null output pointer");
  return guarded([&] { *radius = stardomain::reference_sector({a, b}, alpha).radius; });
}

na_status na_sector_ground_state(double alpha, double radius, double* lambda) {
  if (!lambda) return fail(NA_ERR_INVALID_ARGUMENT, "null output pointer");
  return guarded([&] { *lambda = stardomain::sector_ground_state({alpha, radius}).lambda; });
}

na_status na_star_admissibility(double a, double b, double* alpha_lo, double* alpha_hi,
                                int* feasible, double* alpha_best, double* margin) {
  return guarded([&] {
    auto win = stardomain::admissibility_window({a, b});
    if (alpha_lo) *alpha_lo = win.alpha_lo;
    if (alpha_hi) *alpha_hi = win.alpha_hi;
    if (feasible) *feasible = win.feasible ? 1 : 0;
    if (alpha_best) *alpha_best = win.alpha_best;
    if (margin) *margin = win.margin;
  });
}

na_status na_star_rho(double a, double b, double* rho_star, double* rho_lens) {
  return guarded([&] {
    auto pair = stardomain::rho_star_lens({a, b});
    if (rho_star) *rho_star = pair.rho_star;
    if (rho_lens) *rho_lens = pair.rho_lens;
  });
}

namespace {

spectral::DirichletSide side_from_char(char side) {
  if (side == 'v' || side == 'V') return spectral::DirichletSide::v;
  if (side == 'h' || side == 'H') return spectral::DirichletSide::h;
  throw Error(ErrorCode::invalid_argument, "side must be 'v' or 'h'");
}

void copy_result(const spectral::EigenResult& in, na_eigen_result* out) {
  out->eigenvalue = in.eigenvalue;
  out->extrapolated = in.extrapolated;
  out->residual = in.residual;
  out->n_cells = in.n_cells;
}

}  // namespace

na_status na_solve_quarter(double a, double b, char side, int n_cells, na_eigen_result* out) {
  if (!out) return fail(NA_ERR_INVALID_ARGUMENT, "null output pointer");
  return guarded([&] {
    spectral::QuarterOptions opts;
    if (n_cells > 0) opts.n_cells = n_cells;
    auto res = spectral::solve_quarter({a, b}, side_from_char(side), opts);
    copy_result(res, out);
  });
}

na_status na_ground_state_gap(double a, double b, int n_cells, double* lambda_v,
                              double* lambda_h, double* gap, double* error_estimate) {
  return guarded([&] {
    auto res = spectral::ground_state_gap({a, b}, n_cells > 0 ? n_cells : 40000);
    if (lambda_v) *lambda_v = res.lambda_v;
    if (lambda_h) *lambda_h = res.lambda_h;
    if (gap) *gap = res.gap;
    if (error_estimate) *error_estimate = res.error_estimate;
  });
}

na_status na_solve_sector(double alpha, double radius, int n_cells, na_eigen_result* out) {
  if (!out) return fail(NA_ERR_INVALID_ARGUMENT, "null output pointer");
  return guarded([&] {
    auto res = spectral::solve_sector(alpha, radius, n_cells > 0 ? n_cells : 10000);
    copy_result(res, out);
  });
}

na_status na_classify_shape(double a, double b, char side, int n_cells, char* shape) {
  if (!shape) return fail(NA_ERR_INVALID_ARGUMENT, "null output pointer");
  return guarded([&] {
    spectral::QuarterOptions opts;
    if (n_cells > 0) opts.n_cells = n_cells;
    auto quarter = spectral::solve_quarter({a, b}, side_from_char(side), opts);
    auto full = spectral::unfold(quarter, side_from_char(side));
    switch (spectral::classify_shape(full)) {
      case spectral::ShapeClass::I: *shape = '1'; break;
      case spectral::ShapeClass::II: *shape = '2'; break;
      case spectral::ShapeClass::III: *shape = '3'; break;
    }
  });
}

na_status na_dirichlet_disk(double radius, int grid, double* lambda) {
  if (!lambda) return fail(NA_ERR_INVALID_ARGUMENT, "null output pointer");
  return guarded([&] {
    if (!(radius > 0) || grid < 8)
      throw Error(ErrorCode::invalid_argument, "invalid disk parameters");
    double box = 2.2 * radius;
    double h = box / (grid - 1);
    std::vector<uint8_t> mask(static_cast<size_t>(grid) * grid, 0);
    for (int i = 0; i < grid; ++i) {
      for (int j = 0; j < grid; ++j) {
        double x = -0.5 * box + i * h;
        double y = -0.5 * box + j * h;
        if (x * x + y * y < radius * radius) mask[static_cast<size_t>(i) * grid + j] = 1;
      }
    }
    *lambda = spectral::dirichlet_ground_state(mask, grid, grid, h).eigenvalue;
  });
}

na_status na_export_spectral_json(double a, double b, char side, const na_eigen_result* result,
                                  const char* path, const char* config_json) {
  if (!result || !path) return fail(NA_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    spectral::EigenResult res;
    res.eigenvalue = result->eigenvalue;
    res.extrapolated = result->extrapolated;
    res.residual = result->residual;
    res.n_cells = result->n_cells;
    spectral::export_result_json({a, b}, side_from_char(side), res, path,
                                 config_json ? config_json : "{}");
  });
}

namespace {

na_status rearrange_summary_impl(double a, double b, double alpha,
                                 const rearrange::TestFunction& f, int nu, int nw,
                                 int n_thresholds, na_rearrange_summary* out) {
  return guarded([&] {
    stardomain::StarParams p{a, b};
    auto samples = rearrange::quarter_samples(p, nu, nw, f.value);
    auto prof = rearrange::level_profile(samples, n_thresholds);
    stardomain::SectorParams sec;
    sec.alpha = alpha;
    sec.radius = std::sqrt(2.0 * prof.total_area / alpha);
    auto star = rearrange::rearrange_to_sector(prof, sec);

    // equimeasurability: area of {psi* > t} against mu(t)
    double max_err = 0.0;
    const int n_r = 8192;
    for (int k = 1; k <= 16; ++k) {
      double t = prof.max_value * k / 17.0;
      double area_star = 0.0;
      for (int i = 0; i < n_r; ++i) {
        double r0 = sec.radius * i / n_r, r1 = sec.radius * (i + 1) / n_r;
        if (star.value(0.5 * (r0 + r1)) > t) area_star += 0.5 * alpha * (r1 * r1 - r0 * r0);
      }
      max_err = std::max(max_err, std::abs(area_star - prof.mu(t)));
    }

    double norm2 = 0.0;
    for (size_t i = 0; i < samples.values.size(); ++i)
      norm2 += samples.values[i] * samples.values[i] * samples.areas[i];
    double norm2_star = 0.0;
    for (int i = 0; i < n_r; ++i) {
      double r0 = sec.radius * i / n_r, r1 = sec.radius * (i + 1) / n_r;
      double v = star.value(0.5 * (r0 + r1));
      norm2_star += v * v * 0.5 * alpha * (r1 * r1 - r0 * r0);
    }

    auto grad = rearrange::gradient_inequality_check(p, f, alpha, nu, nw, n_thresholds);
    auto perim = rearrange::perimeter_inequality_check(p, f, alpha, nu, nw, 64);

    out->norm_psi = std::sqrt(norm2);
    out->norm_star = std::sqrt(norm2_star);
    out->grad_lhs = grad.lhs;
    out->grad_rhs = grad.rhs;
    out->grad_holds = grad.holds ? 1 : 0;
    out->perimeter_fraction_holds = perim.fraction_holds;
    out->equimeasure_max_error = max_err;
  });
}

}  // namespace

na_status na_rearrange_eigenfunction(double a, double b, double alpha, int nu, int nw,
                                     int n_thresholds, na_rearrange_summary* out) {
  if (!out) return fail(NA_ERR_INVALID_ARGUMENT, "null output pointer");
  try {
    stardomain::StarParams p{a, b};
    return rearrange_summary_impl(a, b, alpha, rearrange::separable_partner(p), nu, nw,
                                  n_thresholds, out);
  } catch (const Error& e) {
    return from_error(e);
  }
}

na_status na_rearrange_bumps(double a, double b, double alpha, uint64_t seed, int nu, int nw,
                             int n_thresholds, na_rearrange_summary* out) {
  if (!out) return fail(NA_ERR_INVALID_ARGUMENT, "null output pointer");
  try {
    stardomain::StarParams p{a, b};
    return rearrange_summary_impl(a, b, alpha, rearrange::random_bumps(p, seed), nu, nw,
                                  n_thresholds, out);
  } catch (const Error& e) {
    return from_error(e);
  }
}

na_status na_rearrange_export_report(double a, double b, double alpha, int nu, int nw,
                                     int n_thresholds, const char* path,
                                     const char* config_json) {
  if (!path) return fail(NA_ERR_INVALID_ARGUMENT, "null path");
  return guarded([&] {
    stardomain::StarParams p{a, b};
    auto report = rearrange::perimeter_inequality_check(p, rearrange::separable_partner(p), alpha,
                                                        nu, nw, n_thresholds);
    rearrange::export_report_json(report, path, config_json ? config_json : "{}");
  });
}

na_status na_arc_minimizer(double a, double b, double eta, double* F, double* C, double* radius,
                           double* phi) {
  return guarded([&] {
    auto arc = isoperimetric::arc_minimizer({a, b}, eta);
    if (F) *F = isoperimetric::F_functional(arc.boundary_h_length, arc.eta);
    if (C) *C = isoperimetric::cheeger_functional(arc.boundary_h_length, arc.eta);
    if (radius) *radius = arc.radius;
    if (phi) *phi = arc.phi;
  });
}

na_status na_cheeger_curve_csv(double a, double b, double eta_lo, double eta_hi, int n,
                               int gaussian_approx, const char* path, const char* metadata,
                               na_cheeger_summary* out) {
  return guarded([&] {
    if (n < 2 || !(eta_lo > 0) || !(eta_hi > eta_lo))
      throw Error(ErrorCode::invalid_argument, "invalid eta grid");
    std::vector<double> grid(n);
    for (int k = 0; k < n; ++k) grid[k] = eta_lo + (eta_hi - eta_lo) * k / (n - 1);
    auto curve = isoperimetric::cheeger_curve({a, b}, grid, gaussian_approx != 0);
    if (path) isoperimetric::export_curve_csv(curve, path, opt_str(metadata));
    if (out) {
      out->eta_transition = curve.eta_transition;
      out->min_C = curve.min_C;
      out->eta_min_C = curve.eta_min_C;
      out->cutoff_eta = curve.cutoff_eta;
      out->transition_within_grid = curve.transition_within_grid ? 1 : 0;
    }
  });
}

na_status na_convexity_check(double a, double b, int* convex) {
  if (!convex) return fail(NA_ERR_INVALID_ARGUMENT, "null output pointer");
  return guarded([&] { *convex = isoperimetric::convexity_check({a, b}) ? 1 : 0; });
}

}  // extern "C"
