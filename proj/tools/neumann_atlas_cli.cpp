// Command-line driver for the Neumann Atlas shared library. All functionality
// is reached through the C interface in neumann_atlas.h.

#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "neumann_atlas.h"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

int fail_status(na_status status) {
  std::fprintf(stderr, "error: %s\n", na_last_error());
  return status == NA_ERR_INVALID_ARGUMENT ? kExitConfig : kExitNumerical;
}

#define NA_CHECK(call)                         \
  do {                                         \
    na_status status_ = (call);                \
    if (status_ != NA_OK) return fail_status(status_); \
  } while (0)

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_json(const nlohmann::json& j, const std::string& path) {
  FILE* f = std::fopen(path.c_str(), "w");
  if (!f) {
    std::fprintf(stderr, "error: cannot open %s\n", path.c_str());
    std::exit(kExitNumerical);
  }
  std::string text = j.dump(2);
  std::fwrite(text.data(), 1, text.size(), f);
  std::fputc('\n', f);
  std::fclose(f);
}

std::string metadata_from_config(const nlohmann::json& config) {
  std::string meta;
  for (auto it = config.begin(); it != config.end(); ++it) {
    meta += it.key();
    meta += "=";
    meta += it.value().is_string() ? it.value().get<std::string>() : it.value().dump();
    meta += "\n";
  }
  return meta;
}

struct FieldGuard {
  na_field* ptr = nullptr;
  ~FieldGuard() { na_field_destroy(ptr); }
};
struct CritGuard {
  na_critical_set* ptr = nullptr;
  ~CritGuard() { na_critical_set_destroy(ptr); }
};
struct CensusGuard {
  na_census* ptr = nullptr;
  ~CensusGuard() { na_census_destroy(ptr); }
};
struct StatsGuard {
  na_rho_stats* ptr = nullptr;
  ~StatsGuard() { na_rho_stats_destroy(ptr); }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Neumann Atlas: Neumann domains of Laplacian eigenfunctions on the flat torus"};
  app.require_subcommand(1);

  int threads = 0;
  app.add_option("--threads", threads, "worker threads (0 = NEUMANN_ATLAS_THREADS or all cores)");

  // ---- trace ----
  auto* trace = app.add_subcommand("trace", "trace the Neumann domains of one eigenfunction");
  int tr_n1 = 0, tr_n2 = 0, tr_energy = 0, tr_resolution = 512;
  std::uint64_t tr_seed = 1;
  double tr_max_step = 1e-3;
  std::string tr_out = "trace";
  bool tr_dump_field = false;
  trace->add_option("--n1", tr_n1, "separable index n1");
  trace->add_option("--n2", tr_n2, "separable index n2");
  trace->add_option("--energy", tr_energy, "random-wave energy E = n1^2+n2^2");
  trace->add_option("--seed", tr_seed, "random-wave seed");
  trace->add_option("--resolution", tr_resolution, "grid resolution N");
  trace->add_option("--max-step", tr_max_step, "integrator max step");
  trace->add_option("-o,--output", tr_out, "output path prefix");
  trace->add_flag("--dump-field", tr_dump_field, "also write the sampled field CSV");

  // ---- stats ----
  auto* stats = app.add_subcommand("stats", "rho statistics over a random-wave ensemble");
  int st_energy = 65, st_realizations = 10, st_resolution = 512;
  std::uint64_t st_seed = 1;
  double st_bin_width = 0.01, st_hi = 1.5, st_max_step = 2e-3;
  std::string st_out = "stats";
  stats->add_option("--energy", st_energy, "energy E");
  stats->add_option("--realizations", st_realizations, "ensemble size");
  stats->add_option("--seed", st_seed, "base seed; realization k uses seed+k");
  stats->add_option("--resolution", st_resolution, "grid resolution N");
  stats->add_option("--bin-width", st_bin_width, "histogram bin width");
  stats->add_option("--max-rho", st_hi, "histogram upper edge");
  stats->add_option("--max-step", st_max_step, "integrator max step");
  stats->add_option("-o,--output", st_out, "output path prefix");

  // ---- star ----
  auto* star = app.add_subcommand("star", "analytic star-domain report");
  double sd_a = 1.0, sd_b = 0.25;
  int sd_gamma_samples = 0;
  std::string sd_out = "star";
  std::vector<double> sd_ratios;
  star->add_option("--a", sd_a, "half-width a");
  star->add_option("--b", sd_b, "half-height b");
  star->add_option("--gamma-samples", sd_gamma_samples, "also write n samples of gamma(x)");
  star->add_option("--ratios", sd_ratios, "extra a/b ratios for the sweep CSV (a=1)");
  star->add_option("-o,--output", sd_out, "output path prefix");

  // ---- spectral ----
  auto* spectral = app.add_subcommand("spectral", "quarter-domain eigensolver");
  double sp_a = 1.0, sp_b = 0.1;
  int sp_cells = 40000;
  std::string sp_out = "spectral";
  std::vector<double> sp_sweep_b;
  spectral->add_option("--a", sp_a, "half-width a");
  spectral->add_option("--b", sp_b, "half-height b");
  spectral->add_option("--cells", sp_cells, "target cell budget");
  spectral->add_option("--sweep-b", sp_sweep_b, "extra b values for the gap-curve CSV");
  spectral->add_option("-o,--output", sp_out, "output path prefix");

  // ---- rearrange ----
  auto* rearrange = app.add_subcommand("rearrange", "level-set rearrangement checks");
  double re_a = 1.0, re_b = 0.1, re_alpha = 0.2 * M_PI;
  int re_nu = 384, re_nw = 192, re_thresholds = 512;
  std::uint64_t re_seed = 0;
  std::string re_out = "rearrange";
  rearrange->add_option("--a", re_a, "half-width a");
  rearrange->add_option("--b", re_b, "half-height b");
  rearrange->add_option("--alpha", re_alpha, "sector opening angle");
  rearrange->add_option("--grid-nu", re_nu, "quadrature cells along x1");
  rearrange->add_option("--grid-nw", re_nw, "quadrature cells along x2");
  rearrange->add_option("--thresholds", re_thresholds, "level thresholds");
  rearrange->add_option("--bump-seed", re_seed, "also check a seeded bump function (0 = off)");
  rearrange->add_option("-o,--output", re_out, "output path prefix");

  // ---- cheeger ----
  auto* cheeger = app.add_subcommand("cheeger", "isoperimetric minimizer family and Cheeger curve");
  double ch_a = 1.0, ch_b = 0.05, ch_lo_rel = 1e-6, ch_hi_rel = 0.95;
  int ch_n = 160;
  bool ch_gauss = false;
  std::string ch_out = "cheeger";
  cheeger->add_option("--a", ch_a, "half-width a");
  cheeger->add_option("--b", ch_b, "half-height b");
  cheeger->add_option("--eta-lo", ch_lo_rel, "lower area, relative to |Lambda|");
  cheeger->add_option("--eta-hi", ch_hi_rel, "upper area, relative to |Lambda|");
  cheeger->add_option("--points", ch_n, "eta grid size");
  cheeger->add_flag("--gaussian", ch_gauss, "use the small-b Gaussian boundary profile");
  cheeger->add_option("-o,--output", ch_out, "output path prefix");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  if (trace->parsed()) {
    nlohmann::json config = {{"command", "trace"},
                             {"resolution", tr_resolution},
                             {"max_step", tr_max_step},
                             {"threads", threads}};
    FieldGuard field;
    if (tr_energy > 0) {
      config["energy"] = tr_energy;
      config["seed"] = tr_seed;
      NA_CHECK(na_field_random_wave(tr_energy, tr_seed, tr_resolution, &field.ptr));
    } else if (tr_n1 > 0 && tr_n2 > 0) {
      config["n1"] = tr_n1;
      config["n2"] = tr_n2;
      NA_CHECK(na_field_separable(tr_n1, tr_n2, tr_resolution, &field.ptr));
    } else {
      std::fprintf(stderr, "error: give either --energy or both --n1 and --n2\n");
      return kExitConfig;
    }
    std::string meta = metadata_from_config(config);
    CritGuard crit;
    NA_CHECK(na_find_critical_points(field.ptr, &crit.ptr));
    NA_CHECK(na_critical_set_export_csv(crit.ptr, (tr_out + "_critical.csv").c_str(), meta.c_str()));
    CensusGuard census;
    NA_CHECK(na_assemble_domains(field.ptr, crit.ptr, tr_max_step, threads, &census.ptr));
    NA_CHECK(na_census_export_csv(census.ptr, (tr_out + "_census.csv").c_str(), meta.c_str()));
    if (tr_dump_field)
      NA_CHECK(na_field_dump_csv(field.ptr, (tr_out + "_field.csv").c_str(), meta.c_str()));
    std::printf("domains=%d excluded=%d lambda=%s\n", na_census_size(census.ptr),
                na_census_excluded(census.ptr), fmt17(na_field_lambda(field.ptr)).c_str());
    return 0;
  }

  if (stats->parsed()) {
    nlohmann::json config = {{"command", "stats"},   {"energy", st_energy},
                             {"realizations", st_realizations}, {"seed", st_seed},
                             {"resolution", st_resolution},     {"bin_width", st_bin_width},
                             {"max_rho", st_hi},     {"max_step", st_max_step},
                             {"threads", threads}};
    std::string meta = metadata_from_config(config);
    StatsGuard acc;
    NA_CHECK(na_rho_stats_new(st_bin_width, st_hi, &acc.ptr));
    int failed_realizations = 0;
    for (int k = 0; k < st_realizations; ++k) {
      FieldGuard field;
      NA_CHECK(na_field_random_wave(st_energy, st_seed + static_cast<std::uint64_t>(k),
                                    st_resolution, &field.ptr));
      CritGuard crit;
      if (na_find_critical_points(field.ptr, &crit.ptr) != NA_OK) {
        ++failed_realizations;
        continue;
      }
      CensusGuard census;
      if (na_assemble_domains(field.ptr, crit.ptr, st_max_step, threads, &census.ptr) != NA_OK) {
        ++failed_realizations;
        continue;
      }
      NA_CHECK(na_rho_stats_add_census(acc.ptr, census.ptr));
    }
    config["failed_realizations"] = failed_realizations;
    NA_CHECK(na_rho_stats_export_csv(acc.ptr, (st_out + "_histogram.csv").c_str(), meta.c_str()));
    NA_CHECK(na_rho_stats_export_json(acc.ptr, (st_out + "_summary.json").c_str(),
                                      config.dump().c_str()));
    double fg = 0, fe = 0;
    NA_CHECK(na_rho_stats_exceedance(acc.ptr, 0, &fg, &fe));
    std::printf("domains=%ld exceed_ground=%s exceed_excited=%s excluded=%ld\n",
                na_rho_stats_count(acc.ptr, 0), fmt17(fg).c_str(), fmt17(fe).c_str(),
                na_rho_stats_excluded(acc.ptr));
    return 0;
  }

  if (star->parsed()) {
    nlohmann::json config = {{"command", "star"}, {"a", sd_a}, {"b", sd_b}};
    std::string meta = metadata_from_config(config);
    na_constants consts;
    NA_CHECK(na_get_constants(&consts));
    double lambda = 0, area = 0, perim = 0, rho_s = 0, rho_l = 0;
    double alpha_lo = 0, alpha_hi = 0, alpha_best = 0, margin = 0;
    int feasible = 0;
    double wedge_slope = 0, cusp_exp = 0;
    NA_CHECK(na_star_lambda(sd_a, sd_b, &lambda));
    NA_CHECK(na_star_quarter_area(sd_a, sd_b, &area));
    NA_CHECK(na_star_perimeter(sd_a, sd_b, &perim));
    NA_CHECK(na_star_rho(sd_a, sd_b, &rho_s, &rho_l));
    NA_CHECK(na_star_admissibility(sd_a, sd_b, &alpha_lo, &alpha_hi, &feasible, &alpha_best,
                                   &margin));
    NA_CHECK(na_star_asymptotics(sd_a, sd_b, 1e-3, &wedge_slope, &cusp_exp));
    nlohmann::json report;
    report["config"] = config;
    report["constants"] = {{"j0", consts.j0},
                           {"j1p", consts.j1p},
                           {"rho_ground_bound", consts.rho_ground},
                           {"rho_excited_bound", consts.rho_excited},
                           {"gamma_area", consts.gamma_area},
                           {"alpha_min", consts.alpha_min},
                           {"alpha_max", consts.alpha_max}};
    report["lambda"] = lambda;
    report["quarter_area"] = area;
    report["perimeter"] = perim;
    report["rho_star"] = rho_s;
    report["rho_lens"] = rho_l;
    report["feasibility"] = {{"alpha_lo", alpha_lo},
                             {"alpha_hi", alpha_hi},
                             {"feasible", feasible != 0},
                             {"alpha_best", alpha_best},
                             {"margin", margin}};
    report["asymptotics"] = {{"wedge_slope", wedge_slope}, {"cusp_exponent", cusp_exp}};
    write_json(report, sd_out + "_report.json");

    if (sd_gamma_samples > 1) {
      FILE* f = std::fopen((sd_out + "_gamma.csv").c_str(), "w");
      if (!f) return kExitNumerical;
      std::string header = metadata_from_config(config);
      for (size_t pos = 0; pos < header.size();) {
        size_t nl = header.find('\n', pos);
        std::fprintf(f, "# %s\n", header.substr(pos, nl - pos).c_str());
        pos = nl + 1;
      }
      std::fprintf(f, "x,gamma\n");
      for (int i = 0; i <= sd_gamma_samples; ++i) {
        double x = sd_a * i / sd_gamma_samples;
        double g = 0;
        NA_CHECK(na_star_gamma(sd_a, sd_b, x, &g));
        std::fprintf(f, "%s,%s\n", fmt17(x).c_str(), fmt17(g).c_str());
      }
      std::fclose(f);
    }

    // sweep CSV: the requested (a, b) row plus any extra ratios at a = 1
    FILE* f = std::fopen((sd_out + "_sweep.csv").c_str(), "w");
    if (!f) return kExitNumerical;
    for (size_t pos = 0; pos < meta.size();) {
      size_t nl = meta.find('\n', pos);
      std::fprintf(f, "# %s\n", meta.substr(pos, nl - pos).c_str());
      pos = nl + 1;
    }
    std::fprintf(f, "a,b,ratio,rho_star,rho_lens,feasible,alpha_best,margin\n");
    auto emit_row = [&](double a, double b) -> int {
      double rs = 0, rl = 0, lo = 0, hi = 0, best = 0, marg = 0;
      int feas = 0;
      NA_CHECK(na_star_rho(a, b, &rs, &rl));
      NA_CHECK(na_star_admissibility(a, b, &lo, &hi, &feas, &best, &marg));
      std::fprintf(f, "%s,%s,%s,%s,%s,%d,%s,%s\n", fmt17(a).c_str(), fmt17(b).c_str(),
                   fmt17(a / b).c_str(), fmt17(rs).c_str(), fmt17(rl).c_str(), feas,
                   fmt17(best).c_str(), fmt17(marg).c_str());
      return -1;
    };
    if (int rc = emit_row(sd_a, sd_b); rc >= 0) return rc;
    for (double ratio : sd_ratios) {
      if (ratio < 1.0) continue;
      if (int rc = emit_row(1.0, 1.0 / ratio); rc >= 0) return rc;
    }
    std::fclose(f);
    std::printf("lambda=%s rho_star=%s rho_lens=%s feasible=%d\n", fmt17(lambda).c_str(),
                fmt17(rho_s).c_str(), fmt17(rho_l).c_str(), feasible);
    return 0;
  }

  if (spectral->parsed()) {
    nlohmann::json config = {
        {"command", "spectral"}, {"a", sp_a}, {"b", sp_b}, {"cells", sp_cells}};
    na_eigen_result rv, rh;
    NA_CHECK(na_solve_quarter(sp_a, sp_b, 'v', sp_cells, &rv));
    NA_CHECK(na_solve_quarter(sp_a, sp_b, 'h', sp_cells, &rh));
    NA_CHECK(na_export_spectral_json(sp_a, sp_b, 'v', &rv, (sp_out + "_v.json").c_str(),
                                     config.dump().c_str()));
    NA_CHECK(na_export_spectral_json(sp_a, sp_b, 'h', &rh, (sp_out + "_h.json").c_str(),
                                     config.dump().c_str()));
    double gap = rh.extrapolated - rv.extrapolated;
    nlohmann::json summary;
    summary["config"] = config;
    summary["lambda_v"] = rv.extrapolated;
    summary["lambda_h"] = rh.extrapolated;
    summary["gap"] = gap;
    summary["error_estimate"] =
        std::abs(rv.extrapolated - rv.eigenvalue) + std::abs(rh.extrapolated - rh.eigenvalue);

    if (!sp_sweep_b.empty()) {
      FILE* f = std::fopen((sp_out + "_gap_sweep.csv").c_str(), "w");
      if (!f) return kExitNumerical;
      std::fprintf(f, "a,b,ratio,lambda_v,lambda_h,gap,error_estimate\n");
      for (double b : sp_sweep_b) {
        double lv = 0, lh = 0, g = 0, err = 0;
        NA_CHECK(na_ground_state_gap(sp_a, b, sp_cells, &lv, &lh, &g, &err));
        std::fprintf(f, "%s,%s,%s,%s,%s,%s,%s\n", fmt17(sp_a).c_str(), fmt17(b).c_str(),
                     fmt17(b / sp_a).c_str(), fmt17(lv).c_str(), fmt17(lh).c_str(),
                     fmt17(g).c_str(), fmt17(err).c_str());
      }
      std::fclose(f);
    }
    write_json(summary, sp_out + "_summary.json");
    std::printf("lambda_v=%s lambda_h=%s gap=%s\n", fmt17(rv.extrapolated).c_str(),
                fmt17(rh.extrapolated).c_str(), fmt17(gap).c_str());
    return 0;
  }

  if (rearrange->parsed()) {
    nlohmann::json config = {{"command", "rearrange"}, {"a", re_a},
                             {"alpha", re_alpha},      {"b", re_b},
                             {"grid_nu", re_nu},       {"grid_nw", re_nw},
                             {"thresholds", re_thresholds}};
    na_rearrange_summary sum;
    NA_CHECK(na_rearrange_eigenfunction(re_a, re_b, re_alpha, re_nu, re_nw, re_thresholds, &sum));
    NA_CHECK(na_rearrange_export_report(re_a, re_b, re_alpha, re_nu, re_nw, re_thresholds,
                                        (re_out + "_report.json").c_str(),
                                        config.dump().c_str()));
    nlohmann::json out;
    out["config"] = config;
    out["eigenfunction"] = {{"norm_psi", sum.norm_psi},
                            {"norm_star", sum.norm_star},
                            {"grad_lhs", sum.grad_lhs},
                            {"grad_rhs", sum.grad_rhs},
                            {"grad_holds", sum.grad_holds != 0},
                            {"perimeter_fraction_holds", sum.perimeter_fraction_holds},
                            {"equimeasure_max_error", sum.equimeasure_max_error}};
    if (re_seed != 0) {
      na_rearrange_summary bump;
      NA_CHECK(
          na_rearrange_bumps(re_a, re_b, re_alpha, re_seed, re_nu, re_nw, re_thresholds, &bump));
      out["bumps"] = {{"seed", re_seed},
                      {"grad_lhs", bump.grad_lhs},
                      {"grad_rhs", bump.grad_rhs},
                      {"grad_holds", bump.grad_holds != 0},
                      {"perimeter_fraction_holds", bump.perimeter_fraction_holds}};
    }
    write_json(out, re_out + "_summary.json");
    std::printf("grad_holds=%d perimeter_fraction=%s\n", sum.grad_holds,
                fmt17(sum.perimeter_fraction_holds).c_str());
    return 0;
  }

  if (cheeger->parsed()) {
    nlohmann::json config = {{"command", "cheeger"}, {"a", ch_a},
                             {"b", ch_b},            {"eta_lo_rel", ch_lo_rel},
                             {"eta_hi_rel", ch_hi_rel}, {"points", ch_n},
                             {"gaussian", ch_gauss}};
    std::string meta = metadata_from_config(config);
    double area = 0;
    NA_CHECK(na_star_quarter_area(ch_a, ch_b, &area));
    na_cheeger_summary sum;
    NA_CHECK(na_cheeger_curve_csv(ch_a, ch_b, ch_lo_rel * area, ch_hi_rel * area, ch_n,
                                  ch_gauss ? 1 : 0, (ch_out + "_curve.csv").c_str(), meta.c_str(),
                                  &sum));
    nlohmann::json out;
    out["config"] = config;
    out["quarter_area"] = area;
    out["eta_transition"] = sum.eta_transition;
    out["transition_within_grid"] = sum.transition_within_grid != 0;
    out["min_C"] = sum.min_C;
    out["eta_min_C"] = sum.eta_min_C;
    out["cutoff_eta"] = sum.cutoff_eta;
    write_json(out, ch_out + "_summary.json");
    std::printf("min_C=%s at eta=%s (transition eta=%s)\n", fmt17(sum.min_C).c_str(),
                fmt17(sum.eta_min_C).c_str(), fmt17(sum.eta_transition).c_str());
    return 0;
  }

  return kExitConfig;
}
