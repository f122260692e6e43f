#ifndef NEUMANN_ATLAS_H
#define NEUMANN_ATLAS_H

/*
 * C interface of the Neumann Atlas toolkit.
 *
 * Every function returns an na_status; on failure na_last_error() carries a
 * thread-local description. Objects created by na_*_new / factory calls are
 * owned by the caller and released with the matching *_destroy.
 */

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum na_status {
  NA_OK = 0,
  NA_ERR_INVALID_ARGUMENT = 1,
  NA_ERR_NUMERICAL = 2,
  NA_ERR_IO = 3
} na_status;

const char* na_version(void);
const char* na_last_error(void);

typedef struct na_field na_field;
typedef struct na_critical_set na_critical_set;
typedef struct na_census na_census;
typedef struct na_rho_stats na_rho_stats;

/* ---- torus eigenfunctions ---- */

/* All integer lattice solutions of n1^2+n2^2 = energy and antipodal pairs. */
na_status na_lattice_count(int energy, int* n_modes, int* n_pairs);

na_status na_field_separable(int n1, int n2, int resolution, na_field** out);
/* Gaussian coefficients and uniform phase drawn from the seed
 * (SplitMix64 + Box-Muller); equal seeds reproduce bit-identically. */
na_status na_field_random_wave(int energy, uint64_t seed, int resolution, na_field** out);
void na_field_destroy(na_field* field);

na_status na_field_eval(const na_field* field, double x1, double x2, double* value);
na_status na_field_gradient(const na_field* field, double x1, double x2, double* g1, double* g2);
double na_field_lambda(const na_field* field);
int na_field_resolution(const na_field* field);
int na_field_energy(const na_field* field);
na_status na_field_dump_csv(const na_field* field, const char* path, const char* metadata);

/* ---- critical points ---- */

/* kind codes: 0 = maximum, 1 = minimum, 2 = saddle */
na_status na_find_critical_points(const na_field* field, na_critical_set** out);
void na_critical_set_destroy(na_critical_set* set);
int na_critical_set_size(const na_critical_set* set);
na_status na_critical_set_counts(const na_critical_set* set, int* n_max, int* n_min,
                                 int* n_saddle);
na_status na_critical_set_get(const na_critical_set* set, int index, double* x1, double* x2,
                              int* kind, double* value);
na_status na_critical_set_export_csv(const na_critical_set* set, const char* path,
                                     const char* metadata);

/* ---- Neumann domains ---- */

/* kind codes: 0 = lens, 1 = wedge, 2 = star */
na_status na_assemble_domains(const na_field* field, const na_critical_set* crit,
                              double max_step, int threads, na_census** out);
void na_census_destroy(na_census* census);
int na_census_size(const na_census* census);
int na_census_excluded(const na_census* census);
na_status na_census_get(const na_census* census, int index, int* kind, double* area,
                        double* perimeter, double* rho);
na_status na_census_export_csv(const na_census* census, const char* path, const char* metadata);

/* class codes for statistics: 0 = all, 1 = lens, 2 = wedge, 3 = star */
na_status na_rho_stats_new(double bin_width, double hi, na_rho_stats** out);
void na_rho_stats_destroy(na_rho_stats* stats);
na_status na_rho_stats_add_census(na_rho_stats* stats, const na_census* census);
long na_rho_stats_count(const na_rho_stats* stats, int klass);
long na_rho_stats_excluded(const na_rho_stats* stats);
na_status na_rho_stats_exceedance(const na_rho_stats* stats, int klass, double* frac_ground,
                                  double* frac_excited);
na_status na_rho_stats_export_csv(const na_rho_stats* stats, const char* path,
                                  const char* metadata);
na_status na_rho_stats_export_json(const na_rho_stats* stats, const char* path,
                                   const char* config_json);

/* ---- star-domain analytics ---- */

typedef struct na_constants {
  double j0;
  double j1p;
  double rho_ground;
  double rho_excited;
  double gamma_area;
  double alpha_min;
  double alpha_max;
} na_constants;

na_status na_get_constants(na_constants* out);
/* The area constant by the independent tanh-sinh route. */
double na_gamma_area_second_route(void);

na_status na_star_gamma(double a, double b, double x, double* value);
na_status na_star_gamma_deriv(double a, double b, double x, double* value);
na_status na_star_lambda(double a, double b, double* value);
na_status na_star_quarter_area(double a, double b, double* value);
na_status na_star_perimeter(double a, double b, double* value);
na_status na_star_cos_power_remainder(double a, double b, double x, double* value);
na_status na_star_flow_line(double a, double b, double g, double x1, double* x2);
na_status na_star_asymptotics(double a, double b, double window, double* wedge_slope,
                              double* cusp_exponent);
na_status na_star_reference_sector(double a, double b, double alpha, double* radius);
na_status na_sector_ground_state(double alpha, double radius, double* lambda);
na_status na_star_admissibility(double a, double b, double* alpha_lo, double* alpha_hi,
                                int* feasible, double* alpha_best, double* margin);
na_status na_star_rho(double a, double b, double* rho_star, double* rho_lens);

/* ---- mixed-boundary eigensolver ---- */

typedef struct na_eigen_result {
  double eigenvalue;
  double extrapolated;
  double residual;
  int n_cells;
} na_eigen_result;

/* side: 'v' (Dirichlet on x1=0) or 'h' (Dirichlet on x2=0) */
na_status na_solve_quarter(double a, double b, char side, int n_cells, na_eigen_result* out);
na_status na_ground_state_gap(double a, double b, int n_cells, double* lambda_v,
                              double* lambda_h, double* gap, double* error_estimate);
na_status na_solve_sector(double alpha, double radius, int n_cells, na_eigen_result* out);
/* shape: '1' closed interior nodal curve, '2' nodal line h, '3' nodal line v */
na_status na_classify_shape(double a, double b, char side, int n_cells, char* shape);
na_status na_dirichlet_disk(double radius, int grid, double* lambda);
na_status na_export_spectral_json(double a, double b, char side, const na_eigen_result* result,
                                  const char* path, const char* config_json);

/* ---- rearrangement ---- */

typedef struct na_rearrange_summary {
  double norm_psi;     /* L2 norm over the quarter domain */
  double norm_star;    /* L2 norm of the rearrangement over the sector */
  double grad_lhs;     /* Dirichlet integral of the rearrangement */
  double grad_rhs;     /* Dirichlet integral of the original */
  int grad_holds;
  double perimeter_fraction_holds;
  double equimeasure_max_error; /* worst |{psi*>t}| vs mu(t) gap, in units of area */
} na_rearrange_summary;

/* test function: the partner separable eigenfunction vanishing on h */
na_status na_rearrange_eigenfunction(double a, double b, double alpha, int nu, int nw,
                                     int n_thresholds, na_rearrange_summary* out);
/* test function: seeded nonnegative bump combination vanishing near h */
na_status na_rearrange_bumps(double a, double b, double alpha, uint64_t seed, int nu, int nw,
                             int n_thresholds, na_rearrange_summary* out);
na_status na_rearrange_export_report(double a, double b, double alpha, int nu, int nw,
                                     int n_thresholds, const char* path,
                                     const char* config_json);

/* ---- isoperimetric functionals ---- */

na_status na_arc_minimizer(double a, double b, double eta, double* F, double* C, double* radius,
                           double* phi);

typedef struct na_cheeger_summary {
  double eta_transition;
  double min_C;
  double eta_min_C;
  double cutoff_eta;
  int transition_within_grid;
} na_cheeger_summary;

na_status na_cheeger_curve_csv(double a, double b, double eta_lo, double eta_hi, int n,
                               int gaussian_approx, const char* path, const char* metadata,
                               na_cheeger_summary* out);
na_status na_convexity_check(double a, double b, int* convex);

#ifdef __cplusplus
}
#endif

#endif
