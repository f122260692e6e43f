#include "neumann/stardomain.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <vector>

#include "neumann/io.hpp"
#include "neumann/quadrature.hpp"
#include "neumann/special.hpp"

namespace neumann::stardomain {

namespace {

// log(cos(t)) for t in [0, pi/2), via log1p(-2 sin^2(t/2)).
double log_cos(double t) {
  double s = std::sin(0.5 * t);
  return std::log1p(-2.0 * s * s);
}

// log(cos t) + t^2/2, the (negative) tail of the cosine-power exponent.
// Series for small t avoids the catastrophic cancellation of the direct form.
double log_cos_tail(double t) {
  if (t < 0.35) {
    double t2 = t * t;
    // ln cos t = -t^2/2 - t^4/12 - t^6/45 - 17 t^8/2520 - 31 t^10/14175 - ...
    return -t2 * t2 *
           (1.0 / 12 + t2 * (1.0 / 45 + t2 * (17.0 / 2520 + t2 * (31.0 / 14175 + t2 * 691.0 / 467775))));
  }
  return log_cos(t) + 0.5 * t * t;
}

}  // namespace

StarParams::StarParams(double a_, double b_) : a(a_), b(b_) {
  if (!(a > 0) || !(b > 0))
    throw Error(ErrorCode::invalid_argument, "star parameters must be positive");
  if (b > a * (1.0 + 1e-12))
    throw Error(ErrorCode::invalid_argument, "require b <= a (b > a is the same domain rotated)");
}

double gamma_boundary(const StarParams& p, double x) {
  x = std::abs(x);
  if (x > p.a * (1.0 + 1e-12)) throw Error(ErrorCode::invalid_argument, "|x| must be <= a");
  if (x >= p.a) return 0.0;
  double theta = 0.5 * M_PI * x / p.a;
  double beta = p.exponent();
  double logp = beta * log_cos(theta);
  double cospow = std::exp(logp);
  return 2.0 * p.b / M_PI * std::asin(cospow);
}

double gamma_derivative(const StarParams& p, double x) {
  double sign = x < 0 ? -1.0 : 1.0;
  x = std::abs(x);
  if (x > p.a * (1.0 + 1e-12)) throw Error(ErrorCode::invalid_argument, "|x| must be <= a");
  double theta = 0.5 * M_PI * x / p.a;
  double beta = p.exponent();
  // gamma' = -(a/b) tan(theta) p / sqrt(1 - p^2) with p = cos(theta)^beta.
  // 1 - p^2 = -expm1(2 beta log cos theta) keeps the wedge limit (-1) exact.
  double logp = beta * log_cos(theta);
  double one_minus_p2 = -std::expm1(2.0 * logp);
  if (one_minus_p2 <= 0.0) return -sign;  // x == 0 at double precision
  if (theta >= 0.5 * M_PI) return 0.0;
  double val = -(p.a / p.b) * std::tan(theta) * std::exp(logp) / std::sqrt(one_minus_p2);
  return sign * val;
}

double log_gamma_near_cusp(const StarParams& p, double s) {
  if (!(s > 0) || s > p.a)
    throw Error(ErrorCode::invalid_argument, "cusp distance must be in (0, a]");
  // gamma(a-s) = (2b/pi) asin(sin(pi s/2a)^beta); asin(q)/q -> 1 as q -> 0.
  double beta = p.exponent();
  double sn = std::sin(0.5 * M_PI * s / p.a);
  double logq = beta * std::log(sn);
  double corr = 0.0;
  if (logq > -300.0) {
    double q = std::exp(logq);
    corr = std::log(std::asin(q) / q);
  }
  return std::log(2.0 * p.b / M_PI) + logq + corr;
}

double lambda_ab(const StarParams& p) {
  return 0.25 * M_PI * M_PI * (1.0 / (p.a * p.a) + 1.0 / (p.b * p.b));
}

double quarter_area(const StarParams& p) {
  return quadrature::adaptive([&](double x) { return gamma_boundary(p, x); }, 0.0, p.a, 1e-12);
}

double perimeter(const StarParams& p) {
  double quarter = quadrature::adaptive(
      [&](double x) {
        double d = gamma_derivative(p, x);
        return std::sqrt(1.0 + d * d);
      },
      0.0, p.a, 1e-12);
  return 4.0 * quarter;
}

double flow_line(const StarParams& p, double g, double x1) {
  double theta = 0.5 * M_PI * std::abs(x1) / p.a;
  if (std::abs(x1) >= p.a) return 0.0;
  double cospow = std::exp(p.exponent() * log_cos(theta));
  return 2.0 * p.b / M_PI * std::asin(std::sin(g) * cospow);
}

double cos_power_remainder(const StarParams& p, double x) {
  if (!(x > 0) || !(x < p.a))
    throw Error(ErrorCode::invalid_argument, "remainder defined for 0 < x < a");
  double theta = 0.5 * M_PI * x / p.a;
  // R_b = 1 - exp(beta (log cos theta + theta^2/2)); the exponent tail is <= 0.
  return -std::expm1(p.exponent() * log_cos_tail(theta));
}

namespace {

struct LinearFit {
  double intercept, slope, rms;
};

LinearFit fit_line(const std::vector<double>& xs, const std::vector<double>& ys) {
  size_t n = xs.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < n; ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  double denom = n * sxx - sx * sx;
  LinearFit fit;
  fit.slope = (n * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / n;
  double ss = 0;
  for (size_t i = 0; i < n; ++i) {
    double r = ys[i] - fit.intercept - fit.slope * xs[i];
    ss += r * r;
  }
  fit.rms = std::sqrt(ss / n);
  return fit;
}

}  // namespace

AsymptoticsReport boundary_asymptotics_check(const StarParams& p, double window) {
  if (!(window > 0) || window >= p.a)
    throw Error(ErrorCode::invalid_argument, "window must be in (0, a)");
  const int n = 16;
  AsymptoticsReport report;

  std::vector<double> xs(n), ys(n);
  for (int i = 0; i < n; ++i) {
    double x = window * (0.5 + 0.5 * (i + 0.5) / n);  // [w/2, w]
    xs[i] = x;
    ys[i] = gamma_boundary(p, x);
  }
  LinearFit wedge = fit_line(xs, ys);
  report.wedge_slope = wedge.slope;
  report.wedge_residual = wedge.rms;
  if (std::abs(wedge.slope + 1.0) > 0.05)
    throw Error(ErrorCode::fit, "wedge slope fit far from -1");

  for (int i = 0; i < n; ++i) {
    double s = window * (0.5 + 0.5 * (i + 0.5) / n);
    xs[i] = std::log(s);
    ys[i] = log_gamma_near_cusp(p, s);
  }
  LinearFit cusp = fit_line(xs, ys);
  report.cusp_exponent = cusp.slope;
  report.cusp_residual = cusp.rms;
  if (std::abs(cusp.slope - p.exponent()) > 0.05 * std::max(1.0, p.exponent()))
    throw Error(ErrorCode::fit, "cusp exponent fit far from (a/b)^2");
  return report;
}

double SectorGroundState::profile(double r) const {
  return special::bessel_j0(r * j0 / radius);
}

SectorGroundState sector_ground_state(const SectorParams& s) {
  if (!(s.alpha > 0) || s.alpha > 2.0 * M_PI || !(s.radius > 0))
    throw Error(ErrorCode::invalid_argument, "invalid sector parameters");
  SectorGroundState gs;
  gs.j0 = special::constants().j0;
  gs.radius = s.radius;
  gs.lambda = gs.j0 * gs.j0 / (s.radius * s.radius);
  return gs;
}

SectorParams reference_sector(const StarParams& p, double alpha) {
  if (!(alpha > 0) || alpha > 2.0 * M_PI)
    throw Error(ErrorCode::invalid_argument, "alpha must lie in (0, 2*pi]");
  SectorParams s;
  s.alpha = alpha;
  s.radius = std::sqrt(2.0 * quarter_area(p) / alpha);
  return s;
}

AdmissibilityWindow admissibility_window(const StarParams& p) {
  const auto& c = special::constants();
  AdmissibilityWindow win;
  win.alpha_lo = c.alpha_min;
  win.alpha_hi = c.alpha_max;
  double lam = lambda_ab(p);
  double area = quarter_area(p);
  double eps0 = 1e-6 * lam;
  win.margin = -std::numeric_limits<double>::infinity();
  const int grid = 64;
  for (int k = 0; k < grid; ++k) {
    double alpha = win.alpha_lo + (k + 0.5) * (win.alpha_hi - win.alpha_lo) / grid;
    // R^2 = 2 area / alpha, so the sector ground state is j0^2 alpha / (2 area).
    double sector_lambda = c.j0 * c.j0 * alpha / (2.0 * area);
    double margin = sector_lambda - lam;
    if (margin > win.margin) {
      win.margin = margin;
      win.alpha_best = alpha;
    }
  }
  win.feasible = win.margin >= eps0;
  return win;
}

RhoPair rho_star_lens(const StarParams& p) {
  double area_q = quarter_area(p);
  double lam = lambda_ab(p);
  double perim = perimeter(p);
  RhoPair pair;
  pair.rho_star = 4.0 * area_q * std::sqrt(lam) / perim;
  double lens_area = 4.0 * p.a * p.b - 4.0 * area_q;
  pair.rho_lens = lens_area * std::sqrt(lam) / perim;
  if (pair.rho_star > pair.rho_lens * (1.0 + 1e-9))
    throw Error(ErrorCode::solver_failure, "rho_star exceeded rho_lens");
  return pair;
}

SweepRow sweep_row(const StarParams& p) {
  RhoPair pair = rho_star_lens(p);
  AdmissibilityWindow win = admissibility_window(p);
  return {p.a, p.b, p.ratio(), pair.rho_star, pair.rho_lens, win.feasible, win.alpha_best,
          win.margin};
}

void export_sweep_csv(const std::vector<SweepRow>& rows, const std::string& path,
                      const std::string& metadata) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::io, "cannot open " + path);
  io::write_metadata_comments(out, metadata);
  out << "a,b,ratio,rho_star,rho_lens,feasible,alpha_best,margin\n";
  for (const auto& r : rows) {
    out << io::fmt(r.a) << "," << io::fmt(r.b) << "," << io::fmt(r.ratio) << ","
        << io::fmt(r.rho_star) << "," << io::fmt(r.rho_lens) << "," << (r.feasible ? 1 : 0) << ","
        << io::fmt(r.alpha_best) << "," << io::fmt(r.margin) << "\n";
  }
}

}  // namespace neumann::stardomain
