#include "neumann/isoperimetric.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include "neumann/io.hpp"
#include "neumann/quadrature.hpp"

namespace neumann::isoperimetric {

double F_functional(double boundary_h_length, double area) {
  if (!(area > 0)) throw Error(ErrorCode::invalid_argument, "area must be positive");
  return boundary_h_length * boundary_h_length / (2.0 * area);
}

double cheeger_functional(double boundary_h_length, double area) {
  if (!(area > 0) || !(boundary_h_length > 0))
    throw Error(ErrorCode::invalid_argument, "area and length must be positive");
  double q = F_functional(boundary_h_length, area) / boundary_h_length;
  return 0.25 * q * q;
}

namespace {

// Boundary profile used by the minimizer family: the exact gamma_{a,b} or its
// small-b Gaussian stand-in.
struct Profile {
  stardomain::StarParams p;
  bool gaussian = false;

  double operator()(double x) const {
    if (!gaussian) return stardomain::gamma_boundary(p, x);
    double q = M_PI * M_PI / (8.0 * p.b * p.b);
    return 2.0 * p.b / M_PI * std::asin(std::exp(-q * x * x));
  }
  double deriv(double x) const {
    if (!gaussian) return stardomain::gamma_derivative(p, x);
    double q = M_PI * M_PI / (8.0 * p.b * p.b);
    double e = std::exp(-q * x * x);
    double one_minus = -std::expm1(-2.0 * q * x * x);
    if (one_minus <= 0) return -1.0;
    return 2.0 * p.b / M_PI * (-2.0 * q * x * e) / std::sqrt(one_minus);
  }
  double integral(double x_hi) const {
    return quadrature::adaptive([&](double x) { return (*this)(x); }, 0.0, x_hi, 1e-12);
  }
};

// 2 * Int_0^x gamma - x gamma(x)  ==  Int_0^x (gamma - s gamma'(s)) ds.
double tangent_area_integral(const Profile& prof, double x) {
  return 2.0 * prof.integral(x) - x * prof(x);
}

struct Branch1State {
  double yc, r, phi, area, length;
};

Branch1State branch1(const Profile& prof, double xq) {
  Branch1State s;
  double g = prof(xq);
  double dg = prof.deriv(xq);
  s.yc = g - xq * dg;
  s.r = xq * std::sqrt(1.0 + dg * dg);
  s.phi = std::atan2(1.0, -dg);
  s.area = 0.5 * (s.r * s.r * s.phi - s.yc * s.r * std::sin(s.phi)) +
           0.5 * tangent_area_integral(prof, xq);
  s.length = s.r * s.phi;
  return s;
}

struct Branch2State {
  double xj, r, theta_q, area, length;
};

Branch2State branch2(const Profile& prof, double xq) {
  Branch2State s;
  double g = prof(xq);
  double dg = prof.deriv(xq);
  double sq = std::sqrt(1.0 + dg * dg);
  double denom = 1.0 + dg / sq;
  if (!(denom > 0)) throw Error(ErrorCode::no_arc_found, "tangent arc undefined here");
  s.r = g / denom;
  s.xj = xq - s.r / sq;
  s.theta_q = std::atan2(dg, 1.0);
  double arc_int = s.xj * s.r * (std::sin(s.theta_q) + 1.0) +
                   s.r * s.r * (s.theta_q + 0.5 * M_PI) - s.r * s.r * std::cos(s.theta_q);
  s.area = 0.5 * arc_int + 0.5 * tangent_area_integral(prof, xq);
  s.length = s.xj + s.r * (s.theta_q + 0.5 * M_PI);
  return s;
}

// Abscissa where the branch-1 arc reaches the corner v∩h (yc = r).
double transition_abscissa(const Profile& prof) {
  double lo = 1e-9 * prof.p.a, hi = prof.p.a * (1.0 - 1e-9);
  auto fn = [&](double x) {
    double g = prof(x), dg = prof.deriv(x);
    return (g - x * dg) - x * std::sqrt(1.0 + dg * dg);
  };
  if (fn(hi) > 0) return hi;  // no transition before the cusp
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    if (fn(mid) > 0) lo = mid;
    else hi = mid;
  }
  return 0.5 * (lo + hi);
}

double solve_monotone(const std::function<double(double)>& area_of, double lo, double hi,
                      double eta) {
  double f_lo = area_of(lo) - eta;
  double f_hi = area_of(hi) - eta;
  if (f_lo > 0 || f_hi < 0) throw Error(ErrorCode::no_arc_found, "area outside the family's range");
  for (int it = 0; it < 120; ++it) {
    double mid = 0.5 * (lo + hi);
    if (area_of(mid) - eta > 0) hi = mid;
    else lo = mid;
    if (hi - lo < 1e-15 * std::max(1.0, hi)) break;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

std::vector<Vec2> ArcSet::closed_boundary(int n_gamma, int n_arc) const {
  std::vector<Vec2> loop;
  Vec2 w{0.0, stardomain::gamma_boundary(params, 0.0)};
  // v from attach_v up to w
  loop.push_back(attach_v);
  loop.push_back(w);
  // gamma from w to the attachment
  for (int k = 1; k <= n_gamma; ++k) {
    double x = attach_x * k / n_gamma;
    loop.push_back({x, stardomain::gamma_boundary(params, x)});
  }
  // arc back from attach_gamma to attach_v
  for (int k = 1; k < n_arc; ++k) {
    double tau = phi * (1.0 - static_cast<double>(k) / n_arc);
    loop.push_back({center.x + radius * std::sin(tau), center.y - radius * std::cos(tau)});
  }
  loop.push_back(attach_v);
  return loop;
}

ArcSet arc_minimizer(const stardomain::StarParams& p, double eta) {
  Profile prof{p, false};
  if (!(eta > 0) || eta >= stardomain::quarter_area(p))
    throw Error(ErrorCode::invalid_argument, "eta must lie in (0, |Lambda|)");
  double x_trans = transition_abscissa(prof);
  double eta_max = branch1(prof, x_trans).area;
  if (eta > eta_max)
    throw Error(ErrorCode::no_arc_found,
                "requested area exceeds the orthogonally attached arc family");
  auto area_of = [&](double x) { return branch1(prof, x).area; };
  double xq = solve_monotone(area_of, 1e-12 * p.a, x_trans, eta);
  Branch1State s = branch1(prof, xq);

  ArcSet out;
  out.params = p;
  out.eta = s.area;
  out.center = {0.0, s.yc};
  out.radius = s.r;
  out.attach_x = xq;
  out.attach_v = {0.0, s.yc - s.r};
  out.attach_gamma = {xq, prof(xq)};
  out.phi = s.phi;
  out.boundary_h_length = s.length;
  // residuals: the arc meets v orthogonally by construction (center on v);
  // at gamma the radius must align with the curve tangent.
  out.ortho_residual_v = 0.0;
  {
    double dg = prof.deriv(xq);
    Vec2 radius_dir = (out.attach_gamma - out.center).normalized();
    Vec2 tangent = Vec2{1.0, dg}.normalized();
    out.ortho_residual_gamma = std::asin(std::clamp(radius_dir.cross(tangent), -1.0, 1.0));
  }
  const int n_arc = 512;
  for (int k = 0; k <= n_arc; ++k) {
    double tau = s.phi * k / n_arc;
    out.arc.push_back({s.r * std::sin(tau), s.yc - s.r * std::cos(tau)});
  }
  return out;
}

CheegerCurve cheeger_curve(const stardomain::StarParams& p, const std::vector<double>& eta_grid,
                           bool gaussian_approx) {
  Profile prof{p, gaussian_approx};
  CheegerCurve curve;
  double x_trans = transition_abscissa(prof);
  curve.eta_transition = branch1(prof, x_trans).area;
  double x_hi = p.a * (1.0 - 1e-9);
  curve.cutoff_eta = branch2(prof, x_hi).area;
  curve.min_C = std::numeric_limits<double>::infinity();

  for (double eta : eta_grid) {
    CurvePoint pt;
    pt.eta = eta;
    try {
      if (eta <= curve.eta_transition) {
        auto area_of = [&](double x) { return branch1(prof, x).area; };
        double xq = solve_monotone(area_of, 1e-12 * p.a, x_trans, eta);
        Branch1State s = branch1(prof, xq);
        pt.radius = s.r;
        pt.phi = s.length / s.r;
        pt.F = F_functional(s.length, s.area);
        pt.C = cheeger_functional(s.length, s.area);
        pt.branch = 1;
      } else {
        curve.transition_within_grid = true;
        auto area_of = [&](double x) { return branch2(prof, x).area; };
        double xq = solve_monotone(area_of, x_trans * (1.0 - 1e-9), x_hi, eta);
        Branch2State s = branch2(prof, xq);
        pt.radius = s.r;
        pt.phi = s.length / s.r;
        pt.F = F_functional(s.length, s.area);
        pt.C = cheeger_functional(s.length, s.area);
        pt.branch = 2;
      }
    } catch (const Error&) {
      continue;  // eta beyond the family: reported through cutoff_eta
    }
    if (pt.C < curve.min_C) {
      curve.min_C = pt.C;
      curve.eta_min_C = pt.eta;
    }
    curve.points.push_back(pt);
  }
  if (curve.points.empty()) throw Error(ErrorCode::no_arc_found, "no eta in the grid was solvable");
  return curve;
}

bool convexity_check(const stardomain::StarParams& p) {
  const int n = 10000;
  double h = p.a / n;
  double prev = stardomain::gamma_boundary(p, 0.0);
  double cur = stardomain::gamma_boundary(p, h);
  for (int k = 1; k < n; ++k) {
    double next = stardomain::gamma_boundary(p, (k + 1) * h);
    if (next - 2.0 * cur + prev < -1e-10) return false;
    prev = cur;
    cur = next;
  }
  return true;
}

void export_curve_csv(const CheegerCurve& curve, const std::string& path,
                      const std::string& metadata) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::io, "cannot open " + path);
  io::write_metadata_comments(out, metadata);
  out << "eta,F,C,radius,phi\n";
  for (const auto& pt : curve.points) {
    out << io::fmt(pt.eta) << "," << io::fmt(pt.F) << "," << io::fmt(pt.C) << ","
        << io::fmt(pt.radius) << "," << io::fmt(pt.phi) << "\n";
  }
}

}  // namespace neumann::isoperimetric
