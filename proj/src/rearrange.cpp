#include "neumann/rearrange.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include <json.hpp>

#include "neumann/io.hpp"

namespace neumann::rearrange {

SampleSet quarter_samples(const stardomain::StarParams& p, int nu, int nw,
                          const std::function<double(Vec2)>& f) {
  SampleSet s;
  s.values.reserve(static_cast<size_t>(nu) * nw);
  s.areas.reserve(static_cast<size_t>(nu) * nw);
  const double du = p.a / nu;
  const double dw = 1.0 / nw;
  for (int i = 0; i < nu; ++i) {
    double u = (i + 0.5) * du;
    double g = stardomain::gamma_boundary(p, u);
    double cell_area = g * du * dw;
    if (cell_area <= 0) continue;
    for (int j = 0; j < nw; ++j) {
      double x2 = (j + 0.5) * dw * g;
      s.values.push_back(f({u, x2}));
      s.areas.push_back(cell_area);
      s.total_area += cell_area;
    }
  }
  return s;
}

SampleSet sector_samples(const stardomain::SectorParams& sec, int nr, int nphi,
                         const std::function<double(Vec2)>& f) {
  SampleSet s;
  const double dr = sec.radius / nr;
  const double dphi = sec.alpha / nphi;
  for (int i = 0; i < nr; ++i) {
    double r = (i + 0.5) * dr;
    double cell_area = r * dr * dphi;
    for (int j = 0; j < nphi; ++j) {
      double phi = -0.5 * sec.alpha + (j + 0.5) * dphi;
      s.values.push_back(f({r * std::cos(phi), r * std::sin(phi)}));
      s.areas.push_back(cell_area);
      s.total_area += cell_area;
    }
  }
  return s;
}

double LevelProfile::mu(double t) const {
  if (t <= thresholds.front()) {
    if (t <= 0) return total_area;
    // interpolate between (0, total) and the first grid point
    double t0 = thresholds.front();
    return total_area + (superlevel_area.front() - total_area) * (t / t0);
  }
  if (t >= max_value) return 0.0;
  if (t >= thresholds.back()) {
    double t0 = thresholds.back();
    double m0 = superlevel_area.back();
    return m0 * (max_value - t) / (max_value - t0);
  }
  auto it = std::upper_bound(thresholds.begin(), thresholds.end(), t);
  size_t hi = static_cast<size_t>(it - thresholds.begin());
  size_t lo = hi - 1;
  double w = (t - thresholds[lo]) / (thresholds[hi] - thresholds[lo]);
  return superlevel_area[lo] + (superlevel_area[hi] - superlevel_area[lo]) * w;
}

LevelProfile level_profile(const SampleSet& samples, int n_thresholds) {
  if (samples.values.empty()) throw Error(ErrorCode::invalid_argument, "no samples");
  double min_v = *std::min_element(samples.values.begin(), samples.values.end());
  if (min_v < -1e-12)
    throw Error(ErrorCode::negative_input, "rearrangement requires a nonnegative function");
  double max_v = *std::max_element(samples.values.begin(), samples.values.end());
  if (!(max_v > 0)) throw Error(ErrorCode::invalid_argument, "function is identically zero");

  // Sort once; mu(t) then falls out of a prefix-sum scan.
  std::vector<size_t> order(samples.values.size());
  std::iota(order.begin(), order.end(), size_t{0});
  std::sort(order.begin(), order.end(),
            [&](size_t a, size_t b) { return samples.values[a] < samples.values[b]; });

  LevelProfile prof;
  prof.total_area = samples.total_area;
  prof.max_value = max_v;
  if (n_thresholds <= 0) {
    // exact empirical profile: one knot per distinct sample value
    double below = 0.0;
    for (size_t k = 0; k < order.size(); ++k) {
      below += samples.areas[order[k]];
      double v = samples.values[order[k]];
      if (k + 1 < order.size() && samples.values[order[k + 1]] == v) continue;
      if (v <= 0 || v >= max_v) continue;
      prof.thresholds.push_back(v);
      prof.superlevel_area.push_back(samples.total_area - below);
    }
    if (prof.thresholds.empty()) {
      prof.thresholds.push_back(0.5 * max_v);
      prof.superlevel_area.push_back(samples.total_area);
    }
    return prof;
  }
  prof.thresholds.resize(n_thresholds);
  prof.superlevel_area.resize(n_thresholds);
  size_t pos = 0;
  double below = 0.0;
  for (int k = 0; k < n_thresholds; ++k) {
    double t = max_v * (k + 1.0) / (n_thresholds + 1.0);
    while (pos < order.size() && samples.values[order[pos]] <= t) {
      below += samples.areas[order[pos]];
      ++pos;
    }
    prof.thresholds[k] = t;
    prof.superlevel_area[k] = samples.total_area - below;
  }
  return prof;
}

double RearrangedFunction::value(double r) const {
  double target = 0.5 * sector.alpha * r * r;
  if (target >= profile.total_area) return 0.0;
  if (target <= 0) return profile.max_value;
  // invert the nonincreasing piecewise-linear mu
  const auto& ts = profile.thresholds;
  const auto& ms = profile.superlevel_area;
  if (target >= ms.front()) {
    // between t=0 (mu=total) and the first threshold
    double w = (profile.total_area - target) / (profile.total_area - ms.front());
    return ts.front() * w;
  }
  if (target < ms.back()) {
    double w = ms.back() > 0 ? target / ms.back() : 0.0;
    return profile.max_value + (ts.back() - profile.max_value) * w;
  }
  // binary search for ms[lo] >= target > ms[lo+1]
  size_t lo = 0, hi = ms.size() - 1;
  while (hi - lo > 1) {
    size_t mid = (lo + hi) / 2;
    if (ms[mid] >= target) lo = mid;
    else hi = mid;
  }
  double denom = ms[lo] - ms[hi];
  double w = denom > 0 ? (ms[lo] - target) / denom : 0.0;
  return ts[lo] + (ts[hi] - ts[lo]) * w;
}

double RearrangedFunction::dirichlet_energy() const {
  // psi* is piecewise linear between the radii of consecutive thresholds;
  // integrate |psi*'|^2 * alpha * r segment by segment.
  const auto& ts = profile.thresholds;
  const auto& ms = profile.superlevel_area;
  double alpha = sector.alpha;
  auto radius_of = [&](double area) { return std::sqrt(2.0 * std::max(area, 0.0) / alpha); };
  double energy = 0.0;
  // rim segment: from value 0 at R to the first threshold
  double r_prev = radius_of(profile.total_area);
  double t_prev = 0.0;
  for (size_t k = 0; k < ts.size(); ++k) {
    double r = radius_of(ms[k]);
    double dr = r_prev - r;
    if (dr > 0) {
      double slope = (ts[k] - t_prev) / dr;
      energy += slope * slope * alpha * 0.5 * (r_prev + r) * dr;
    }
    r_prev = r;
    t_prev = ts[k];
  }
  // core segment up to the maximum at r = 0
  if (r_prev > 0) {
    double slope = (profile.max_value - t_prev) / r_prev;
    energy += slope * slope * alpha * 0.5 * r_prev * r_prev;
  }
  return energy;
}

RearrangedFunction rearrange_to_sector(const LevelProfile& profile,
                                       const stardomain::SectorParams& s) {
  if (std::abs(s.area() - profile.total_area) > 1e-9 * std::max(1.0, profile.total_area))
    throw Error(ErrorCode::area_mismatch, "sector area must equal the profile's total area");
  return RearrangedFunction{s, profile};
}

GradientCheck gradient_inequality_check(const stardomain::StarParams& p, const TestFunction& f,
                                        double alpha, int nu, int nw, int n_thresholds) {
  SampleSet samples = quarter_samples(p, nu, nw, f.value);
  LevelProfile prof = level_profile(samples, n_thresholds);
  stardomain::SectorParams sec;
  sec.alpha = alpha;
  sec.radius = std::sqrt(2.0 * prof.total_area / alpha);
  RearrangedFunction star = rearrange_to_sector(prof, sec);

  GradientCheck check;
  // right side: quadrature of |grad psi|^2 over the quarter domain
  const double du = p.a / nu;
  const double dw = 1.0 / nw;
  for (int i = 0; i < nu; ++i) {
    double u = (i + 0.5) * du;
    double g = stardomain::gamma_boundary(p, u);
    double cell_area = g * du * dw;
    if (cell_area <= 0) continue;
    for (int j = 0; j < nw; ++j) {
      Vec2 x{u, (j + 0.5) * dw * g};
      Vec2 gr = f.gradient(x);
      check.rhs += gr.dot(gr) * cell_area;
    }
  }
  // left side: the exact Dirichlet integral of the piecewise rearrangement
  check.lhs = star.dirichlet_energy();
  check.holds = check.lhs <= check.rhs * (1.0 + 1e-9) + 1e-12;
  return check;
}

namespace {

struct ContourAccumulator {
  const stardomain::StarParams& p;
  double du, dw, excl_u;
  double length = 0.0;

  Vec2 to_physical(double u, double w) const {
    return {u, w * stardomain::gamma_boundary(p, u)};
  }

  void add_segment(Vec2 a_uw, Vec2 b_uw) {
    Vec2 a = to_physical(a_uw.x, a_uw.y);
    Vec2 b = to_physical(b_uw.x, b_uw.y);
    Vec2 mid = (a + b) * 0.5;
    double g_mid = stardomain::gamma_boundary(p, std::min(mid.x, p.a));
    if (mid.x < excl_u) return;                    // hugging v
    if (g_mid - mid.y < g_mid * dw) return;        // hugging gamma
    length += (b - a).norm();
  }
};

// Marching squares over one cell; corner order v00(u0,w0) v10 v11 v01.
void cell_contour(ContourAccumulator& acc, double t, double u0, double w0, double v00, double v10,
                  double v11, double v01) {
  int code = (v00 > t ? 1 : 0) | (v10 > t ? 2 : 0) | (v11 > t ? 4 : 0) | (v01 > t ? 8 : 0);
  if (code == 0 || code == 15) return;
  double du = acc.du, dw = acc.dw;
  auto lerp = [&](double a, double b) { return (t - a) / (b - a); };
  // edge crossing points in (u,w)
  Vec2 bottom{u0 + du * lerp(v00, v10), w0};
  Vec2 top{u0 + du * lerp(v01, v11), w0 + dw};
  Vec2 left{u0, w0 + dw * lerp(v00, v01)};
  Vec2 right{u0 + du, w0 + dw * lerp(v10, v11)};
  switch (code) {
    case 1: case 14: acc.add_segment(bottom, left); break;
    case 2: case 13: acc.add_segment(bottom, right); break;
    case 3: case 12: acc.add_segment(left, right); break;
    case 4: case 11: acc.add_segment(top, right); break;
    case 6: case 9: acc.add_segment(bottom, top); break;
    case 7: case 8: acc.add_segment(top, left); break;
    case 5: case 10: {
      double center = 0.25 * (v00 + v10 + v11 + v01);
      bool center_above = center > t;
      if ((code == 5) == center_above) {
        acc.add_segment(left, top);
        acc.add_segment(bottom, right);
      } else {
        acc.add_segment(left, bottom);
        acc.add_segment(top, right);
      }
      break;
    }
    default: break;
  }
}

}  // namespace

PerimeterReport perimeter_inequality_check(const stardomain::StarParams& p, const TestFunction& f,
                                           double alpha, int nu, int nw, int n_thresholds) {
  // node values on the mapped grid
  std::vector<double> node_vals(static_cast<size_t>(nu + 1) * (nw + 1));
  const double du = p.a / nu;
  const double dw = 1.0 / nw;
  double max_v = 0.0;
  for (int i = 0; i <= nu; ++i) {
    double u = std::min(i * du, p.a * (1 - 1e-12));
    double g = stardomain::gamma_boundary(p, u);
    for (int j = 0; j <= nw; ++j) {
      double v = f.value({u, j * dw * g});
      node_vals[static_cast<size_t>(i) * (nw + 1) + j] = v;
      max_v = std::max(max_v, v);
    }
  }
  SampleSet samples = quarter_samples(p, nu, nw, f.value);
  LevelProfile prof = level_profile(samples, std::max(n_thresholds, 256));

  PerimeterReport report;
  int holds_count = 0;
  for (int k = 0; k < n_thresholds; ++k) {
    double t = max_v * (k + 1.0) / (n_thresholds + 1.0);
    ContourAccumulator acc{p, du, dw, du};
    for (int i = 0; i < nu; ++i) {
      for (int j = 0; j < nw; ++j) {
        size_t base = static_cast<size_t>(i) * (nw + 1) + j;
        cell_contour(acc, t, i * du, j * dw, node_vals[base], node_vals[base + nw + 1],
                     node_vals[base + nw + 2], node_vals[base + 1]);
      }
    }
    ThresholdRow row;
    row.t = t;
    row.mu = prof.mu(t);
    row.perim_h_original = acc.length;
    row.perim_h_star = alpha * std::sqrt(2.0 * row.mu / alpha);
    row.holds = row.perim_h_original >= row.perim_h_star * (1.0 - 1e-9);
    if (row.holds) ++holds_count;
    report.rows.push_back(row);
  }
  report.fraction_holds = report.rows.empty() ? 0.0 : static_cast<double>(holds_count) / report.rows.size();
  return report;
}

void export_report_json(const PerimeterReport& report, const std::string& path,
                        const std::string& config_json) {
  nlohmann::json j;
  j["config"] = nlohmann::json::parse(config_json.empty() ? "{}" : config_json);
  j["fraction_holds"] = report.fraction_holds;
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : report.rows) {
    rows.push_back({{"t", r.t},
                    {"mu", r.mu},
                    {"perim_h_original", r.perim_h_original},
                    {"perim_h_star", r.perim_h_star},
                    {"holds", r.holds}});
  }
  j["thresholds"] = rows;
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::io, "cannot open " + path);
  out << j.dump(2) << "\n";
}

namespace {

// Quintic smoothstep and derivative on [0,1].
double smooth01(double x) {
  if (x <= 0) return 0.0;
  if (x >= 1) return 1.0;
  return x * x * x * (10.0 + x * (-15.0 + 6.0 * x));
}

double dsmooth01(double x) {
  if (x <= 0 || x >= 1) return 0.0;
  return x * x * (30.0 + x * (-60.0 + 30.0 * x));
}

}  // namespace

TestFunction random_bumps(const stardomain::StarParams& p, uint64_t seed, int n_bumps) {
  struct Bump {
    Vec2 center;
    double width;
    double amp;
  };
  auto bumps = std::make_shared<std::vector<Bump>>();
  SplitMix64 rng(seed);
  for (int k = 0; k < n_bumps; ++k) {
    Bump bump;
    bump.center.x = 0.65 * p.b + (2.0 * p.b) * rng.uniform();
    double g = stardomain::gamma_boundary(p, std::min(bump.center.x, 0.999 * p.a));
    bump.center.y = g * (0.3 + 0.55 * rng.uniform());
    bump.width = p.b * (0.25 + 0.35 * rng.uniform());
    bump.amp = 0.5 + rng.uniform();
    bumps->push_back(bump);
  }
  double h0 = 0.15 * p.b, h1 = 0.45 * p.b;
  TestFunction f;
  f.value = [bumps, h0, h1](Vec2 x) {
    double s = smooth01((x.y - h0) / (h1 - h0));
    if (s == 0.0) return 0.0;
    double v = 0.0;
    for (const auto& bump : *bumps) {
      Vec2 d = x - bump.center;
      v += bump.amp * std::exp(-0.5 * d.dot(d) / (bump.width * bump.width));
    }
    return v * s;
  };
  f.gradient = [bumps, h0, h1](Vec2 x) {
    double xi = (x.y - h0) / (h1 - h0);
    double s = smooth01(xi);
    double ds = dsmooth01(xi) / (h1 - h0);
    Vec2 grad{0, 0};
    double v = 0.0;
    for (const auto& bump : *bumps) {
      Vec2 d = x - bump.center;
      double e = bump.amp * std::exp(-0.5 * d.dot(d) / (bump.width * bump.width));
      v += e;
      grad += d * (-e / (bump.width * bump.width));
    }
    return Vec2{grad.x * s, grad.y * s + v * ds};
  };
  return f;
}

TestFunction separable_partner(const stardomain::StarParams& p) {
  double ka = 0.5 * M_PI / p.a;
  double kb = 0.5 * M_PI / p.b;
  TestFunction f;
  f.value = [ka, kb](Vec2 x) { return 2.0 * std::cos(ka * x.x) * std::sin(kb * x.y); };
  f.gradient = [ka, kb](Vec2 x) {
    return Vec2{-2.0 * ka * std::sin(ka * x.x) * std::sin(kb * x.y),
                2.0 * kb * std::cos(ka * x.x) * std::cos(kb * x.y)};
  };
  return f;
}

}  // namespace neumann::rearrange
