#include "neumann/morse.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "neumann/io.hpp"

namespace neumann::morse {

const char* kind_name(CriticalKind kind) {
  switch (kind) {
    case CriticalKind::maximum: return "max";
    case CriticalKind::minimum: return "min";
    case CriticalKind::saddle: return "saddle";
  }
  return "?";
}

std::vector<int> CriticalSet::indices_of(CriticalKind kind) const {
  std::vector<int> out;
  for (size_t i = 0; i < points.size(); ++i)
    if (points[i].kind == kind) out.push_back(static_cast<int>(i));
  return out;
}

CriticalPoint refine_critical_point(const wavefield::ScalarField& field, Vec2 approx,
                                    const RefineOptions& opts) {
  Vec2 x = approx;
  bool converged = false;
  for (int it = 0; it <= opts.max_iterations; ++it) {
    wavefield::FieldJet jet = field.jet(x.x, x.y);
    if (jet.gradient.norm() < opts.gradient_tol) {
      converged = true;
      break;
    }
    if (it == opts.max_iterations) break;
    if (std::abs(jet.hessian.det()) < 1e-300)
      throw Error(ErrorCode::degenerate_critical, "singular Hessian during refinement");
    Vec2 step = jet.hessian.solve(jet.gradient);
    double len = step.norm();
    if (opts.max_step > 0 && len > opts.max_step) step = step * (opts.max_step / len);
    x = x - step;
  }
  if (!converged)
    throw Error(ErrorCode::no_convergence, "Newton refinement did not reach the gradient tolerance");

  CriticalPoint cp;
  cp.position = wrap01(x);
  wavefield::FieldJet jet = field.jet(x.x, x.y);
  cp.value = jet.value;
  jet.hessian.eigen(cp.hessian_eigs, cp.hessian_axes);
  double det = jet.hessian.det();
  if (std::abs(det) < opts.degenerate_tol)
    throw Error(ErrorCode::degenerate_critical, "field is not Morse at tolerance");
  if (det < 0) {
    cp.kind = CriticalKind::saddle;
  } else {
    cp.kind = jet.hessian.trace() < 0 ? CriticalKind::maximum : CriticalKind::minimum;
  }
  return cp;
}

namespace {

CriticalSet scan_once(const wavefield::ScalarField& field, int n, const DetectOptions& opts) {
  std::vector<double> g1, g2;
  field.gradient_grid(n, g1, g2);
  auto at = [&](const std::vector<double>& g, int i, int j) {
    return g[static_cast<size_t>(i % n) * n + (j % n)];
  };

  RefineOptions refine = opts.refine;
  if (refine.max_step <= 0) refine.max_step = 2.0 / n;

  std::vector<CriticalPoint> found;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double a1 = at(g1, i, j), b1 = at(g1, i + 1, j), c1 = at(g1, i, j + 1),
             d1 = at(g1, i + 1, j + 1);
      double lo1 = std::min({a1, b1, c1, d1}), hi1 = std::max({a1, b1, c1, d1});
      if (lo1 > 0 || hi1 < 0) continue;
      double a2 = at(g2, i, j), b2 = at(g2, i + 1, j), c2 = at(g2, i, j + 1),
             d2 = at(g2, i + 1, j + 1);
      double lo2 = std::min({a2, b2, c2, d2}), hi2 = std::max({a2, b2, c2, d2});
      if (lo2 > 0 || hi2 < 0) continue;
      Vec2 center{(i + 0.5) / n, (j + 0.5) / n};
      try {
        found.push_back(refine_critical_point(field, center, refine));
      } catch (const Error& e) {
        if (e.code() == ErrorCode::degenerate_critical) throw;
        // NoConvergence from a spurious cell candidate: drop it.
      }
    }
  }

  // Deduplicate: detections of the same kind closer than a quarter cell are
  // the same point. Distinct kinds are never merged; genuinely close
  // max/saddle pairs do occur in random fields.
  const double merge_radius = 1.0 / (4.0 * n);
  CriticalSet set;
  for (const auto& cp : found) {
    bool dup = false;
    for (const auto& kept : set.points) {
      if (cp.kind == kept.kind && torus_distance(cp.position, kept.position) < merge_radius) {
        dup = true;
        break;
      }
    }
    if (!dup) set.points.push_back(cp);
  }
  std::sort(set.points.begin(), set.points.end(), [](const CriticalPoint& a, const CriticalPoint& b) {
    if (a.position.x != b.position.x) return a.position.x < b.position.x;
    return a.position.y < b.position.y;
  });
  for (const auto& cp : set.points) {
    if (cp.kind == CriticalKind::maximum) ++set.n_max;
    else if (cp.kind == CriticalKind::minimum) ++set.n_min;
    else ++set.n_saddle;
  }
  if (set.euler_defect() != 0)
    throw Error(ErrorCode::euler_violation,
                "critical point counts violate the torus Euler relation");
  return set;
}

}  // namespace

CriticalSet find_critical_points(const wavefield::ScalarField& field, const DetectOptions& opts) {
  const int base = opts.scan_resolution > 0 ? opts.scan_resolution : field.resolution();
  // A scan that misses a point shows up as an Euler defect; rescan finer
  // before giving up, since the refined set is resolution-independent.
  for (int attempt = 0;; ++attempt) {
    try {
      return scan_once(field, base << attempt, opts);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::euler_violation || attempt >= 2) throw;
    }
  }
}

void export_critical_csv(const CriticalSet& set, const std::string& path,
                         const std::string& metadata) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::io, "cannot open " + path);
  io::write_metadata_comments(out, metadata);
  out << "x1,x2,kind,value\n";
  for (const auto& cp : set.points) {
    out << io::fmt(cp.position.x) << "," << io::fmt(cp.position.y) << "," << kind_name(cp.kind)
        << "," << io::fmt(cp.value) << "\n";
  }
}

}  // namespace neumann::morse
