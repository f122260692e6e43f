#include "neumann/tracer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>

#include <json.hpp>

#include "neumann/io.hpp"
#include "neumann/special.hpp"

namespace neumann::tracer {

double Polyline::length() const {
  double len = 0.0;
  for (size_t i = 1; i < points.size(); ++i) len += (points[i] - points[i - 1]).norm();
  return len;
}

Vec2 Polyline::at_arclength(double s, bool from_end) const {
  if (points.empty()) throw Error(ErrorCode::invalid_argument, "empty polyline");
  if (s <= 0) return from_end ? points.back() : points.front();
  double acc = 0.0;
  size_t n = points.size();
  for (size_t k = 1; k < n; ++k) {
    const Vec2& p0 = from_end ? points[n - k] : points[k - 1];
    const Vec2& p1 = from_end ? points[n - 1 - k] : points[k];
    double seg = (p1 - p0).norm();
    if (acc + seg >= s) {
      double t = seg > 0 ? (s - acc) / seg : 0.0;
      return p0 + (p1 - p0) * t;
    }
    acc += seg;
  }
  return from_end ? points.front() : points.back();
}

Vec2 Polyline::end_direction(bool from_end, double delta) const {
  Vec2 anchor = from_end ? points.back() : points.front();
  Vec2 probe = at_arclength(delta, from_end);
  Vec2 d = probe - anchor;
  if (d.norm() == 0.0) {
    // Degenerate probe: fall back to the first distinct vertex.
    size_t n = points.size();
    for (size_t k = 1; k < n; ++k) {
      const Vec2& q = from_end ? points[n - 1 - k] : points[k];
      d = q - anchor;
      if (d.norm() > 0) break;
    }
  }
  return d.normalized();
}

namespace {

// Bucketed lookup of critical points of one kind, with torus wraparound.
class PointLocator {
 public:
  PointLocator(const morse::CriticalSet& crit, morse::CriticalKind kind) : buckets_(kGrid * kGrid) {
    for (size_t i = 0; i < crit.points.size(); ++i) {
      if (crit.points[i].kind != kind) continue;
      const Vec2& p = crit.points[i].position;
      buckets_[cell(p)].push_back(static_cast<int>(i));
      positions_.push_back(p);
      ids_.push_back(static_cast<int>(i));
    }
  }

  // Nearest point within the 3x3 bucket neighborhood; distance defaults to
  // one bucket width when nothing is nearby.
  std::pair<int, double> nearest(const Vec2& unwrapped, const morse::CriticalSet& crit) const {
    Vec2 p = wrap01(unwrapped);
    int bi = static_cast<int>(p.x * kGrid);
    int bj = static_cast<int>(p.y * kGrid);
    int best = -1;
    double best_d = 1.0 / kGrid;
    for (int di = -1; di <= 1; ++di) {
      for (int dj = -1; dj <= 1; ++dj) {
        int ci = (bi + di + kGrid) % kGrid;
        int cj = (bj + dj + kGrid) % kGrid;
        for (int idx : buckets_[static_cast<size_t>(ci) * kGrid + cj]) {
          double d = torus_distance(p, crit.points[idx].position);
          if (d < best_d) {
            best_d = d;
            best = idx;
          }
        }
      }
    }
    return {best, best_d};
  }

 private:
  static constexpr int kGrid = 24;

  size_t cell(const Vec2& p) const {
    int i = std::min(kGrid - 1, static_cast<int>(p.x * kGrid));
    int j = std::min(kGrid - 1, static_cast<int>(p.y * kGrid));
    return static_cast<size_t>(i) * kGrid + j;
  }

  std::vector<std::vector<int>> buckets_;
  std::vector<Vec2> positions_;
  std::vector<int> ids_;
};

// Dormand-Prince 5(4) coefficients.
constexpr double kA21 = 1.0 / 5;
constexpr double kA31 = 3.0 / 40, kA32 = 9.0 / 40;
constexpr double kA41 = 44.0 / 45, kA42 = -56.0 / 15, kA43 = 32.0 / 9;
constexpr double kA51 = 19372.0 / 6561, kA52 = -25360.0 / 2187, kA53 = 64448.0 / 6561,
                 kA54 = -212.0 / 729;
constexpr double kA61 = 9017.0 / 3168, kA62 = -355.0 / 33, kA63 = 46732.0 / 5247,
                 kA64 = 49.0 / 176, kA65 = -5103.0 / 18656;
constexpr double kB1 = 35.0 / 384, kB3 = 500.0 / 1113, kB4 = 125.0 / 192, kB5 = -2187.0 / 6784,
                 kB6 = 11.0 / 84;
constexpr double kE1 = 71.0 / 57600, kE3 = -71.0 / 16695, kE4 = 71.0 / 1920,
                 kE5 = -17253.0 / 339200, kE6 = 22.0 / 525, kE7 = -1.0 / 40;

}  // namespace

TracedLine trace_neumann_line(const wavefield::ScalarField& field, const morse::CriticalSet& crit,
                              int saddle_index, bool ascending, int sign,
                              const TraceOptions& opts) {
  const morse::CriticalPoint& saddle = crit.points[saddle_index];
  if (saddle.kind != morse::CriticalKind::saddle)
    throw Error(ErrorCode::invalid_argument, "tracing must start at a saddle");
  if (sign != 1 && sign != -1) throw Error(ErrorCode::invalid_argument, "sign must be +-1");

  // Ascent leaves along the positive-eigenvalue axis, descent along the
  // negative one (eigenvalues are sorted ascending).
  Vec2 axis = ascending ? saddle.hessian_axes[1] : saddle.hessian_axes[0];
  Vec2 dir = axis * static_cast<double>(sign);
  double flow_sign = ascending ? 1.0 : -1.0;

  morse::CriticalKind target_kind =
      ascending ? morse::CriticalKind::maximum : morse::CriticalKind::minimum;
  PointLocator targets(crit, target_kind);

  auto velocity = [&](const Vec2& x) {
    Vec2 g = field.gradient(x.x, x.y) * flow_sign;
    double n = g.norm();
    double denom = std::min(n, opts.grad_switch);
    if (denom <= 0) return Vec2{0, 0};
    return g * (1.0 / denom);
  };

  TracedLine out;
  out.saddle = saddle_index;
  out.ascending = ascending;
  out.initial_direction = dir;

  Vec2 x = saddle.position + dir * opts.saddle_offset;
  out.line.points.push_back(saddle.position);
  out.line.points.push_back(x);
  double arc = opts.saddle_offset;

  Vec2 k1 = velocity(x);
  double h = 10.0 * opts.saddle_offset;
  const double h_min = 1e-14;
  long max_iter = 500000;

  for (long it = 0; it < max_iter; ++it) {
    auto [near_id, near_d] = targets.nearest(x, crit);
    if (near_id >= 0 && near_d < opts.capture_radius) {
      Vec2 delta = torus_delta(wrap01(x), crit.points[near_id].position);
      out.line.points.push_back(x + delta);
      out.extremum = near_id;
      return out;
    }
    if (arc > opts.max_arc_length)
      throw Error(ErrorCode::escape, "arc length exceeded without extremum capture");

    // Never step further than a fraction of the distance to the nearest
    // extremum, so the capture ball cannot be jumped over.
    double speed = std::max(k1.norm(), 1e-12);
    double len_cap = std::max(0.25 * near_d, 0.5 * opts.capture_radius);
    double h_eff = std::min({h, opts.max_step / speed * 1.0, len_cap / speed});

    Vec2 k2 = velocity(x + k1 * (h_eff * kA21));
    Vec2 k3 = velocity(x + k1 * (h_eff * kA31) + k2 * (h_eff * kA32));
    Vec2 k4 = velocity(x + k1 * (h_eff * kA41) + k2 * (h_eff * kA42) + k3 * (h_eff * kA43));
    Vec2 k5 = velocity(x + k1 * (h_eff * kA51) + k2 * (h_eff * kA52) + k3 * (h_eff * kA53) +
                       k4 * (h_eff * kA54));
    Vec2 k6 = velocity(x + k1 * (h_eff * kA61) + k2 * (h_eff * kA62) + k3 * (h_eff * kA63) +
                       k4 * (h_eff * kA64) + k5 * (h_eff * kA65));
    Vec2 dx = (k1 * kB1 + k3 * kB3 + k4 * kB4 + k5 * kB5 + k6 * kB6) * h_eff;
    Vec2 y = x + dx;
    Vec2 k7 = velocity(y);
    Vec2 err_vec = (k1 * kE1 + k3 * kE3 + k4 * kE4 + k5 * kE5 + k6 * kE6 + k7 * kE7) * h_eff;

    double scale = opts.atol + opts.rtol * std::max({std::abs(x.x), std::abs(x.y), 1.0});
    double err = std::max(std::abs(err_vec.x), std::abs(err_vec.y)) / scale;

    if (err <= 1.0) {
      x = y;
      arc += dx.norm();
      out.line.points.push_back(x);
      k1 = k7;  // FSAL
    }
    double factor = err > 0 ? 0.9 * std::pow(err, -0.2) : 5.0;
    h = h_eff * std::clamp(factor, 0.2, 5.0);
    if (h < h_min) throw Error(ErrorCode::escape, "step size underflow during tracing");
  }
  throw Error(ErrorCode::escape, "iteration limit exceeded during tracing");
}

const char* kind_name(DomainKind kind) {
  switch (kind) {
    case DomainKind::lens: return "lens";
    case DomainKind::wedge: return "wedge";
    case DomainKind::star: return "star";
  }
  return "?";
}

namespace {

double angle_between(const Vec2& u, const Vec2& v) {
  double c = std::clamp(u.dot(v), -1.0, 1.0);
  return std::acos(c);
}

// Zero/pi label of a single extremal corner: do the two boundary lines leave
// the extremum on the same side (cusp corner, star-like) or on opposite sides
// (flat corner, lens-like)?
enum class CornerLabel { zero, pi };

CornerLabel corner_label(const morse::CriticalPoint& extremum, const Polyline& out_piece,
                         const Polyline& in_piece, double probe, double* angle_out) {
  Vec2 t1 = out_piece.end_direction(false, probe);
  Vec2 t2 = in_piece.end_direction(true, probe);
  double theta = angle_between(t1, t2);
  if (angle_out) *angle_out = theta;
  if (theta < M_PI / 8) return CornerLabel::zero;
  if (theta > 7 * M_PI / 8) return CornerLabel::pi;

  // Mid-range angle at probe scale. Asymptotically the angle is 0 or pi for
  // a Morse extremum, so decide by more robust cues. Chord directions at a
  // common larger scale separate the two sides much earlier than tangents.
  double scale = std::min({0.25 * out_piece.length(), 0.25 * in_piece.length(), 1e-2});
  Vec2 u1 = (out_piece.at_arclength(scale, false) - out_piece.points.front());
  Vec2 u2 = (in_piece.at_arclength(scale, true) - in_piece.points.back());
  if (u1.norm() == 0 || u2.norm() == 0)
    throw Error(ErrorCode::ambiguous_angle, "degenerate corner probe");
  u1 = u1.normalized();
  u2 = u2.normalized();
  double chord_angle = angle_between(u1, u2);
  if (chord_angle < M_PI / 3) return CornerLabel::zero;
  if (chord_angle > 2 * M_PI / 3) return CornerLabel::pi;

  // The side (sign of the slow-axis coordinate) a trajectory approaches an
  // extremum from is invariant in the linearized flow even when the tangent
  // has not yet aligned with the slow axis, so read the sign near the
  // capture scale: equal signs mean a cusp corner.
  double mu0 = std::abs(extremum.hessian_eigs[0]);
  double mu1 = std::abs(extremum.hessian_eigs[1]);
  double lo = std::min(mu0, mu1), hi = std::max(mu0, mu1);
  double aniso = hi > 0 ? 1.0 - lo / hi : 0.0;
  if (aniso > 1e-3) {
    Vec2 slow = mu0 <= mu1 ? extremum.hessian_axes[0] : extremum.hessian_axes[1];
    double sign_scale = std::min({5e-4, 0.25 * out_piece.length(), 0.25 * in_piece.length()});
    Vec2 s1 = out_piece.at_arclength(sign_scale, false) - out_piece.points.front();
    Vec2 s2 = in_piece.at_arclength(sign_scale, true) - in_piece.points.back();
    double p1 = s1.dot(slow);
    double p2 = s2.dot(slow);
    // require the slow coordinate to clear the integrator noise floor
    if (std::abs(p1) > 1e-7 && std::abs(p2) > 1e-7)
      return p1 * p2 > 0 ? CornerLabel::zero : CornerLabel::pi;
    throw Error(ErrorCode::ambiguous_angle, "corner sits on the fast Hessian axis");
  }
  // Umbilic extremum (the symmetric separable case, angle pi/2 exactly): the
  // angle carries no information. Label by the corner bisector so that the
  // x1-aligned cusp pair of the centered parametrization reads as star.
  Vec2 bis = (t1 + t2);
  if (bis.norm() < 1e-6)
    throw Error(ErrorCode::ambiguous_angle, "degenerate corner bisector at umbilic extremum");
  bis = bis.normalized();
  return std::abs(bis.x) >= std::abs(bis.y) ? CornerLabel::zero : CornerLabel::pi;
}

}  // namespace

ClassifyResult classify_domain(const NeumannDomain& domain, const wavefield::ScalarField& field,
                               const morse::CriticalSet& crit, double angle_probe) {
  (void)field;
  ClassifyResult res{};
  CornerLabel label_max = CornerLabel::zero, label_min = CornerLabel::zero;
  bool saw_max = false, saw_min = false;
  for (int k = 0; k < 4; ++k) {
    int ci = domain.corners[k];
    const auto& cp = crit.points[ci];
    if (cp.kind == morse::CriticalKind::saddle) continue;
    // Incident pieces: boundary[k] starts at this corner, boundary[k-1] ends here.
    const Polyline& out_piece = domain.boundary[k];
    const Polyline& in_piece = domain.boundary[(k + 3) % 4];
    double angle = 0.0;
    CornerLabel label = corner_label(cp, out_piece, in_piece, angle_probe, &angle);
    if (cp.kind == morse::CriticalKind::maximum) {
      label_max = label;
      res.angle_at_max = angle;
      saw_max = true;
    } else {
      label_min = label;
      res.angle_at_min = angle;
      saw_min = true;
    }
  }
  if (!saw_max || !saw_min)
    throw Error(ErrorCode::assembly, "domain lacks a max/min corner pair");
  if (label_max == CornerLabel::zero && label_min == CornerLabel::zero)
    res.kind = DomainKind::star;
  else if (label_max == CornerLabel::pi && label_min == CornerLabel::pi)
    res.kind = DomainKind::lens;
  else
    res.kind = DomainKind::wedge;
  return res;
}

Geometry domain_geometry(const NeumannDomain& domain, double lambda) {
  double area2 = 0.0;
  double perim = 0.0;
  for (const auto& piece : domain.boundary) {
    perim += piece.length();
    for (size_t i = 1; i < piece.points.size(); ++i) {
      const Vec2& p = piece.points[i - 1];
      const Vec2& q = piece.points[i];
      area2 += p.cross(q);
    }
  }
  Geometry g;
  g.area = 0.5 * std::abs(area2);
  g.perimeter = perim;
  g.rho = g.area * std::sqrt(lambda) / perim;
  return g;
}

namespace {

struct HalfEdge {
  int line = -1;       // index into the traced-line list
  bool forward = true; // true: saddle -> extremum
  int tail = -1;
  int head = -1;
  double angle = 0.0;  // outgoing direction angle at tail
  int next_candidate = -1;
};

}  // namespace

DomainCensus assemble_domains(const wavefield::ScalarField& field, const morse::CriticalSet& crit,
                              const AssembleOptions& opts) {
  DomainCensus census;
  census.lambda = field.lambda();

  std::vector<int> saddles = crit.indices_of(morse::CriticalKind::saddle);
  struct Task {
    int saddle;
    bool ascending;
    int sign;
  };
  std::vector<Task> tasks;
  for (int s : saddles)
    for (bool asc : {true, false})
      for (int sign : {1, -1}) tasks.push_back({s, asc, sign});

  std::vector<TracedLine> lines(tasks.size());
  std::vector<char> ok(tasks.size(), 0);
  parallel_for(tasks.size(), opts.threads, [&](size_t i) {
    try {
      lines[i] = trace_neumann_line(field, crit, tasks[i].saddle, tasks[i].ascending,
                                    tasks[i].sign, opts.trace);
      ok[i] = 1;
    } catch (const Error&) {
      ok[i] = 0;
    }
  });

  std::vector<TracedLine> good;
  for (size_t i = 0; i < lines.size(); ++i) {
    if (ok[i]) good.push_back(std::move(lines[i]));
    else ++census.failed_lines;
  }
  census.excluded_count += 2 * census.failed_lines;

  // Half-edge complex over the critical points. Arrival directions at one
  // extremum are compared at a common arc distance: lines reach an extremum
  // nearly parallel (tangent to the slow Hessian axis), and probing each at
  // its own distance can scramble their cyclic order.
  std::vector<double> vertex_probe(crit.points.size(), opts.angle_order);
  for (const TracedLine& tl : good) {
    vertex_probe[tl.extremum] =
        std::min(vertex_probe[tl.extremum], 0.3 * tl.line.length());
  }
  std::vector<HalfEdge> hedges(2 * good.size());
  for (size_t li = 0; li < good.size(); ++li) {
    const TracedLine& tl = good[li];
    HalfEdge fwd;
    fwd.line = static_cast<int>(li);
    fwd.forward = true;
    fwd.tail = tl.saddle;
    fwd.head = tl.extremum;
    fwd.angle = std::atan2(tl.initial_direction.y, tl.initial_direction.x);
    HalfEdge rev;
    rev.line = static_cast<int>(li);
    rev.forward = false;
    rev.tail = tl.extremum;
    rev.head = tl.saddle;
    Vec2 d = tl.line.end_direction(true, vertex_probe[tl.extremum]);
    rev.angle = std::atan2(d.y, d.x);
    hedges[2 * li] = fwd;
    hedges[2 * li + 1] = rev;
  }

  // Cyclic outgoing order at every vertex.
  std::vector<std::vector<int>> outgoing(crit.points.size());
  for (size_t h = 0; h < hedges.size(); ++h) outgoing[hedges[h].tail].push_back(static_cast<int>(h));
  for (auto& list : outgoing)
    std::sort(list.begin(), list.end(),
              [&](int a, int b) { return hedges[a].angle < hedges[b].angle; });

  // next(h): at head(h), the outgoing half-edge cyclically before twin(h).
  std::vector<int> next(hedges.size(), -1);
  for (size_t h = 0; h < hedges.size(); ++h) {
    int twin = static_cast<int>(h ^ 1);
    const auto& list = outgoing[hedges[h].head];
    auto it = std::find(list.begin(), list.end(), twin);
    if (it == list.end() || list.empty()) continue;
    size_t pos = static_cast<size_t>(it - list.begin());
    next[h] = list[(pos + list.size() - 1) % list.size()];
  }

  std::vector<char> visited(hedges.size(), 0);
  for (size_t h0 = 0; h0 < hedges.size(); ++h0) {
    if (visited[h0]) continue;
    std::vector<int> orbit;
    int h = static_cast<int>(h0);
    bool broken = false;
    for (int guard = 0; guard < 64; ++guard) {
      if (h < 0) {
        broken = true;
        break;
      }
      visited[h] = 1;
      orbit.push_back(h);
      h = next[h];
      if (h == static_cast<int>(h0)) break;
      if (guard == 63) broken = true;
    }
    if (broken || orbit.size() != 4) {
      ++census.excluded_count;
      ++census.excluded_orbits;
      continue;
    }

    NeumannDomain dom;
    bool valid = true;
    int n_saddle_corners = 0;
    for (int k = 0; k < 4; ++k) {
      const HalfEdge& he = hedges[orbit[k]];
      dom.corners[k] = he.tail;
      const auto& cp = crit.points[he.tail];
      if (cp.kind == morse::CriticalKind::saddle) {
        if (n_saddle_corners < 2) dom.saddle_indices[n_saddle_corners] = he.tail;
        ++n_saddle_corners;
      } else if (cp.kind == morse::CriticalKind::maximum) {
        if (dom.max_index >= 0) valid = false;
        dom.max_index = he.tail;
      } else {
        if (dom.min_index >= 0) valid = false;
        dom.min_index = he.tail;
      }
    }
    if (!valid || n_saddle_corners != 2 || dom.max_index < 0 || dom.min_index < 0) {
      ++census.excluded_count;
      ++census.excluded_orbits;
      continue;
    }

    // Lift the boundary into R^2: shift every oriented piece so the loop is
    // continuous, then verify closure.
    Vec2 cursor = crit.points[dom.corners[0]].position;
    for (int k = 0; k < 4; ++k) {
      const HalfEdge& he = hedges[orbit[k]];
      Polyline piece = good[he.line].line;
      if (!he.forward) std::reverse(piece.points.begin(), piece.points.end());
      Vec2 shift = cursor - piece.points.front();
      for (auto& p : piece.points) p += shift;
      cursor = piece.points.back();
      dom.boundary.push_back(std::move(piece));
    }
    if ((cursor - crit.points[dom.corners[0]].position).norm() > 1e-9) {
      ++census.excluded_count;
      ++census.excluded_closure;
      continue;
    }

    try {
      ClassifyResult cls = classify_domain(dom, field, crit, opts.angle_probe);
      dom.kind = cls.kind;
      dom.angle_at_max = cls.angle_at_max;
      dom.angle_at_min = cls.angle_at_min;
    } catch (const Error&) {
      ++census.excluded_count;
      ++census.excluded_ambiguous;
      continue;
    }
    Geometry g = domain_geometry(dom, census.lambda);
    dom.area = g.area;
    dom.perimeter = g.perimeter;
    dom.rho = g.rho;
    census.domains.push_back(std::move(dom));
  }
  return census;
}

void RhoStatistics::add(DomainKind kind, double rho) {
  const auto& c = special::constants();
  int klass = 1 + static_cast<int>(kind);
  for (int k : {0, klass}) {
    ++totals[k];
    if (rho > c.rho_ground) ++exceed_ground[k];
    if (rho > c.rho_excited) ++exceed_excited[k];
    int bin = static_cast<int>((rho - lo) / bin_width);
    if (bin >= 0 && bin < static_cast<int>(counts[k].size())) ++counts[k][bin];
  }
}

void RhoStatistics::add_census(const DomainCensus& census) {
  excluded += census.excluded_count;
  for (const auto& d : census.domains) add(d.kind, d.rho);
}

double RhoStatistics::fraction_exceeding_ground(int klass) const {
  return totals[klass] > 0 ? static_cast<double>(exceed_ground[klass]) / totals[klass] : 0.0;
}

double RhoStatistics::fraction_exceeding_excited(int klass) const {
  return totals[klass] > 0 ? static_cast<double>(exceed_excited[klass]) / totals[klass] : 0.0;
}

RhoStatistics rho_statistics(const std::vector<DomainCensus>& censuses, double bin_width,
                             double hi) {
  RhoStatistics stats;
  stats.bin_width = bin_width;
  stats.hi = hi;
  int bins = static_cast<int>(std::ceil(hi / bin_width));
  for (auto& c : stats.counts) c.assign(bins, 0);
  for (const auto& census : censuses) stats.add_census(census);
  return stats;
}

void export_census_csv(const DomainCensus& census, const std::string& path,
                       const std::string& metadata) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::io, "cannot open " + path);
  io::write_metadata_comments(out, metadata);
  out << "domain_id,kind,area,perimeter,rho\n";
  for (size_t i = 0; i < census.domains.size(); ++i) {
    const auto& d = census.domains[i];
    out << i << "," << kind_name(d.kind) << "," << io::fmt(d.area) << "," << io::fmt(d.perimeter)
        << "," << io::fmt(d.rho) << "\n";
  }
}

void export_histogram_csv(const RhoStatistics& stats, const std::string& path,
                          const std::string& metadata) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::io, "cannot open " + path);
  io::write_metadata_comments(out, metadata);
  out << "bin_left,bin_right,count,pdf\n";
  long total = stats.totals[0];
  for (size_t b = 0; b < stats.counts[0].size(); ++b) {
    double left = stats.lo + b * stats.bin_width;
    double right = left + stats.bin_width;
    long c = stats.counts[0][b];
    double pdf = total > 0 ? c / (total * stats.bin_width) : 0.0;
    out << io::fmt(left) << "," << io::fmt(right) << "," << c << "," << io::fmt(pdf) << "\n";
  }
}

void export_statistics_json(const RhoStatistics& stats, const std::string& path,
                            const std::string& config_json) {
  nlohmann::json j;
  j["config"] = nlohmann::json::parse(config_json.empty() ? "{}" : config_json);
  const auto& c = special::constants();
  j["bounds"] = {{"ground", c.rho_ground}, {"excited", c.rho_excited}};
  const char* names[4] = {"all", "lens", "wedge", "star"};
  for (int k = 0; k < 4; ++k) {
    nlohmann::json e;
    e["count"] = stats.totals[k];
    e["exceed_ground_fraction"] = stats.fraction_exceeding_ground(k);
    e["exceed_excited_fraction"] = stats.fraction_exceeding_excited(k);
    j["classes"][names[k]] = e;
  }
  j["excluded"] = stats.excluded;
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::io, "cannot open " + path);
  out << j.dump(2) << "\n";
}

}  // namespace neumann::tracer
