#include "neumann/spectral.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include <json.hpp>

#include "neumann/io.hpp"

namespace neumann::spectral {

namespace {

using SparseMat = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

// Smallest generalized eigenpair of A x = lambda M x (both SPD) by
// shift-inverted inverse iteration: a zero-shift phase for a first estimate,
// then one refactorization close to it for rapid polishing.
struct EigSolution {
  double lambda;
  Eigen::VectorXd x;
  double residual;
};

double rayleigh(const SparseMat& A, const SparseMat& M, const Eigen::VectorXd& x) {
  return x.dot(A * x) / x.dot(M * x);
}

double norm1(const SparseMat& A) {
  double best = 0.0;
  for (int k = 0; k < A.outerSize(); ++k) {
    double col = 0.0;
    for (SparseMat::InnerIterator it(A, k); it; ++it) col += std::abs(it.value());
    best = std::max(best, col);
  }
  return best;
}

// Normwise backward error of the eigenpair, long-double accumulated:
// ||A x - lambda M x|| / ((||A||_1 + |lambda| ||M||_1) ||x||). The raw
// operator residual is meaningless here: resolving the boundary cusp puts
// modes of size ~1/(gamma_floor dw)^2 in the pencil, and eps-level pollution
// of those dominates ||Ax - lambda M x|| no matter how converged x is.
double residual_long_double(const SparseMat& A, const SparseMat& M, const Eigen::VectorXd& x,
                            double lambda) {
  const int n = static_cast<int>(x.size());
  std::vector<long double> r(n, 0.0L);
  for (int k = 0; k < A.outerSize(); ++k)
    for (SparseMat::InnerIterator it(A, k); it; ++it)
      r[it.row()] += static_cast<long double>(it.value()) * x[it.col()];
  for (int k = 0; k < M.outerSize(); ++k)
    for (SparseMat::InnerIterator it(M, k); it; ++it)
      r[it.row()] -= static_cast<long double>(lambda) * it.value() * x[it.col()];
  long double rr = 0.0L, xx = 0.0L;
  for (int i = 0; i < n; ++i) {
    rr += r[i] * r[i];
    xx += static_cast<long double>(x[i]) * x[i];
  }
  double scale = norm1(A) + std::abs(lambda) * norm1(M);
  return static_cast<double>(std::sqrt(rr / xx)) / scale;
}

EigSolution smallest_eigenpair(const SparseMat& A_in, const SparseMat& M_in) {
  const int n = static_cast<int>(A_in.rows());
  if (n == 0) throw Error(ErrorCode::solver_failure, "empty system");

  // Equilibrate with D = diag(M)^{-1/2}: near a degenerating boundary the
  // raw pencil spans ~10 orders of magnitude and direct solves lose the
  // eigenvector there. The congruence keeps the eigenvalues intact.
  Eigen::VectorXd d(n);
  for (int i = 0; i < n; ++i) {
    double mii = M_in.coeff(i, i);
    if (!(mii > 0)) throw Error(ErrorCode::solver_failure, "singular mass diagonal");
    d[i] = 1.0 / std::sqrt(mii);
  }
  SparseMat A = d.asDiagonal() * A_in * d.asDiagonal();
  SparseMat M = d.asDiagonal() * M_in * d.asDiagonal();

  Eigen::SimplicialLDLT<SparseMat> solver;
  solver.compute(A);
  if (solver.info() != Eigen::Success)
    throw Error(ErrorCode::solver_failure, "factorization failed at zero shift");

  Eigen::VectorXd x = Eigen::VectorXd::Constant(n, 1.0);
  for (int i = 0; i < n; i += 7) x[i] += 0.5;  // break accidental orthogonality
  x /= std::sqrt(x.dot(M * x));

  double lambda = rayleigh(A, M, x);
  for (int it = 0; it < 400; ++it) {
    Eigen::VectorXd y = solver.solve(M * x);
    y /= std::sqrt(y.dot(M * y));
    double next = rayleigh(A, M, y);
    x = y;
    if (std::abs(next - lambda) < 1e-10 * std::abs(next)) {
      lambda = next;
      break;
    }
    lambda = next;
  }

  // Polish with shifts tightening toward the estimate until the residual is
  // at rounding level; a fixed distant shift converges too slowly when the
  // next eigenvalue sits nearby.
  const double ctrl_scale = norm1(A) + std::abs(lambda) * norm1(M);
  auto residual_of = [&](const Eigen::VectorXd& v, double lam) {
    Eigen::VectorXd r = A * v - lam * (M * v);
    return std::sqrt(r.squaredNorm() / v.squaredNorm()) / ctrl_scale;
  };
  double offset = 5e-3;
  for (int phase = 0; phase < 5; ++phase) {
    double shift = lambda * (1.0 - offset);
    SparseMat shifted = A - shift * M;
    solver.compute(shifted);
    if (solver.info() != Eigen::Success) {
      offset *= 2.0;
      continue;
    }
    for (int it = 0; it < 50; ++it) {
      Eigen::VectorXd y = solver.solve(M * x);
      double norm = std::sqrt(y.dot(M * y));
      if (!(norm > 0) || !std::isfinite(norm))
        throw Error(ErrorCode::solver_failure, "inverse iteration stagnated");
      y /= norm;
      double next = rayleigh(A, M, y);
      bool stalled = std::abs(next - lambda) < 1e-15 * std::abs(next);
      x = y;
      lambda = next;
      if (stalled) break;
    }
    if (residual_of(x, lambda) < 1e-11) break;
    offset *= 0.02;  // move the shift much closer and refactor
  }

  EigSolution sol;
  sol.lambda = lambda;
  if (x.sum() < 0) x = -x;  // fix the sign convention: ground state positive
  sol.residual = residual_long_double(A, M, x, lambda);
  // map back from the equilibrated basis
  sol.x = d.asDiagonal() * x;
  return sol;
}

// Bilinear-element discretization of the quadratic form of -Laplace on the
// strip {0<u<L, 0<x2<profile(u)} mapped to the rectangle (u, w=x2/profile).
// The form has coefficient matrix K = [[g, -w g'], [-w g', (w^2 g'^2 + 1)/g]]
// with g = profile(u); Neumann walls are natural, the Dirichlet side's nodes
// are eliminated.
struct Assembled {
  SparseMat A;
  SparseMat M;
  std::vector<int> node_of_unknown;  // free node ids
  std::vector<int> unknown_of_node;  // -1 for Dirichlet nodes
  int nodes_u, nodes_w;
};

Assembled assemble_profile(const ProfileProblem& prob, int nu, int nw) {
  const double du = prob.u_len / nu;
  const double dw = 1.0 / nw;
  const int nodes_u = nu + 1;
  const int nodes_w = nw + 1;
  const int n_nodes = nodes_u * nodes_w;
  auto node = [&](int i, int j) { return i * nodes_w + j; };

  Assembled out;
  out.nodes_u = nodes_u;
  out.nodes_w = nodes_w;
  out.unknown_of_node.assign(n_nodes, -1);
  for (int i = 0; i < nodes_u; ++i) {
    for (int j = 0; j < nodes_w; ++j) {
      bool dirichlet = (prob.side == DirichletSide::v) ? (i == 0) : (j == 0);
      if (!dirichlet) {
        out.unknown_of_node[node(i, j)] = static_cast<int>(out.node_of_unknown.size());
        out.node_of_unknown.push_back(node(i, j));
      }
    }
  }
  const int n_free = static_cast<int>(out.node_of_unknown.size());

  std::vector<Triplet> ta, tm;
  ta.reserve(static_cast<size_t>(nu) * nw * 16);
  tm.reserve(static_cast<size_t>(nu) * nw * 16);

  const double gp = 1.0 / std::sqrt(3.0);
  const double gauss[2] = {-gp, gp};

  for (int i = 0; i < nu; ++i) {
    for (int j = 0; j < nw; ++j) {
      int nd[4] = {node(i, j), node(i + 1, j), node(i, j + 1), node(i + 1, j + 1)};
      double Ke[4][4] = {};
      double Me[4][4] = {};
      for (double xi : gauss) {
        for (double eta : gauss) {
          double u = (i + 0.5 * (1 + xi)) * du;
          double w = (j + 0.5 * (1 + eta)) * dw;
          double g = prob.profile(u);
          double dg = prob.dprofile(u);
          double K11 = g;
          double K12 = -w * dg;
          double K22 = (w * w * dg * dg + 1.0) / g;
          // shape funcs on [-1,1]^2, local order (i,j),(i+1,j),(i,j+1),(i+1,j+1)
          double N[4] = {0.25 * (1 - xi) * (1 - eta), 0.25 * (1 + xi) * (1 - eta),
                         0.25 * (1 - xi) * (1 + eta), 0.25 * (1 + xi) * (1 + eta)};
          double dNdu[4] = {-0.25 * (1 - eta) * 2 / du, 0.25 * (1 - eta) * 2 / du,
                            -0.25 * (1 + eta) * 2 / du, 0.25 * (1 + eta) * 2 / du};
          double dNdw[4] = {-0.25 * (1 - xi) * 2 / dw, -0.25 * (1 + xi) * 2 / dw,
                            0.25 * (1 - xi) * 2 / dw, 0.25 * (1 + xi) * 2 / dw};
          double jac = 0.25 * du * dw;  // gauss weight 1 each
          for (int a = 0; a < 4; ++a) {
            for (int b = 0; b < 4; ++b) {
              Ke[a][b] += jac * (K11 * dNdu[a] * dNdu[b] + K12 * (dNdu[a] * dNdw[b] + dNdw[a] * dNdu[b]) +
                                 K22 * dNdw[a] * dNdw[b]);
              Me[a][b] += jac * g * N[a] * N[b];
            }
          }
        }
      }
      for (int a = 0; a < 4; ++a) {
        int ia = out.unknown_of_node[nd[a]];
        if (ia < 0) continue;
        for (int b = 0; b < 4; ++b) {
          int ib = out.unknown_of_node[nd[b]];
          if (ib < 0) continue;
          ta.emplace_back(ia, ib, Ke[a][b]);
          tm.emplace_back(ia, ib, Me[a][b]);
        }
      }
    }
  }
  out.A.resize(n_free, n_free);
  out.M.resize(n_free, n_free);
  out.A.setFromTriplets(ta.begin(), ta.end());
  out.M.setFromTriplets(tm.begin(), tm.end());
  return out;
}

}  // namespace

const char* side_name(DirichletSide side) { return side == DirichletSide::v ? "v" : "h"; }

double single_sign_ratio(const std::vector<double>& values) {
  double pos = 0.0, neg = 0.0;
  for (double v : values) {
    pos = std::max(pos, v);
    neg = std::max(neg, -v);
  }
  double hi = std::max(pos, neg);
  double lo = std::min(pos, neg);
  if (lo == 0.0) return std::numeric_limits<double>::infinity();
  return hi / lo;
}

EigenResult solve_profile_level(const ProfileProblem& prob, int nu, int nw) {
  Assembled sys = assemble_profile(prob, nu, nw);
  EigSolution sol = smallest_eigenpair(sys.A, sys.M);
  EigenResult res;
  res.eigenvalue = sol.lambda;
  res.extrapolated = sol.lambda;
  res.residual = sol.residual;
  res.n_cells = nu * nw;
  res.nu = nu;
  res.nw = nw;
  res.u_max = prob.u_len;
  res.eigenvector.assign(static_cast<size_t>(sys.nodes_u) * sys.nodes_w, 0.0);
  for (size_t k = 0; k < sys.node_of_unknown.size(); ++k)
    res.eigenvector[sys.node_of_unknown[k]] = sol.x[static_cast<int>(k)];
  return res;
}

namespace {

// Truncation point of the cusp: gamma(u_max) = floor, found by bisection.
double truncation_point(const stardomain::StarParams& p, double floor_value) {
  double lo = 0.0, hi = p.a * (1.0 - 1e-9);
  if (stardomain::gamma_boundary(p, hi) >= floor_value) return hi;
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    if (stardomain::gamma_boundary(p, mid) > floor_value) lo = mid;
    else hi = mid;
  }
  return lo;
}

void choose_grid(double u_len, double height, int n_cells, int& nu, int& nw) {
  double ratio = std::max(1.0, u_len / (2.0 * height));
  nw = std::max(12, static_cast<int>(std::lround(std::sqrt(n_cells / ratio))));
  nu = std::max(12, static_cast<int>(std::lround(static_cast<double>(n_cells) / nw)));
  if (nu % 2) ++nu;
  if (nw % 2) ++nw;
}

}  // namespace

EigenResult solve_quarter(const stardomain::StarParams& p, DirichletSide side,
                          const QuarterOptions& opts) {
  double floor_value = opts.gamma_floor_rel * p.b;
  ProfileProblem prob;
  prob.profile = [p](double u) { return stardomain::gamma_boundary(p, u); };
  prob.dprofile = [p](double u) { return stardomain::gamma_derivative(p, u); };
  prob.u_len = truncation_point(p, floor_value);
  prob.side = side;

  int nu = 0, nw = 0;
  choose_grid(prob.u_len, p.b, opts.n_cells, nu, nw);

  EigenResult coarse = solve_profile_level(prob, nu / 2, nw / 2);
  EigenResult fine = solve_profile_level(prob, nu, nw);
  fine.extrapolated = fine.eigenvalue + (fine.eigenvalue - coarse.eigenvalue) / 3.0;
  return fine;
}

GapResult ground_state_gap(const stardomain::StarParams& p, int n_cells) {
  QuarterOptions opts;
  opts.n_cells = n_cells;
  GapResult gap;
  gap.v_result = solve_quarter(p, DirichletSide::v, opts);
  gap.h_result = solve_quarter(p, DirichletSide::h, opts);
  gap.lambda_v = gap.v_result.extrapolated;
  gap.lambda_h = gap.h_result.extrapolated;
  gap.gap = gap.lambda_h - gap.lambda_v;
  gap.error_estimate = (std::abs(gap.v_result.extrapolated - gap.v_result.eigenvalue) +
                        std::abs(gap.h_result.extrapolated - gap.h_result.eigenvalue));
  return gap;
}

namespace {

// Cell-centered polar finite volumes on the sector; Dirichlet rim via a
// zero-value face, Neumann straight sides via mirrored ghosts.
double solve_sector_level(double alpha, double radius, int nr, int nphi, double* residual_out) {
  const double dr = radius / nr;
  const double dphi = alpha / nphi;
  const int n = nr * nphi;
  auto idx = [&](int i, int j) { return i * nphi + j; };

  std::vector<Triplet> ta, tm;
  for (int i = 0; i < nr; ++i) {
    double r = (i + 0.5) * dr;
    double r_in = i * dr;
    double r_out = (i + 1) * dr;
    for (int j = 0; j < nphi; ++j) {
      double diag = 0.0;
      // radial fluxes
      if (i > 0) {
        double c = r_in * dphi / dr;
        diag += c;
        ta.emplace_back(idx(i, j), idx(i - 1, j), -c);
      }
      if (i < nr - 1) {
        double c = r_out * dphi / dr;
        diag += c;
        ta.emplace_back(idx(i, j), idx(i + 1, j), -c);
      } else {
        diag += 2.0 * r_out * dphi / dr;  // value 0 at the rim face
      }
      // angular fluxes; mirrored ghosts at j edges drop the flux entirely
      double cphi = dr / (r * dphi);
      if (j > 0) {
        diag += cphi;
        ta.emplace_back(idx(i, j), idx(i, j - 1), -cphi);
      }
      if (j < nphi - 1) {
        diag += cphi;
        ta.emplace_back(idx(i, j), idx(i, j + 1), -cphi);
      }
      ta.emplace_back(idx(i, j), idx(i, j), diag);
      tm.emplace_back(idx(i, j), idx(i, j), r * dr * dphi);
    }
  }
  SparseMat A(n, n), M(n, n);
  A.setFromTriplets(ta.begin(), ta.end());
  M.setFromTriplets(tm.begin(), tm.end());
  EigSolution sol = smallest_eigenpair(A, M);
  if (residual_out) *residual_out = sol.residual;
  return sol.lambda;
}

}  // namespace

EigenResult solve_sector(double alpha, double radius, int n_cells) {
  if (!(alpha > 0) || alpha > 2 * M_PI || !(radius > 0))
    throw Error(ErrorCode::invalid_argument, "invalid sector parameters");
  int nr = std::max(8, static_cast<int>(std::lround(std::sqrt(n_cells * 2.0))));
  int nphi = std::max(8, static_cast<int>(std::lround(static_cast<double>(n_cells) / nr)));
  if (nr % 2) ++nr;
  if (nphi % 2) ++nphi;
  double res_fine = 0.0;
  double coarse = solve_sector_level(alpha, radius, nr / 2, nphi / 2, nullptr);
  double fine = solve_sector_level(alpha, radius, nr, nphi, &res_fine);
  EigenResult out;
  out.eigenvalue = fine;
  out.extrapolated = fine + (fine - coarse) / 3.0;
  out.residual = res_fine;
  out.n_cells = nr * nphi;
  out.nu = nr;
  out.nw = nphi;
  out.u_max = radius;
  return out;
}

UnfoldedState unfold(const EigenResult& quarter, DirichletSide side) {
  const int nu = quarter.nu, nw = quarter.nw;
  UnfoldedState full;
  full.nu = nu;
  full.nw = nw;
  full.u_max = quarter.u_max;
  const int NU = 2 * nu + 1, NW = 2 * nw + 1;
  full.values.assign(static_cast<size_t>(NU) * NW, 0.0);
  auto q = [&](int i, int j) { return quarter.eigenvector[static_cast<size_t>(i) * (nw + 1) + j]; };
  for (int I = -nu; I <= nu; ++I) {
    for (int J = -nw; J <= nw; ++J) {
      int i = std::abs(I), j = std::abs(J);
      double sign = 1.0;
      if (side == DirichletSide::v && I < 0) sign = -1.0;
      if (side == DirichletSide::h && J < 0) sign = -1.0;
      full.values[static_cast<size_t>(I + nu) * NW + (J + nw)] = sign * q(i, j);
    }
  }
  return full;
}

ShapeClass classify_shape(const UnfoldedState& state, double zero_tol_rel) {
  const int NU = 2 * state.nu + 1, NW = 2 * state.nw + 1;
  auto at = [&](int I, int J) { return state.values[static_cast<size_t>(I) * NW + J]; };
  double peak = 0.0;
  for (double v : state.values) peak = std::max(peak, std::abs(v));
  if (peak == 0.0) throw Error(ErrorCode::unclassifiable_shape, "zero state");
  double tol = zero_tol_rel * peak;

  auto sgn = [&](double v) { return v > tol ? 1 : (v < -tol ? -1 : 0); };

  // Shape III: sign determined by the sign of (I - nu), nodal line = v.
  bool is_v = true, is_h = true;
  int ref_v = 0, ref_h = 0;
  for (int I = 0; I < NU && (is_v || is_h); ++I) {
    for (int J = 0; J < NW; ++J) {
      int s = sgn(at(I, J));
      if (s == 0) continue;
      int su = I - state.nu;  // position relative to v
      int sv = J - state.nw;  // position relative to h
      if (su != 0) {
        int expect = su > 0 ? s : -s;
        if (ref_v == 0) ref_v = expect;
        else if (expect != ref_v) is_v = false;
      } else if (s != 0) {
        is_v = false;  // nonzero on the claimed nodal line
      }
      if (sv != 0) {
        int expect = sv > 0 ? s : -s;
        if (ref_h == 0) ref_h = expect;
        else if (expect != ref_h) is_h = false;
      } else if (s != 0) {
        is_h = false;
      }
    }
  }
  if (is_v && !is_h) return ShapeClass::III;
  if (is_h && !is_v) return ShapeClass::II;
  if (is_v && is_h) throw Error(ErrorCode::unclassifiable_shape, "degenerate nodal pattern");

  // Shape I: one sign on the whole boundary ring, the other confined inside.
  int ring_sign = 0;
  bool ring_ok = true;
  for (int I = 0; I < NU; ++I) {
    for (int J : {0, NW - 1}) {
      int s = sgn(at(I, J));
      if (s == 0) continue;
      if (ring_sign == 0) ring_sign = s;
      else if (s != ring_sign) ring_ok = false;
    }
  }
  for (int J = 0; J < NW; ++J) {
    for (int I : {0, NU - 1}) {
      int s = sgn(at(I, J));
      if (s == 0) continue;
      if (ring_sign == 0) ring_sign = s;
      else if (s != ring_sign) ring_ok = false;
    }
  }
  bool has_opposite = false;
  for (double v : state.values)
    if (sgn(v) == -ring_sign && ring_sign != 0) has_opposite = true;
  if (ring_ok && ring_sign != 0 && has_opposite) return ShapeClass::I;
  throw Error(ErrorCode::unclassifiable_shape, "nodal set matches none of shapes I-III");
}

const char* shape_name(ShapeClass shape) {
  switch (shape) {
    case ShapeClass::I: return "I";
    case ShapeClass::II: return "II";
    case ShapeClass::III: return "III";
  }
  return "?";
}

MaskResult dirichlet_ground_state(const std::vector<uint8_t>& mask, int nx, int ny, double h) {
  if (static_cast<int>(mask.size()) != nx * ny)
    throw Error(ErrorCode::invalid_argument, "mask size mismatch");
  std::vector<int> unknown(mask.size(), -1);
  std::vector<int> nodes;
  for (size_t k = 0; k < mask.size(); ++k) {
    if (mask[k]) {
      unknown[k] = static_cast<int>(nodes.size());
      nodes.push_back(static_cast<int>(k));
    }
  }
  const int n = static_cast<int>(nodes.size());
  if (n == 0) throw Error(ErrorCode::invalid_argument, "empty mask");
  auto idx = [&](int i, int j) -> int {
    if (i < 0 || i >= nx || j < 0 || j >= ny) return -1;
    return unknown[static_cast<size_t>(i) * ny + j];
  };
  std::vector<Triplet> ta, tm;
  const double c = 1.0 / (h * h);
  for (int k = 0; k < n; ++k) {
    int node = nodes[k];
    int i = node / ny, j = node % ny;
    ta.emplace_back(k, k, 4.0 * c);
    for (auto [di, dj] : {std::pair{1, 0}, {-1, 0}, {0, 1}, {0, -1}}) {
      int nb = idx(i + di, j + dj);
      if (nb >= 0) ta.emplace_back(k, nb, -c);
    }
    tm.emplace_back(k, k, 1.0);
  }
  SparseMat A(n, n), M(n, n);
  A.setFromTriplets(ta.begin(), ta.end());
  M.setFromTriplets(tm.begin(), tm.end());
  EigSolution sol = smallest_eigenpair(A, M);
  MaskResult out;
  out.eigenvalue = sol.lambda;
  out.residual = sol.residual;
  out.unknowns = n;
  return out;
}

void export_result_json(const stardomain::StarParams& p, DirichletSide side,
                        const EigenResult& result, const std::string& path,
                        const std::string& config_json) {
  nlohmann::json j;
  j["config"] = nlohmann::json::parse(config_json.empty() ? "{}" : config_json);
  j["a"] = p.a;
  j["b"] = p.b;
  j["side"] = side_name(side);
  j["n_cells"] = result.n_cells;
  j["lambda"] = result.eigenvalue;
  j["extrapolated"] = result.extrapolated;
  j["residual"] = result.residual;
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::io, "cannot open " + path);
  out << j.dump(2) << "\n";
}

}  // namespace neumann::spectral
