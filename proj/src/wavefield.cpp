#include "neumann/wavefield.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "neumann/io.hpp"

namespace neumann::wavefield {

std::vector<LatticeMode> enumerate_lattice(int energy) {
  if (energy < 1) throw Error(ErrorCode::invalid_argument, "energy must be >= 1");
  std::vector<LatticeMode> modes;
  int r = static_cast<int>(std::floor(std::sqrt(static_cast<double>(energy)))) + 1;
  for (int n1 = -r; n1 <= r; ++n1) {
    long long rest = static_cast<long long>(energy) - static_cast<long long>(n1) * n1;
    if (rest < 0) continue;
    int n2 = static_cast<int>(std::llround(std::sqrt(static_cast<double>(rest))));
    if (static_cast<long long>(n2) * n2 != rest) continue;
    if (n2 == 0) {
      modes.push_back({n1, 0});
    } else {
      modes.push_back({n1, -n2});
      modes.push_back({n1, n2});
    }
  }
  std::sort(modes.begin(), modes.end());
  return modes;
}

int antipodal_class_count(const std::vector<LatticeMode>& modes) {
  return static_cast<int>(modes.size() / 2);
}

void WaveSpec::validate() const {
  if (modes.empty()) throw Error(ErrorCode::invalid_argument, "wave spec has no modes");
  if (modes.size() != coefficients.size())
    throw Error(ErrorCode::invalid_argument, "one coefficient per mode required");
  for (const auto& m : modes) {
    if (m.n1 * m.n1 + m.n2 * m.n2 != energy)
      throw Error(ErrorCode::invalid_argument, "mode violates the energy constraint");
  }
}

WaveSpec random_wave_spec(int energy, uint64_t seed) {
  WaveSpec spec;
  spec.energy = energy;
  spec.seed = seed;
  spec.modes = enumerate_lattice(energy);
  if (spec.modes.empty())
    throw Error(ErrorCode::invalid_argument, "energy is not a sum of two squares");
  SplitMix64 rng(seed);
  spec.coefficients.reserve(spec.modes.size());
  for (size_t i = 0; i < spec.modes.size(); ++i) spec.coefficients.push_back(rng.gaussian());
  spec.theta = 2.0 * M_PI * rng.uniform();
  if (spec.theta >= 2.0 * M_PI) spec.theta = 0.0;
  return spec;
}

namespace {

int max_mode_index(const std::vector<ScalarField::Term>& terms) {
  int m = 0;
  for (const auto& t : terms) m = std::max({m, std::abs(t.n1), std::abs(t.n2)});
  return m;
}

}  // namespace

ScalarField::ScalarField(std::vector<Term> terms, double lambda, int energy, int resolution,
                         uint64_t seed)
    : terms_(std::move(terms)), lambda_(lambda), energy_(energy), resolution_(resolution),
      seed_(seed) {
  if (resolution_ < 8 || resolution_ < 8 * max_mode_index(terms_))
    throw Error(ErrorCode::invalid_argument,
                "resolution too small to resolve the highest mode (need N >= 8*max|n_i|)");
  // Sample the grid through per-term tables: the phase argument at (i/N, j/N)
  // only depends on (n1*i + n2*j) mod N.
  const int n = resolution_;
  values_.assign(static_cast<size_t>(n) * n, 0.0);
  std::vector<double> table(n);
  for (const auto& t : terms_) {
    for (int k = 0; k < n; ++k)
      table[k] = t.amplitude * std::sin(2.0 * M_PI * k / n + t.phase);
    long long a = ((t.n1 % n) + n) % n;
    long long b = ((t.n2 % n) + n) % n;
    for (int i = 0; i < n; ++i) {
      long long base = (a * i) % n;
      double* row = values_.data() + static_cast<size_t>(i) * n;
      long long k = base;
      for (int j = 0; j < n; ++j) {
        row[j] += table[k];
        k += b;
        if (k >= n) k -= n;
      }
    }
  }
}

double ScalarField::value(double x1, double x2) const {
  double v = 0.0;
  for (const auto& t : terms_)
    v += t.amplitude * std::sin(2.0 * M_PI * (t.n1 * x1 + t.n2 * x2) + t.phase);
  return v;
}

Vec2 ScalarField::gradient(double x1, double x2) const {
  Vec2 g;
  for (const auto& t : terms_) {
    double c = t.amplitude * 2.0 * M_PI * std::cos(2.0 * M_PI * (t.n1 * x1 + t.n2 * x2) + t.phase);
    g.x += t.n1 * c;
    g.y += t.n2 * c;
  }
  return g;
}

Sym2 ScalarField::hessian(double x1, double x2) const {
  Sym2 h;
  for (const auto& t : terms_) {
    double s =
        -t.amplitude * 4.0 * M_PI * M_PI * std::sin(2.0 * M_PI * (t.n1 * x1 + t.n2 * x2) + t.phase);
    h.xx += t.n1 * t.n1 * s;
    h.xy += t.n1 * t.n2 * s;
    h.yy += t.n2 * t.n2 * s;
  }
  return h;
}

FieldJet ScalarField::jet(double x1, double x2) const {
  FieldJet j;
  for (const auto& t : terms_) {
    double arg = 2.0 * M_PI * (t.n1 * x1 + t.n2 * x2) + t.phase;
    double s = std::sin(arg);
    double c = std::cos(arg);
    j.value += t.amplitude * s;
    double gc = t.amplitude * 2.0 * M_PI * c;
    j.gradient.x += t.n1 * gc;
    j.gradient.y += t.n2 * gc;
    double hs = -t.amplitude * 4.0 * M_PI * M_PI * s;
    j.hessian.xx += t.n1 * t.n1 * hs;
    j.hessian.xy += t.n1 * t.n2 * hs;
    j.hessian.yy += t.n2 * t.n2 * hs;
  }
  return j;
}

void ScalarField::gradient_grid(int n, std::vector<double>& g1, std::vector<double>& g2) const {
  g1.assign(static_cast<size_t>(n) * n, 0.0);
  g2.assign(static_cast<size_t>(n) * n, 0.0);
  std::vector<double> table(n);
  for (const auto& t : terms_) {
    for (int k = 0; k < n; ++k)
      table[k] = t.amplitude * 2.0 * M_PI * std::cos(2.0 * M_PI * k / n + t.phase);
    long long a = ((t.n1 % n) + n) % n;
    long long b = ((t.n2 % n) + n) % n;
    for (int i = 0; i < n; ++i) {
      long long k = (a * i) % n;
      double* r1 = g1.data() + static_cast<size_t>(i) * n;
      double* r2 = g2.data() + static_cast<size_t>(i) * n;
      for (int j = 0; j < n; ++j) {
        r1[j] += t.n1 * table[k];
        r2[j] += t.n2 * table[k];
        k += b;
        if (k >= n) k -= n;
      }
    }
  }
}

ScalarField sample_random_wave(const WaveSpec& spec, int resolution) {
  spec.validate();
  std::vector<ScalarField::Term> terms;
  terms.reserve(spec.modes.size());
  for (size_t i = 0; i < spec.modes.size(); ++i)
    terms.push_back({spec.coefficients[i], spec.modes[i].n1, spec.modes[i].n2, spec.theta});
  double lambda = 4.0 * M_PI * M_PI * spec.energy;
  return ScalarField(std::move(terms), lambda, spec.energy, resolution, spec.seed);
}

ScalarField sample_separable(int n1, int n2, int resolution) {
  if (n1 < 1 || n2 < 1) throw Error(ErrorCode::invalid_argument, "separable indices must be >= 1");
  // 2 cos(a)cos(b) = cos(a+b) + cos(a-b) = sin(a+b + pi/2) + sin(a-b + pi/2)
  std::vector<ScalarField::Term> terms = {
      {1.0, n1, n2, 0.5 * M_PI},
      {1.0, n1, -n2, 0.5 * M_PI},
  };
  int energy = n1 * n1 + n2 * n2;
  double lambda = 4.0 * M_PI * M_PI * energy;
  return ScalarField(std::move(terms), lambda, energy, resolution, 0);
}

void dump_field_csv(const ScalarField& field, const std::string& path,
                    const std::string& metadata) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::io, "cannot open " + path);
  io::write_metadata_comments(out, metadata);
  out << field.resolution() << "," << io::fmt(field.lambda()) << "," << field.seed() << "\n";
  const int n = field.resolution();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      out << i << "," << j << "," << io::fmt(field.at(i, j)) << "\n";
  if (!out) throw Error(ErrorCode::io, "write failed for " + path);
}

FieldDump load_field_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io, "cannot open " + path);
  std::string line;
  FieldDump dump;
  bool have_header = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    if (!have_header) {
      char c1, c2;
      ss >> dump.resolution >> c1 >> dump.lambda >> c2 >> dump.seed;
      if (!ss || c1 != ',' || c2 != ',' || dump.resolution < 1)
        throw Error(ErrorCode::io, "malformed field header in " + path);
      dump.values.assign(static_cast<size_t>(dump.resolution) * dump.resolution, 0.0);
      have_header = true;
      continue;
    }
    int i, j;
    double v;
    char c1, c2;
    ss >> i >> c1 >> j >> c2 >> v;
    if (!ss || c1 != ',' || c2 != ',') throw Error(ErrorCode::io, "malformed field row in " + path);
    if (i < 0 || i >= dump.resolution || j < 0 || j >= dump.resolution)
      throw Error(ErrorCode::io, "field row out of range in " + path);
    dump.values[static_cast<size_t>(i) * dump.resolution + j] = v;
  }
  if (!have_header) throw Error(ErrorCode::io, "missing field header in " + path);
  return dump;
}

}  // namespace neumann::wavefield
