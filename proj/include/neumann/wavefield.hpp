#ifndef NEUMANN_WAVEFIELD_HPP
#define NEUMANN_WAVEFIELD_HPP

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "neumann/common.hpp"

namespace neumann::wavefield {

struct LatticeMode {
  int n1 = 0;
  int n2 = 0;

  bool operator==(const LatticeMode&) const = default;
  auto operator<=>(const LatticeMode&) const = default;
};

// All integer solutions of n1^2 + n2^2 = energy, lexicographically sorted.
// Empty when the energy is not a sum of two squares.
std::vector<LatticeMode> enumerate_lattice(int energy);

// Lattice points come in antipodal pairs {n, -n}; this is the pair count,
// the degeneracy convention used when labelling ensembles by their energy.
int antipodal_class_count(const std::vector<LatticeMode>& modes);

struct WaveSpec {
  int energy = 0;
  std::vector<LatticeMode> modes;
  std::vector<double> coefficients;  // one Gaussian amplitude per mode
  double theta = 0.0;                // global phase in [0, 2*pi)
  uint64_t seed = 0;

  void validate() const;
};

// Draws iid standard-normal coefficients and a uniform phase from the seed
// (SplitMix64 + Box-Muller), so equal seeds give bit-identical specs.
WaveSpec random_wave_spec(int energy, uint64_t seed);

struct FieldJet {
  double value = 0.0;
  Vec2 gradient;
  Sym2 hessian;
};

// An eigenfunction of the torus Laplacian, held in closed form as a sum of
// plane-wave terms amp*sin(2*pi*(n1*x1+n2*x2) + phase), plus an N x N sample
// grid at (i/N, j/N). Immutable; evaluation is safe from any thread.
class ScalarField {
 public:
  struct Term {
    double amplitude;
    int n1;
    int n2;
    double phase;
  };

  ScalarField(std::vector<Term> terms, double lambda, int energy, int resolution, uint64_t seed);

  double lambda() const { return lambda_; }
  int energy() const { return energy_; }
  int resolution() const { return resolution_; }
  uint64_t seed() const { return seed_; }
  const std::vector<Term>& terms() const { return terms_; }

  double value(double x1, double x2) const;
  Vec2 gradient(double x1, double x2) const;
  Sym2 hessian(double x1, double x2) const;
  FieldJet jet(double x1, double x2) const;

  // Row-major samples, values()[i*N + j] = psi(i/N, j/N).
  const std::vector<double>& values() const { return values_; }
  double at(int i, int j) const { return values_[static_cast<size_t>(i) * resolution_ + j]; }

  // Exact gradient on an n x n grid via per-term lookup tables (the grid
  // argument reduces mod n, so only n distinct samples per term exist).
  void gradient_grid(int n, std::vector<double>& g1, std::vector<double>& g2) const;

 private:
  std::vector<Term> terms_;
  double lambda_;
  int energy_;
  int resolution_;
  uint64_t seed_;
  std::vector<double> values_;
};

ScalarField sample_random_wave(const WaveSpec& spec, int resolution);

// The separable eigenfunction 2*cos(2*pi*n1*x1)*cos(2*pi*n2*x2).
ScalarField sample_separable(int n1, int n2, int resolution);

struct FieldDump {
  int resolution = 0;
  double lambda = 0.0;
  uint64_t seed = 0;
  std::vector<double> values;
};

// First data line is `N,lambda,seed`, then N^2 rows `i,j,value`, every float
// printed with 17 significant digits. `metadata` lines are emitted as leading
// `#` comments.
void dump_field_csv(const ScalarField& field, const std::string& path,
                    const std::string& metadata = "");
FieldDump load_field_csv(const std::string& path);

}  // namespace neumann::wavefield

#endif
