#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "specemd/graph.hpp"
#include "specemd/matrix.hpp"
#include "specemd/parallel.hpp"

namespace specemd {

struct JacobiOptions {
  /// Stop once the off-diagonal Frobenius norm drops below tolerance * ||m||_F.
  double tolerance = 1e-12;
  int max_sweeps = 100;
};

struct EigenDecomposition {
  std::vector<double> values;  // ascending
  Matrix vectors;              // column k pairs with values[k]; empty if not requested
  int sweeps = 0;
};

/// Cyclic Jacobi eigensolver for symmetric matrices.
///
/// Throws InvalidArgument if m is not symmetric within 1e-10 relative to its
/// Frobenius norm, ConvergenceError if max_sweeps is exhausted.
EigenDecomposition jacobi_eigen(const Matrix& m, bool want_vectors,
                                const JacobiOptions& options = {});

/// Eigenvalues only, ascending.
std::vector<double> eigenvalues_symmetric(const Matrix& m);

/// Ascending normalized-Laplacian eigenvalues, each in [0, 2].
class Spectrum {
 public:
  Spectrum() = default;

  /// Validates raw eigenvalues of a normalized Laplacian: values within
  /// kTolerance outside [0, 2] are clamped, larger excursions throw
  /// ConvergenceError, as does a missing zero eigenvalue.
  static Spectrum from_eigenvalues(std::vector<double> values);

  std::span<const double> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t k) const noexcept { return values_[k]; }

  /// Eigenvalues within kTolerance of 0.
  std::size_t zero_multiplicity() const;

  bool operator==(const Spectrum&) const = default;

  static constexpr double kTolerance = 1e-9;

 private:
  std::vector<double> values_;
};

Spectrum spectrum_of(const ConnectivityGraph& g);

/// Spectra of a batch of graphs, one decomposition per OpenMP work item.
std::vector<Spectrum> spectra_of(std::span<const ConnectivityGraph> graphs,
                                 Execution exec = {});

struct DensityCurve {
  std::vector<double> grid;
  std::vector<double> density;
};

/// Bandwidth used for the published spectral density plots.
inline constexpr double kDefaultDensitySigma = 0.02;

/// lo, lo + step, ... up to and including hi (within half a step).
std::vector<double> uniform_grid(double lo, double hi, double step);

/// [-0.1, 2.1] in steps of 0.002.
std::vector<double> default_density_grid();

/// f(x) = Σ_j exp(-(x - s_j)^2 / (2σ^2)) / sqrt(2πσ^2) at every grid point.
DensityCurve density_curve(std::span<const double> eigenvalues, double sigma,
                           std::span<const double> grid);

}  // namespace specemd
