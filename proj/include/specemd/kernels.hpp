#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "specemd/graph.hpp"
#include "specemd/matrix.hpp"
#include "specemd/parallel.hpp"
#include "specemd/spectral.hpp"

namespace specemd {

/// Symmetric kernel matrix over a dataset plus its PSD diagnostic.
struct GramMatrix {
  Matrix values;
  double min_eigenvalue = 0.0;

  std::size_t size() const noexcept { return values.rows(); }
  bool positive_semidefinite() const noexcept { return min_eigenvalue >= -kPsdTolerance; }

  static constexpr double kPsdTolerance = 1e-8;
};

using FeatureVector = std::vector<double>;

enum class KernelKind { emd, linear_spectra, linear_edges };

std::string_view to_string(KernelKind k);
std::optional<KernelKind> parse_kernel(std::string_view name);

struct EmdKernelOptions {
  /// K = exp(-gamma * d). gamma = 1 is the unscaled kernel; other values are
  /// an extension.
  double gamma = 1.0;
  /// Project onto the PSD cone instead of throwing when min eigenvalue < -1e-8.
  bool clip_psd = false;
};

/// exp(-gamma * emd(S_i, S_j)) over all pairs. Throws NotPositiveSemidefinite
/// unless clipping is enabled.
GramMatrix emd_kernel_gram(std::span<const Spectrum> spectra, const EmdKernelOptions& options = {},
                           Execution exec = {});

/// Same, from a precomputed distance matrix.
GramMatrix gram_from_distances(const Matrix& distances, const EmdKernelOptions& options = {});

/// <x_i, x_j> over all pairs. Never throws on PSD; inspect min_eigenvalue.
GramMatrix linear_gram(std::span<const FeatureVector> features, Execution exec = {});

/// Strict upper triangle, row-major: n(n-1)/2 entries.
FeatureVector bag_of_edges(const ConnectivityGraph& g);

FeatureVector spectrum_features(const Spectrum& s);

/// Sets negative eigenvalues to zero and rebuilds the matrix.
Matrix clip_to_psd(const Matrix& m);

/// Smallest eigenvalue of a symmetric matrix.
double min_eigenvalue(const Matrix& m);

namespace reference {

GramMatrix linear_gram(std::span<const FeatureVector> features);

}  // namespace reference

}  // namespace specemd
