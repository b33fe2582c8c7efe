#include "specemd/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "specemd/distances.hpp"
#include "specemd/errors.hpp"

namespace specemd {

namespace {

void check_equal_lengths(std::span<const FeatureVector> features) {
  for (const auto& f : features)
    if (f.size() != features.front().size())
      throw InvalidArgument("feature vectors have different lengths (" +
                            std::to_string(features.front().size()) + " vs " +
                            std::to_string(f.size()) + ")");
}

double dot(std::span<const double> a, std::span<const double> b) {
  double sum = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) sum += a[k] * b[k];
  return sum;
}

}  // namespace

std::string_view to_string(KernelKind k) {
  switch (k) {
    case KernelKind::emd: return "emd";
    case KernelKind::linear_spectra: return "linear-spectra";
    case KernelKind::linear_edges: return "linear-edges";
  }
  return "unknown";
}

std::optional<KernelKind> parse_kernel(std::string_view name) {
  if (name == "emd") return KernelKind::emd;
  if (name == "linear-spectra") return KernelKind::linear_spectra;
  if (name == "linear-edges") return KernelKind::linear_edges;
  return std::nullopt;
}

double min_eigenvalue(const Matrix& m) {
  if (m.empty()) return 0.0;
  return eigenvalues_symmetric(m).front();
}

Matrix clip_to_psd(const Matrix& m) {
  const auto eig = jacobi_eigen(m, true);
  const std::size_t n = m.rows();
  Matrix out(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const double lambda = std::max(eig.values[k], 0.0);
    if (lambda == 0.0) continue;
    for (std::size_t i = 0; i < n; ++i) {
      const double vi = lambda * eig.vectors(i, k);
      for (std::size_t j = 0; j < n; ++j) out(i, j) += vi * eig.vectors(j, k);
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) out(i, j) = out(j, i) = 0.5 * (out(i, j) + out(j, i));
  return out;
}

GramMatrix gram_from_distances(const Matrix& distances, const EmdKernelOptions& options) {
  if (!distances.square()) throw InvalidArgument("distance matrix is not square");
  if (!(options.gamma > 0.0)) throw InvalidArgument("kernel gamma must be positive");
  const std::size_t n = distances.rows();
  GramMatrix gram;
  gram.values = Matrix(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    gram.values(i, i) = 1.0;
    for (std::size_t j = i + 1; j < n; ++j)
      gram.values(i, j) = gram.values(j, i) = std::exp(-options.gamma * distances(i, j));
  }
  gram.min_eigenvalue = min_eigenvalue(gram.values);
  if (!gram.positive_semidefinite()) {
    if (!options.clip_psd)
      throw NotPositiveSemidefinite(
          "EMD kernel matrix is indefinite (min eigenvalue " +
              std::to_string(gram.min_eigenvalue) + "); enable PSD clipping to repair it",
          gram.min_eigenvalue);
    gram.values = clip_to_psd(gram.values);
    gram.min_eigenvalue = min_eigenvalue(gram.values);
  }
  return gram;
}

GramMatrix emd_kernel_gram(std::span<const Spectrum> spectra, const EmdKernelOptions& options,
                           Execution exec) {
  if (spectra.empty()) throw InvalidArgument("emd_kernel_gram: no spectra given");
  return gram_from_distances(pairwise_distances(spectra, exec), options);
}

GramMatrix linear_gram(std::span<const FeatureVector> features, Execution exec) {
  check_equal_lengths(features);
  const std::size_t n = features.size();
  GramMatrix gram;
  gram.values = Matrix(n, n);
  parallel_for(exec, n, [&](std::size_t i) {
    for (std::size_t j = i; j < n; ++j) gram.values(i, j) = dot(features[i], features[j]);
  });
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) gram.values(j, i) = gram.values(i, j);
  gram.min_eigenvalue = min_eigenvalue(gram.values);
  return gram;
}

FeatureVector bag_of_edges(const ConnectivityGraph& g) {
  const std::size_t n = g.size();
  FeatureVector out;
  out.reserve(n * (n - (n > 0 ? 1 : 0)) / 2);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) out.push_back(g.weight(i, j));
  return out;
}

FeatureVector spectrum_features(const Spectrum& s) {
  return FeatureVector(s.values().begin(), s.values().end());
}

namespace reference {

GramMatrix linear_gram(std::span<const FeatureVector> features) {
  check_equal_lengths(features);
  const std::size_t n = features.size();
  GramMatrix gram;
  gram.values = Matrix(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      gram.values(i, j) = j >= i ? dot(features[i], features[j]) : dot(features[j], features[i]);
  gram.min_eigenvalue = min_eigenvalue(gram.values);
  return gram;
}

}  // namespace reference

}  // namespace specemd
