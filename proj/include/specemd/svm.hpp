#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "specemd/matrix.hpp"

namespace specemd {

struct SvmOptions {
  double C = 1.0;
  /// Stop when the maximal KKT violation, in decision-value units, is below this.
  double tolerance = 1e-3;
  /// Breaks ties between equally violating working pairs.
  std::uint64_t seed = 0;
  std::size_t max_iterations = 100000;
};

/// Soft-margin binary SVM trained on a precomputed kernel.
struct TrainedSvm {
  std::vector<double> alphas;  // in [0, C]
  double bias = 0.0;
  std::vector<std::size_t> support_indices;  // alpha > 0
  std::vector<int> labels;                   // +1 / -1
  double C = 0.0;
  std::size_t iterations = 0;
};

/// Solves max Σα - ½ΣΣ α_i α_j y_i y_j K_ij s.t. 0 <= α <= C, Σ α_i y_i = 0
/// with SMO using the maximal violating pair.
TrainedSvm svm_train(const Matrix& gram, std::span<const int> labels, const SvmOptions& options);

/// Σ α_i y_i K(x_i, x) + b for one test point.
double svm_decision(const TrainedSvm& model, std::span<const double> kernel_row);

/// Decision values for every row of a (test x train) kernel block.
std::vector<double> svm_decisions(const TrainedSvm& model, const Matrix& test_by_train);

/// Dual objective Σα - ½ αᵀ Q α at the given coefficients.
double svm_dual_objective(const Matrix& gram, std::span<const int> labels,
                          std::span<const double> alphas);

/// Largest KKT violation m(α) - M(α) in decision-value units (≤ 0 at optimum).
double svm_kkt_violation(const Matrix& gram, std::span<const int> labels,
                         std::span<const double> alphas, double C);

}  // namespace specemd
