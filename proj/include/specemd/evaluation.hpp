#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "specemd/graph.hpp"
#include "specemd/kernels.hpp"
#include "specemd/matrix.hpp"
#include "specemd/parallel.hpp"

namespace specemd {

struct Fold {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

/// Stratified k-fold partition. Each class is shuffled with the seed and dealt
/// round-robin across folds, continuing the fold counter from one class to
/// the next so fold sizes differ by at most one. Labels are +1 / -1.
std::vector<Fold> kfold_splits(std::span<const int> labels, std::size_t k, std::uint64_t seed);

/// Mann-Whitney estimate: P(score_pos > score_neg) with ties counted 1/2.
double roc_auc(std::span<const double> scores, std::span<const int> labels);

struct PrecisionRecall {
  std::optional<double> precision;  // missing when nothing is predicted positive
  double recall = 0.0;
};

/// Positive class is +1.
PrecisionRecall precision_recall(std::span<const int> predictions, std::span<const int> labels);

/// Piecewise-linear ROC curve from (0,0) to (1,1). Tied scores form a single
/// (possibly diagonal) segment.
struct RocCurve {
  std::vector<double> fpr;
  std::vector<double> tpr;
};

RocCurve roc_curve(std::span<const double> scores, std::span<const int> labels);

/// TPR of the curve at a given FPR; on vertical segments the upper value.
double interpolate_tpr(const RocCurve& curve, double fpr);

/// Trapezoidal area under a curve.
double area_under(const RocCurve& curve);

enum class BestCPolicy { per_repetition, global };

struct CvConfig {
  std::vector<double> c_grid{0.1, 1.0, 10.0, 50.0};
  std::size_t repetitions = 100;
  std::size_t folds = 10;
  std::uint64_t base_seed = 20160101;
  BestCPolicy best_c = BestCPolicy::per_repetition;
  /// Select C inside each outer training fold instead of on the pooled test
  /// predictions.
  bool nested_cv = false;
  double svm_tolerance = 1e-3;
};

struct Metrics {
  double c = 0.0;
  double roc_auc = 0.0;
  std::optional<double> precision;
  double recall = 0.0;
};

struct RepetitionResult {
  std::uint64_t seed = 0;
  std::vector<Metrics> per_c;               // aligned with the C grid
  std::vector<std::vector<double>> scores;  // [c][subject] pooled test-fold decision values
  std::optional<Metrics> nested;            // nested_cv only; c is the mean selected C
  std::vector<double> nested_scores;
};

struct MeanSd {
  double mean = 0.0;
  double sd = 0.0;  // population standard deviation
  std::size_t count = 0;
};

struct CvSummary {
  MeanSd roc_auc;
  MeanSd precision;  // over repetitions where precision is defined
  MeanSd recall;
};

struct CvReport {
  CvConfig config;
  std::string kernel;
  std::string weighting;
  std::vector<int> labels;
  std::vector<RepetitionResult> repetitions;
  /// Index into the C grid used for the headline result of each repetition.
  std::vector<std::size_t> best_c_index;

  /// Headline metrics of a repetition (nested result when nested_cv is set).
  const Metrics& best(std::size_t repetition) const;
  std::span<const double> best_scores(std::size_t repetition) const;
  CvSummary summary() const;
  /// Summary restricted to one entry of the C grid.
  CvSummary summary_for_c(std::size_t c_index) const;
};

/// Repeated stratified k-fold cross-validation of a precomputed-kernel SVM.
/// Repetition r uses seed base_seed + r; repetitions run in parallel.
CvReport cross_validate(const Matrix& gram, std::span<const int> labels, const CvConfig& config,
                        Execution exec = {});

/// Per-repetition ROC curves of the headline scores, interpolated on an FPR
/// grid of the given step and averaged.
struct MeanRoc {
  RocCurve curve;
  double auc = 0.0;
};

MeanRoc mean_roc_curve(const CvReport& report, double step = 0.01);

struct ExperimentConfig {
  Weighting weighting = Weighting::combined;
  KernelKind kernel = KernelKind::emd;
  /// Divide each matrix by its total weight after weighting.
  bool scale = true;
  EmdKernelOptions emd;
  CvConfig cv;
};

struct ExperimentResult {
  GramMatrix gram;
  CvReport report;
};

/// Applies the weighting and scaling to every graph.
std::vector<ConnectivityGraph> prepare_graphs(std::span<const ConnectivityGraph> graphs,
                                              Weighting weighting, bool scale,
                                              const CoordinateTable* coords);

/// Kernel over prepared graphs.
GramMatrix build_gram(std::span<const ConnectivityGraph> prepared, KernelKind kernel,
                      const EmdKernelOptions& emd, Execution exec = {});

/// Full pipeline: weighting, scaling, kernel, repeated cross-validation.
/// labels are +1 / -1.
ExperimentResult run_experiment(std::span<const ConnectivityGraph> graphs,
                                std::span<const int> labels, const CoordinateTable* coords,
                                const ExperimentConfig& config, Execution exec = {});

namespace reference {

/// Serial repetition loop.
CvReport cross_validate(const Matrix& gram, std::span<const int> labels, const CvConfig& config);

}  // namespace reference

}  // namespace specemd
