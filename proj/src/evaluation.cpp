#include "specemd/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "specemd/errors.hpp"
#include "specemd/rng.hpp"
#include "specemd/svm.hpp"

namespace specemd {

namespace {

struct ClassCounts {
  std::size_t positive = 0;
  std::size_t negative = 0;
};

ClassCounts count_classes(std::span<const int> labels) {
  ClassCounts c;
  for (int y : labels) {
    if (y == 1)
      ++c.positive;
    else if (y == -1)
      ++c.negative;
    else
      throw InvalidArgument("labels must be +1 or -1");
  }
  return c;
}

std::vector<int> sign_predictions(std::span<const double> scores) {
  std::vector<int> out(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) out[i] = scores[i] > 0.0 ? 1 : -1;
  return out;
}

Metrics score_metrics(double c, std::span<const double> scores, std::span<const int> labels) {
  const auto pr = precision_recall(sign_predictions(scores), labels);
  return Metrics{c, roc_auc(scores, labels), pr.precision, pr.recall};
}

std::size_t first_argmax(std::span<const double> values) {
  return static_cast<std::size_t>(std::max_element(values.begin(), values.end()) - values.begin());
}

MeanSd mean_sd(std::span<const double> values) {
  MeanSd out;
  out.count = values.size();
  if (values.empty()) return out;
  out.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
  double ss = 0.0;
  for (double v : values) ss += (v - out.mean) * (v - out.mean);
  out.sd = std::sqrt(ss / static_cast<double>(values.size()));
  return out;
}

CvSummary summarize(const std::vector<const Metrics*>& metrics) {
  std::vector<double> auc, precision, recall;
  for (const Metrics* m : metrics) {
    auc.push_back(m->roc_auc);
    recall.push_back(m->recall);
    if (m->precision) precision.push_back(*m->precision);
  }
  return CvSummary{mean_sd(auc), mean_sd(precision), mean_sd(recall)};
}

void check_config(const CvConfig& config) {
  if (config.c_grid.empty()) throw InvalidArgument("C grid is empty");
  for (double c : config.c_grid)
    if (!(c > 0.0)) throw InvalidArgument("C grid values must be positive");
  if (config.repetitions == 0) throw InvalidArgument("need at least one repetition");
}

// Pooled test-fold decision values of every C on one split of a training set.
std::vector<std::vector<double>> pooled_scores(const Matrix& gram, std::span<const int> labels,
                                               std::span<const Fold> folds,
                                               const CvConfig& config, std::uint64_t seed) {
  std::vector<std::vector<double>> scores(config.c_grid.size(),
                                          std::vector<double>(labels.size(), 0.0));
  for (const Fold& fold : folds) {
    const Matrix train_gram = submatrix(gram, fold.train, fold.train);
    const Matrix test_block = submatrix(gram, fold.test, fold.train);
    std::vector<int> y(fold.train.size());
    for (std::size_t t = 0; t < y.size(); ++t) y[t] = labels[fold.train[t]];
    for (std::size_t c = 0; c < config.c_grid.size(); ++c) {
      const auto model =
          svm_train(train_gram, y, SvmOptions{config.c_grid[c], config.svm_tolerance, seed});
      const auto decisions = svm_decisions(model, test_block);
      for (std::size_t t = 0; t < fold.test.size(); ++t) scores[c][fold.test[t]] = decisions[t];
    }
  }
  return scores;
}

// Best C by pooled inner-CV AUC on one outer training set.
std::size_t select_c_nested(const Matrix& gram, std::span<const int> labels, const Fold& outer,
                            const CvConfig& config, std::uint64_t seed) {
  const Matrix train_gram = submatrix(gram, outer.train, outer.train);
  std::vector<int> y(outer.train.size());
  for (std::size_t t = 0; t < y.size(); ++t) y[t] = labels[outer.train[t]];
  const auto counts = count_classes(y);
  const std::size_t k = std::min({config.folds, counts.positive, counts.negative});
  if (k < 2) return 0;
  const auto inner = kfold_splits(y, k, seed);
  const auto scores = pooled_scores(train_gram, y, inner, config, seed);
  std::vector<double> auc(scores.size());
  for (std::size_t c = 0; c < scores.size(); ++c) auc[c] = roc_auc(scores[c], y);
  return first_argmax(auc);
}

RepetitionResult run_repetition(const Matrix& gram, std::span<const int> labels,
                                const CvConfig& config, std::size_t repetition) {
  RepetitionResult out;
  out.seed = config.base_seed + repetition;
  const auto folds = kfold_splits(labels, config.folds, out.seed);
  out.scores = pooled_scores(gram, labels, folds, config, out.seed);
  for (std::size_t c = 0; c < config.c_grid.size(); ++c)
    out.per_c.push_back(score_metrics(config.c_grid[c], out.scores[c], labels));

  if (config.nested_cv) {
    out.nested_scores.assign(labels.size(), 0.0);
    double chosen_c_sum = 0.0;
    for (std::size_t f = 0; f < folds.size(); ++f) {
      const std::uint64_t inner_seed = out.seed * 1000003ULL + f + 1;
      const std::size_t c = select_c_nested(gram, labels, folds[f], config, inner_seed);
      chosen_c_sum += config.c_grid[c];
      for (std::size_t i : folds[f].test) out.nested_scores[i] = out.scores[c][i];
    }
    out.nested = score_metrics(chosen_c_sum / static_cast<double>(folds.size()),
                               out.nested_scores, labels);
  }
  return out;
}

CvReport assemble(std::vector<RepetitionResult> reps, std::span<const int> labels,
                  const CvConfig& config) {
  CvReport report;
  report.config = config;
  report.labels.assign(labels.begin(), labels.end());
  report.repetitions = std::move(reps);
  const std::size_t grid = config.c_grid.size();
  if (config.best_c == BestCPolicy::global) {
    std::vector<double> mean_auc(grid, 0.0);
    for (const auto& r : report.repetitions)
      for (std::size_t c = 0; c < grid; ++c) mean_auc[c] += r.per_c[c].roc_auc;
    report.best_c_index.assign(report.repetitions.size(), first_argmax(mean_auc));
  } else {
    for (const auto& r : report.repetitions) {
      std::vector<double> auc(grid);
      for (std::size_t c = 0; c < grid; ++c) auc[c] = r.per_c[c].roc_auc;
      report.best_c_index.push_back(first_argmax(auc));
    }
  }
  return report;
}

void check_inputs(const Matrix& gram, std::span<const int> labels, const CvConfig& config) {
  check_config(config);
  if (!gram.square() || gram.rows() != labels.size())
    throw InvalidArgument("kernel matrix size does not match the number of labels");
  const auto counts = count_classes(labels);
  if (counts.positive < 2 || counts.negative < 2)
    throw InvalidArgument("cross-validation needs at least two subjects of each class");
}

}  // namespace

std::vector<Fold> kfold_splits(std::span<const int> labels, std::size_t k, std::uint64_t seed) {
  const std::size_t n = labels.size();
  if (k < 2) throw InvalidArgument("k-fold needs k >= 2");
  if (k > n)
    throw InvalidArgument("k-fold: k = " + std::to_string(k) + " exceeds " + std::to_string(n) +
                          " samples");
  std::vector<std::size_t> negatives, positives;
  for (std::size_t i = 0; i < n; ++i) {
    if (labels[i] == 1)
      positives.push_back(i);
    else if (labels[i] == -1)
      negatives.push_back(i);
    else
      throw InvalidArgument("labels must be +1 or -1");
  }
  if (positives.empty() || negatives.empty())
    throw InvalidArgument("k-fold: labels contain a single class");

  Rng rng(seed);
  rng.shuffle(std::span<std::size_t>(negatives));
  rng.shuffle(std::span<std::size_t>(positives));

  std::vector<std::size_t> fold_of(n);
  std::size_t next = 0;
  for (std::size_t i : negatives) fold_of[i] = next++ % k;
  for (std::size_t i : positives) fold_of[i] = next++ % k;

  std::vector<Fold> folds(k);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t f = 0; f < k; ++f) (f == fold_of[i] ? folds[f].test : folds[f].train).push_back(i);
  return folds;
}

double roc_auc(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size()) throw InvalidArgument("roc_auc: size mismatch");
  const auto counts = count_classes(labels);
  if (counts.positive == 0 || counts.negative == 0)
    throw InvalidArgument("roc_auc: labels contain a single class");

  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  // Walk tie groups in ascending score order; every positive beats the
  // negatives strictly below it and half-beats the negatives tied with it.
  double wins = 0.0;
  double negatives_below = 0.0;
  for (std::size_t g = 0; g < order.size();) {
    std::size_t end = g;
    double pos = 0.0, neg = 0.0;
    while (end < order.size() && scores[order[end]] == scores[order[g]]) {
      (labels[order[end]] == 1 ? pos : neg) += 1.0;
      ++end;
    }
    wins += pos * negatives_below + 0.5 * pos * neg;
    negatives_below += neg;
    g = end;
  }
  return wins / (static_cast<double>(counts.positive) * static_cast<double>(counts.negative));
}

PrecisionRecall precision_recall(std::span<const int> predictions, std::span<const int> labels) {
  if (predictions.size() != labels.size()) throw InvalidArgument("precision_recall: size mismatch");
  std::size_t tp = 0, fp = 0, fn = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const bool predicted = predictions[i] == 1;
    const bool actual = labels[i] == 1;
    if (predicted && actual) ++tp;
    if (predicted && !actual) ++fp;
    if (!predicted && actual) ++fn;
  }
  PrecisionRecall out;
  if (tp + fp > 0) out.precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
  out.recall = tp + fn > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0;
  return out;
}

RocCurve roc_curve(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size()) throw InvalidArgument("roc_curve: size mismatch");
  const auto counts = count_classes(labels);
  if (counts.positive == 0 || counts.negative == 0)
    throw InvalidArgument("roc_curve: labels contain a single class");
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

  RocCurve curve{{0.0}, {0.0}};
  std::size_t tp = 0, fp = 0;
  for (std::size_t g = 0; g < order.size();) {
    std::size_t end = g;
    while (end < order.size() && scores[order[end]] == scores[order[g]]) {
      (labels[order[end]] == 1 ? tp : fp) += 1;
      ++end;
    }
    curve.fpr.push_back(static_cast<double>(fp) / static_cast<double>(counts.negative));
    curve.tpr.push_back(static_cast<double>(tp) / static_cast<double>(counts.positive));
    g = end;
  }
  return curve;
}

double interpolate_tpr(const RocCurve& curve, double fpr) {
  const auto it = std::upper_bound(curve.fpr.begin(), curve.fpr.end(), fpr);
  if (it == curve.fpr.begin()) return curve.tpr.front();
  const auto k = static_cast<std::size_t>(it - curve.fpr.begin()) - 1;
  if (curve.fpr[k] == fpr || k + 1 == curve.fpr.size()) return curve.tpr[k];
  const double t = (fpr - curve.fpr[k]) / (curve.fpr[k + 1] - curve.fpr[k]);
  return curve.tpr[k] + t * (curve.tpr[k + 1] - curve.tpr[k]);
}

double area_under(const RocCurve& curve) {
  double area = 0.0;
  for (std::size_t k = 1; k < curve.fpr.size(); ++k)
    area += 0.5 * (curve.fpr[k] - curve.fpr[k - 1]) * (curve.tpr[k] + curve.tpr[k - 1]);
  return area;
}

const Metrics& CvReport::best(std::size_t repetition) const {
  const auto& r = repetitions.at(repetition);
  if (config.nested_cv && r.nested) return *r.nested;
  return r.per_c.at(best_c_index.at(repetition));
}

std::span<const double> CvReport::best_scores(std::size_t repetition) const {
  const auto& r = repetitions.at(repetition);
  if (config.nested_cv && r.nested) return r.nested_scores;
  return r.scores.at(best_c_index.at(repetition));
}

CvSummary CvReport::summary() const {
  std::vector<const Metrics*> metrics;
  for (std::size_t r = 0; r < repetitions.size(); ++r) metrics.push_back(&best(r));
  return summarize(metrics);
}

CvSummary CvReport::summary_for_c(std::size_t c_index) const {
  std::vector<const Metrics*> metrics;
  for (const auto& r : repetitions) metrics.push_back(&r.per_c.at(c_index));
  return summarize(metrics);
}

CvReport cross_validate(const Matrix& gram, std::span<const int> labels, const CvConfig& config,
                        Execution exec) {
  check_inputs(gram, labels, config);
  std::vector<RepetitionResult> reps(config.repetitions);
  parallel_for(exec, config.repetitions,
               [&](std::size_t r) { reps[r] = run_repetition(gram, labels, config, r); });
  return assemble(std::move(reps), labels, config);
}

MeanRoc mean_roc_curve(const CvReport& report, double step) {
  if (report.repetitions.empty()) throw InvalidArgument("mean_roc_curve: report has no repetitions");
  MeanRoc out;
  out.curve.fpr = uniform_grid(0.0, 1.0, step);
  out.curve.fpr.back() = 1.0;
  out.curve.tpr.assign(out.curve.fpr.size(), 0.0);
  for (std::size_t r = 0; r < report.repetitions.size(); ++r) {
    const auto curve = roc_curve(report.best_scores(r), report.labels);
    for (std::size_t k = 0; k < out.curve.fpr.size(); ++k)
      out.curve.tpr[k] += interpolate_tpr(curve, out.curve.fpr[k]);
  }
  for (double& v : out.curve.tpr) v /= static_cast<double>(report.repetitions.size());
  out.auc = area_under(out.curve);
  return out;
}

std::vector<ConnectivityGraph> prepare_graphs(std::span<const ConnectivityGraph> graphs,
                                              Weighting weighting, bool scale,
                                              const CoordinateTable* coords) {
  std::vector<ConnectivityGraph> out;
  out.reserve(graphs.size());
  for (const auto& g : graphs) {
    auto w = apply_weighting(g, weighting, coords);
    out.push_back(scale ? scale_by_total_weight(w) : std::move(w));
  }
  return out;
}

GramMatrix build_gram(std::span<const ConnectivityGraph> prepared, KernelKind kernel,
                      const EmdKernelOptions& emd, Execution exec) {
  switch (kernel) {
    case KernelKind::emd:
      return emd_kernel_gram(spectra_of(prepared, exec), emd, exec);
    case KernelKind::linear_spectra: {
      std::vector<FeatureVector> features;
      for (const auto& s : spectra_of(prepared, exec)) features.push_back(spectrum_features(s));
      return linear_gram(features, exec);
    }
    case KernelKind::linear_edges: {
      std::vector<FeatureVector> features;
      for (const auto& g : prepared) features.push_back(bag_of_edges(g));
      return linear_gram(features, exec);
    }
  }
  throw InvalidArgument("unknown kernel");
}

ExperimentResult run_experiment(std::span<const ConnectivityGraph> graphs,
                                std::span<const int> labels, const CoordinateTable* coords,
                                const ExperimentConfig& config, Execution exec) {
  if (graphs.size() != labels.size())
    throw InvalidArgument("run_experiment: " + std::to_string(graphs.size()) + " graphs but " +
                          std::to_string(labels.size()) + " labels");
  check_inputs(Matrix(labels.size(), labels.size()), labels, config.cv);
  const auto prepared = prepare_graphs(graphs, config.weighting, config.scale, coords);
  ExperimentResult out;
  out.gram = build_gram(prepared, config.kernel, config.emd, exec);
  out.report = cross_validate(out.gram.values, labels, config.cv, exec);
  out.report.kernel = std::string(to_string(config.kernel));
  out.report.weighting = std::string(to_string(config.weighting));
  return out;
}

namespace reference {

CvReport cross_validate(const Matrix& gram, std::span<const int> labels, const CvConfig& config) {
  check_inputs(gram, labels, config);
  std::vector<RepetitionResult> reps;
  for (std::size_t r = 0; r < config.repetitions; ++r)
    reps.push_back(run_repetition(gram, labels, config, r));
  return assemble(std::move(reps), labels, config);
}

}  // namespace reference

}  // namespace specemd
