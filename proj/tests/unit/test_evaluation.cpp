#include <algorithm>
#include <cmath>
#include <set>

#include "doctest.h"
#include "oracles.hpp"
#include "specemd/errors.hpp"
#include "specemd/evaluation.hpp"
#include "specemd/random_graphs.hpp"

using namespace specemd;

namespace {

std::vector<int> make_labels(std::size_t pos, std::size_t neg) {
  std::vector<int> y(pos, 1);
  y.insert(y.end(), neg, -1);
  return y;
}

void check_partition(const std::vector<Fold>& folds, std::size_t n) {
  std::multiset<std::size_t> seen;
  for (const auto& f : folds) {
    CHECK(f.train.size() + f.test.size() == n);
    seen.insert(f.test.begin(), f.test.end());
    std::vector<std::size_t> all = f.train;
    all.insert(all.end(), f.test.begin(), f.test.end());
    std::sort(all.begin(), all.end());
    for (std::size_t i = 0; i < n; ++i) CHECK(all[i] == i);
  }
  CHECK(seen.size() == n);
  for (std::size_t i = 0; i < n; ++i) CHECK(seen.count(i) == 1);
}

// Report holding precomputed scores, for exercising the ROC aggregation.
CvReport report_from_scores(std::vector<std::vector<double>> per_rep, std::vector<int> labels) {
  CvReport r;
  r.config.c_grid = {1.0};
  r.labels = std::move(labels);
  for (auto& s : per_rep) {
    RepetitionResult rep;
    rep.scores.push_back(std::move(s));
    rep.per_c.push_back(Metrics{1.0, roc_auc(rep.scores[0], r.labels), {}, 0.0});
    r.repetitions.push_back(std::move(rep));
    r.best_c_index.push_back(0);
  }
  return r;
}

// Gram of a two-class synthetic dataset of small WS and ER graphs.
Matrix synthetic_gram(std::size_t per_class, std::vector<int>& labels) {
  std::vector<ConnectivityGraph> graphs;
  labels.clear();
  for (std::size_t k = 0; k < per_class; ++k) {
    graphs.push_back(generate_ws(32, 64, 0.2, 100 + k));
    labels.push_back(1);
    graphs.push_back(generate_er(32, 64, 200 + k));
    labels.push_back(-1);
  }
  return emd_kernel_gram(spectra_of(graphs)).values;
}

}  // namespace

TEST_CASE("k-fold with k = N is leave-one-out") {
  const auto y = make_labels(5, 5);
  const auto folds = kfold_splits(y, 10, 1);
  REQUIRE(folds.size() == 10);
  for (const auto& f : folds) CHECK(f.test.size() == 1);
  check_partition(folds, 10);
}

TEST_CASE("stratified folds for 51 positives and 43 negatives") {
  const auto y = make_labels(51, 43);
  for (std::uint64_t seed : {1u, 2u, 20160101u}) {
    const auto folds = kfold_splits(y, 10, seed);
    check_partition(folds, 94);
    for (const auto& f : folds) {
      CHECK(f.test.size() >= 9);
      CHECK(f.test.size() <= 10);
      const auto pos = std::count_if(f.test.begin(), f.test.end(), [&](std::size_t i) { return y[i] == 1; });
      CHECK(pos >= 5);
      CHECK(pos <= 6);
      // within one subject of the global ratio
      const double expected = 51.0 / 94.0 * static_cast<double>(f.test.size());
      CHECK(std::abs(static_cast<double>(pos) - expected) <= 1.0);
    }
  }
  const auto a = kfold_splits(y, 10, 1), b = kfold_splits(y, 10, 2);
  bool differ = false;
  for (std::size_t f = 0; f < 10; ++f) differ = differ || a[f].test != b[f].test;
  CHECK(differ);
  CHECK(kfold_splits(y, 10, 7)[3].test == kfold_splits(y, 10, 7)[3].test);
}

TEST_CASE("k-fold argument errors") {
  CHECK_THROWS_AS(kfold_splits(make_labels(3, 3), 10, 1), InvalidArgument);
  CHECK_THROWS_AS(kfold_splits(make_labels(20, 0), 10, 1), InvalidArgument);
  CHECK_THROWS_AS(kfold_splits(make_labels(5, 5), 1, 1), InvalidArgument);
}

TEST_CASE("ROC AUC examples") {
  const std::vector<int> y{1, 1, -1, -1};
  CHECK(roc_auc(std::vector{0.9, 0.8, 0.2, 0.1}, y) == 1.0);
  CHECK(roc_auc(std::vector{0.1, 0.2, 0.8, 0.9}, y) == 0.0);
  CHECK(roc_auc(std::vector{0.9, 0.4, 0.5, 0.1}, y) == 0.75);
  CHECK(roc_auc(std::vector{0.5, 0.5, 0.5, 0.5}, y) == 0.5);
  CHECK_THROWS_AS(roc_auc(std::vector{0.1, 0.2}, std::vector{1, 1}), InvalidArgument);
}

TEST_CASE("ROC AUC equals brute-force pair counting, including ties") {
  Rng rng(321);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + rng.uniform_index(60);
    std::vector<int> y(n);
    std::vector<double> s(n);
    for (std::size_t i = 0; i < n; ++i) {
      y[i] = i == 0 ? 1 : (i == 1 ? -1 : (rng.bernoulli(0.5) ? 1 : -1));
      s[i] = trial % 2 ? static_cast<double>(rng.uniform_index(5)) : rng.uniform01();
    }
    const double auc = roc_auc(s, y);
    CHECK(auc == oracle::brute_force_auc(s, y));

    std::vector<double> neg(n), mono(n);
    for (std::size_t i = 0; i < n; ++i) {
      neg[i] = -s[i];
      mono[i] = std::exp(3.0 * s[i]) + 7.0;
    }
    CHECK(roc_auc(mono, y) == auc);
    CHECK(std::abs(roc_auc(neg, y) - (1.0 - auc)) <= 1e-15);
  }
}

TEST_CASE("precision and recall") {
  const std::vector<int> y{1, 1, 1, 1, -1, -1};
  const auto all = precision_recall(y, y);
  CHECK(all.precision == 1.0);
  CHECK(all.recall == 1.0);

  const auto pr = precision_recall(std::vector{1, 1, 1, -1, 1, -1}, y);
  CHECK(pr.precision == 0.75);
  CHECK(pr.recall == 0.75);

  const auto none = precision_recall(std::vector{-1, -1, -1, -1, -1, -1}, y);
  CHECK_FALSE(none.precision.has_value());
  CHECK(none.recall == 0.0);
}

TEST_CASE("ROC curve construction and interpolation") {
  const std::vector<int> y{1, -1, 1, -1};
  const auto c = roc_curve(std::vector{0.9, 0.8, 0.7, 0.1}, y);
  CHECK(c.fpr == std::vector{0.0, 0.0, 0.5, 0.5, 1.0});
  CHECK(c.tpr == std::vector{0.0, 0.5, 0.5, 1.0, 1.0});
  CHECK(interpolate_tpr(c, 0.0) == 0.5);
  CHECK(interpolate_tpr(c, 0.25) == 0.5);
  CHECK(interpolate_tpr(c, 0.5) == 1.0);
  CHECK(area_under(c) == 0.75);

  // ties make a diagonal segment
  const auto tied = roc_curve(std::vector{0.5, 0.5}, std::vector{1, -1});
  CHECK(tied.fpr == std::vector{0.0, 1.0});
  CHECK(interpolate_tpr(tied, 0.3) == doctest::Approx(0.3));
}

TEST_CASE("mean ROC curve") {
  const std::vector<int> y{1, 1, -1, -1};
  const auto perfect = mean_roc_curve(report_from_scores({{2, 1, -1, -2}}, y));
  CHECK(perfect.curve.fpr.size() == 101);
  CHECK(perfect.curve.tpr.front() == 1.0);
  CHECK(perfect.auc == doctest::Approx(1.0));

  const std::vector<double> s{0.9, 0.2, 0.5, 0.1};
  const auto single = mean_roc_curve(report_from_scores({s}, y));
  const auto triple = mean_roc_curve(report_from_scores({s, s, s}, y));
  for (std::size_t k = 0; k < single.curve.tpr.size(); ++k)
    CHECK(triple.curve.tpr[k] == doctest::Approx(single.curve.tpr[k]).epsilon(1e-15));

  const std::vector<double> other{0.1, 0.9, 0.5, 0.2};
  const auto mixed = mean_roc_curve(report_from_scores({s, other}, y));
  const auto ca = roc_curve(s, y), cb = roc_curve(other, y);
  for (std::size_t k = 0; k < mixed.curve.fpr.size(); ++k) {
    const double x = mixed.curve.fpr[k];
    CHECK(mixed.curve.tpr[k] ==
          doctest::Approx(0.5 * (interpolate_tpr(ca, x) + interpolate_tpr(cb, x))).epsilon(1e-15));
  }
}

TEST_CASE("cross-validation pools every subject once per repetition") {
  std::vector<int> labels;
  const auto gram = synthetic_gram(12, labels);
  CvConfig config;
  config.repetitions = 4;
  config.folds = 5;
  const auto report = cross_validate(gram, labels, config, Execution::with_workers(2));
  REQUIRE(report.repetitions.size() == 4);
  for (std::size_t r = 0; r < 4; ++r) {
    const auto& rep = report.repetitions[r];
    CHECK(rep.seed == config.base_seed + r);
    CHECK(rep.per_c.size() == 4);
    for (const auto& m : rep.per_c) {
      CHECK(m.roc_auc >= 0.0);
      CHECK(m.roc_auc <= 1.0);
    }
    const auto folds = kfold_splits(labels, 5, rep.seed);
    check_partition(folds, labels.size());
    double top = 0.0;
    for (const auto& m : rep.per_c) top = std::max(top, m.roc_auc);
    CHECK(report.best(r).roc_auc == top);
  }
  // WS vs ER spectra are easy to tell apart
  CHECK(report.summary().roc_auc.mean > 0.9);

  const auto serial = reference::cross_validate(gram, labels, config);
  for (std::size_t r = 0; r < 4; ++r) CHECK(serial.repetitions[r].scores == report.repetitions[r].scores);
  CHECK(serial.best_c_index == report.best_c_index);
}

TEST_CASE("best-C policies and nested cross-validation") {
  std::vector<int> labels;
  const auto gram = synthetic_gram(10, labels);
  CvConfig config;
  config.repetitions = 3;
  config.folds = 4;
  config.best_c = BestCPolicy::global;
  const auto global = cross_validate(gram, labels, config);
  CHECK(std::all_of(global.best_c_index.begin(), global.best_c_index.end(),
                    [&](std::size_t c) { return c == global.best_c_index[0]; }));

  config.best_c = BestCPolicy::per_repetition;
  config.nested_cv = true;
  const auto nested = cross_validate(gram, labels, config);
  for (std::size_t r = 0; r < 3; ++r) {
    REQUIRE(nested.repetitions[r].nested.has_value());
    CHECK(nested.best_scores(r).size() == labels.size());
    CHECK(nested.best(r).c >= 0.1);
    CHECK(nested.best(r).c <= 50.0);
  }
}

TEST_CASE("cross-validation argument errors") {
  CvConfig config;
  config.repetitions = 1;
  const std::vector<int> lonely{1, -1, -1, -1};
  CHECK_THROWS_AS(cross_validate(Matrix::identity(4), lonely, config), InvalidArgument);
  config.c_grid.clear();
  const std::vector<int> y{1, 1, -1, -1};
  CHECK_THROWS_AS(cross_validate(Matrix::identity(4), y, config), InvalidArgument);
}
