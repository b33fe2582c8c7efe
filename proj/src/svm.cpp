#include "specemd/svm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "specemd/errors.hpp"
#include "specemd/rng.hpp"

namespace specemd {

namespace {

constexpr double kTau = 1e-12;  // curvature floor for non-PD working pairs

void check_problem(const Matrix& gram, std::span<const int> labels) {
  if (!gram.square() || gram.rows() != labels.size())
    throw InvalidArgument("svm: kernel is " + std::to_string(gram.rows()) + "x" +
                          std::to_string(gram.cols()) + " but there are " +
                          std::to_string(labels.size()) + " labels");
  bool pos = false, neg = false;
  for (int y : labels) {
    if (y == 1)
      pos = true;
    else if (y == -1)
      neg = true;
    else
      throw InvalidArgument("svm: labels must be +1 or -1");
  }
  if (!pos || !neg) throw InvalidArgument("svm: training labels contain a single class");
}

// Gradient of ½αᵀQα - Σα with Q_ij = y_i y_j K_ij.
std::vector<double> dual_gradient(const Matrix& gram, std::span<const int> y,
                                  std::span<const double> alphas) {
  const std::size_t n = y.size();
  std::vector<double> g(n, -1.0);
  for (std::size_t j = 0; j < n; ++j) {
    if (alphas[j] == 0.0) continue;
    for (std::size_t i = 0; i < n; ++i) g[i] += y[i] * y[j] * gram(i, j) * alphas[j];
  }
  return g;
}

bool in_up(int y, double a, double C) { return (y == 1 && a < C) || (y == -1 && a > 0.0); }
bool in_low(int y, double a, double C) { return (y == 1 && a > 0.0) || (y == -1 && a < C); }

}  // namespace

TrainedSvm svm_train(const Matrix& gram, std::span<const int> labels, const SvmOptions& options) {
  check_problem(gram, labels);
  if (max_asymmetry(gram) > 1e-10 * std::max(1.0, frobenius_norm(gram)))
    throw InvalidArgument("svm: kernel matrix is not symmetric");
  if (!(options.C > 0.0)) throw InvalidArgument("svm: C must be positive");

  const std::size_t n = labels.size();
  const double C = options.C;
  std::vector<double> alpha(n, 0.0);
  std::vector<double> grad(n, -1.0);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(options.seed);
  rng.shuffle(std::span<std::size_t>(order));

  std::size_t iter = 0;
  for (;; ++iter) {
    // Maximal violating pair: i maximizes -y G over I_up, j minimizes it over I_low.
    double m_up = -std::numeric_limits<double>::infinity();
    double m_low = std::numeric_limits<double>::infinity();
    std::size_t i = n, j = n;
    for (std::size_t t : order) {
      const double v = -labels[t] * grad[t];
      if (in_up(labels[t], alpha[t], C) && v > m_up) {
        m_up = v;
        i = t;
      }
      if (in_low(labels[t], alpha[t], C) && v < m_low) {
        m_low = v;
        j = t;
      }
    }
    if (i == n || j == n || m_up - m_low < options.tolerance) break;
    if (iter == options.max_iterations)
      throw ConvergenceError("SMO did not converge within " +
                             std::to_string(options.max_iterations) + " iterations");

    const double yi = labels[i], yj = labels[j];
    const double qii = gram(i, i), qjj = gram(j, j), qij = yi * yj * gram(i, j);
    const double old_i = alpha[i], old_j = alpha[j];

    if (yi != yj) {
      const double quad = std::max(qii + qjj + 2.0 * qij, kTau);
      const double delta = (-grad[i] - grad[j]) / quad;
      const double diff = alpha[i] - alpha[j];
      alpha[i] += delta;
      alpha[j] += delta;
      if (diff > 0.0) {
        if (alpha[j] < 0.0) {
          alpha[j] = 0.0;
          alpha[i] = diff;
        }
      } else if (alpha[i] < 0.0) {
        alpha[i] = 0.0;
        alpha[j] = -diff;
      }
      if (diff > 0.0) {
        if (alpha[i] > C) {
          alpha[i] = C;
          alpha[j] = C - diff;
        }
      } else if (alpha[j] > C) {
        alpha[j] = C;
        alpha[i] = C + diff;
      }
    } else {
      const double quad = std::max(qii + qjj - 2.0 * qij, kTau);
      const double delta = (grad[i] - grad[j]) / quad;
      const double sum = alpha[i] + alpha[j];
      alpha[i] -= delta;
      alpha[j] += delta;
      if (sum > C) {
        if (alpha[i] > C) {
          alpha[i] = C;
          alpha[j] = sum - C;
        }
        if (alpha[j] > C) {
          alpha[j] = C;
          alpha[i] = sum - C;
        }
      } else {
        if (alpha[j] < 0.0) {
          alpha[j] = 0.0;
          alpha[i] = sum;
        }
        if (alpha[i] < 0.0) {
          alpha[i] = 0.0;
          alpha[j] = sum;
        }
      }
    }

    const double di = alpha[i] - old_i, dj = alpha[j] - old_j;
    for (std::size_t k = 0; k < n; ++k)
      grad[k] += labels[k] * (yi * gram(k, i) * di + yj * gram(k, j) * dj);
  }

  TrainedSvm model;
  model.alphas = alpha;
  model.labels.assign(labels.begin(), labels.end());
  model.C = C;
  model.iterations = iter;
  for (std::size_t t = 0; t < n; ++t)
    if (alpha[t] > 0.0) model.support_indices.push_back(t);

  // r_t = y_t - Σ_s α_s y_s K_ts = -y_t G_t is the bias that puts x_t on its margin.
  double free_sum = 0.0;
  std::size_t free_count = 0;
  double lower = -std::numeric_limits<double>::infinity();
  double upper = std::numeric_limits<double>::infinity();
  for (std::size_t t = 0; t < n; ++t) {
    const double r = -labels[t] * grad[t];
    if (alpha[t] > 0.0 && alpha[t] < C) {
      free_sum += r;
      ++free_count;
    } else if ((alpha[t] == 0.0) == (labels[t] == 1)) {
      lower = std::max(lower, r);
    } else {
      upper = std::min(upper, r);
    }
  }
  if (free_count > 0)
    model.bias = free_sum / static_cast<double>(free_count);
  else if (std::isfinite(lower) && std::isfinite(upper))
    model.bias = 0.5 * (lower + upper);
  else
    model.bias = std::isfinite(lower) ? lower : upper;
  return model;
}

double svm_decision(const TrainedSvm& model, std::span<const double> kernel_row) {
  if (kernel_row.size() != model.alphas.size())
    throw InvalidArgument("svm_decision: kernel row has " + std::to_string(kernel_row.size()) +
                          " entries, model was trained on " +
                          std::to_string(model.alphas.size()) + " points");
  double f = model.bias;
  for (std::size_t i : model.support_indices)
    f += model.alphas[i] * model.labels[i] * kernel_row[i];
  return f;
}

std::vector<double> svm_decisions(const TrainedSvm& model, const Matrix& test_by_train) {
  std::vector<double> out(test_by_train.rows());
  for (std::size_t t = 0; t < out.size(); ++t) out[t] = svm_decision(model, test_by_train.row(t));
  return out;
}

double svm_dual_objective(const Matrix& gram, std::span<const int> labels,
                          std::span<const double> alphas) {
  const std::size_t n = labels.size();
  double linear = 0.0, quad = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    linear += alphas[i];
    for (std::size_t j = 0; j < n; ++j)
      quad += alphas[i] * alphas[j] * labels[i] * labels[j] * gram(i, j);
  }
  return linear - 0.5 * quad;
}

double svm_kkt_violation(const Matrix& gram, std::span<const int> labels,
                         std::span<const double> alphas, double C) {
  const auto grad = dual_gradient(gram, labels, alphas);
  double m_up = -std::numeric_limits<double>::infinity();
  double m_low = std::numeric_limits<double>::infinity();
  for (std::size_t t = 0; t < labels.size(); ++t) {
    const double v = -labels[t] * grad[t];
    if (in_up(labels[t], alphas[t], C)) m_up = std::max(m_up, v);
    if (in_low(labels[t], alphas[t], C)) m_low = std::min(m_low, v);
  }
  if (!std::isfinite(m_up) || !std::isfinite(m_low)) return 0.0;
  return m_up - m_low;
}

}  // namespace specemd
