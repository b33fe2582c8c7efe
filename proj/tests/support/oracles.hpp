#pragma once

// Independent reference computations used only by the test suites. None of
// these call into the code paths they check.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <span>
#include <vector>

#include "specemd/graph.hpp"
#include "specemd/matrix.hpp"
#include "specemd/rng.hpp"

namespace specemd::oracle {

/// det(m - lambda I) by Gaussian elimination with partial pivoting.
inline long double characteristic_value(const Matrix& m, long double lambda) {
  const std::size_t n = m.rows();
  std::vector<long double> a(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a[i * n + j] = m(i, j) - (i == j ? lambda : 0.0L);
  long double det = 1.0L;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::fabs(a[r * n + c]) > std::fabs(a[p * n + c])) p = r;
    if (a[p * n + c] == 0.0L) return 0.0L;
    if (p != c) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a[c * n + j], a[p * n + j]);
      det = -det;
    }
    det *= a[c * n + c];
    for (std::size_t r = c + 1; r < n; ++r) {
      const long double f = a[r * n + c] / a[c * n + c];
      for (std::size_t j = c; j < n; ++j) a[r * n + j] -= f * a[c * n + j];
    }
  }
  return det;
}

/// Roots of the characteristic polynomial of a small symmetric matrix: scan
/// the Gershgorin interval for sign changes, then bisect each bracket.
/// Assumes simple, well-separated roots (true for random matrices).
inline std::vector<double> characteristic_roots(const Matrix& m, std::size_t scan_points = 200000) {
  const std::size_t n = m.rows();
  double lo = 0.0, hi = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double radius = 0.0;
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) radius += std::abs(m(i, j));
    lo = std::min(lo, m(i, i) - radius);
    hi = std::max(hi, m(i, i) + radius);
  }
  lo -= 1e-3;
  hi += 1e-3;
  std::vector<double> roots;
  const double step = (hi - lo) / static_cast<double>(scan_points);
  long double prev = characteristic_value(m, lo);
  for (std::size_t k = 1; k <= scan_points; ++k) {
    const double x = lo + step * static_cast<double>(k);
    const long double cur = characteristic_value(m, x);
    if ((prev < 0) != (cur < 0)) {
      long double a = x - step, b = x;
      long double fa = prev;
      for (int it = 0; it < 200; ++it) {
        const long double mid = 0.5L * (a + b);
        if (mid == a || mid == b) break;
        const long double fm = characteristic_value(m, mid);
        if ((fa < 0) == (fm < 0)) {
          a = mid;
          fa = fm;
        } else {
          b = mid;
        }
      }
      roots.push_back(static_cast<double>(0.5L * (a + b)));
    }
    prev = cur;
  }
  return roots;
}

/// Connected components by union-find over positive-weight edges.
inline std::size_t component_count(const ConnectivityGraph& g) {
  const std::size_t n = g.size();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::size_t components = n;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (g.weight(i, j) > 0.0) {
        const auto a = find(i), b = find(j);
        if (a != b) {
          parent[a] = b;
          --components;
        }
      }
  return components;
}

/// Wins + ties/2 over all (positive, negative) pairs.
inline double brute_force_auc(std::span<const double> scores, std::span<const int> labels) {
  double wins = 0.0;
  double pairs = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (labels[i] != 1) continue;
    for (std::size_t j = 0; j < scores.size(); ++j) {
      if (labels[j] != -1) continue;
      pairs += 1.0;
      if (scores[i] > scores[j])
        wins += 1.0;
      else if (scores[i] == scores[j])
        wins += 0.5;
    }
  }
  return wins / pairs;
}

/// Euclidean projection onto {0 <= a <= C, yᵀa = 0} by bisection on the
/// multiplier of the equality constraint.
inline std::vector<double> project_svm_feasible(std::span<const double> z, std::span<const int> y,
                                                double C) {
  auto clipped = [&](double mu, std::size_t i) {
    return std::clamp(z[i] - mu * y[i], 0.0, C);
  };
  auto residual = [&](double mu) {
    double r = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) r += y[i] * clipped(mu, i);
    return r;
  };
  double bound = C;
  for (double v : z) bound = std::max(bound, std::abs(v) + C);
  double lo = -bound, hi = bound;  // residual(lo) >= 0 >= residual(hi)
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (residual(mid) > 0.0 ? lo : hi) = mid;
  }
  const double mu = 0.5 * (lo + hi);
  std::vector<double> out(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) out[i] = clipped(mu, i);
  return out;
}

/// Maximizes the SVM dual with accelerated projected gradient (FISTA with
/// restarts). Returns the maximizing coefficients.
inline std::vector<double> svm_dual_projected_gradient(const Matrix& gram, std::span<const int> y,
                                                       double C, int iterations = 40000) {
  const std::size_t n = y.size();
  Matrix q(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) q(i, j) = y[i] * y[j] * gram(i, j);

  // Lipschitz constant: largest eigenvalue of Q by power iteration.
  std::vector<double> v(n, 1.0), w(n);
  double lipschitz = 1.0;
  for (int it = 0; it < 500; ++it) {
    for (std::size_t i = 0; i < n; ++i) {
      w[i] = 0.0;
      for (std::size_t j = 0; j < n; ++j) w[i] += q(i, j) * v[j];
    }
    double norm = 0.0;
    for (double x : w) norm += x * x;
    norm = std::sqrt(norm);
    if (norm == 0.0) break;
    lipschitz = norm;
    for (std::size_t i = 0; i < n; ++i) v[i] = w[i] / norm;
  }
  lipschitz *= 1.01;

  auto objective = [&](std::span<const double> a) {
    double lin = 0.0, quad = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      lin += a[i];
      for (std::size_t j = 0; j < n; ++j) quad += a[i] * q(i, j) * a[j];
    }
    return lin - 0.5 * quad;
  };

  std::vector<double> alpha(n, 0.0), momentum = alpha, grad(n), step(n);
  double t = 1.0;
  double best = objective(alpha);
  for (int it = 0; it < iterations; ++it) {
    for (std::size_t i = 0; i < n; ++i) {
      grad[i] = 1.0;
      for (std::size_t j = 0; j < n; ++j) grad[i] -= q(i, j) * momentum[j];
      step[i] = momentum[i] + grad[i] / lipschitz;
    }
    auto next = project_svm_feasible(step, y, C);
    const double value = objective(next);
    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    if (value < best) {
      // restart momentum when the objective stops improving
      t = 1.0;
      momentum = alpha;
      continue;
    }
    best = value;
    for (std::size_t i = 0; i < n; ++i)
      momentum[i] = next[i] + ((t - 1.0) / t_next) * (next[i] - alpha[i]);
    alpha = std::move(next);
    t = t_next;
  }
  return alpha;
}

/// Random symmetric nonnegative weighted graph. Each pair is an edge with
/// probability density; isolated_fraction of nodes get no edges at all.
inline ConnectivityGraph random_weighted_graph(std::size_t n, double density, Rng& rng,
                                               double isolated_fraction = 0.0) {
  Matrix w(n, n);
  std::vector<bool> isolated(n, false);
  for (std::size_t i = 0; i < n; ++i) isolated[i] = rng.uniform01() < isolated_fraction;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (!isolated[i] && !isolated[j] && rng.uniform01() < density)
        w(i, j) = w(j, i) = 0.01 + 100.0 * rng.uniform01();
  return ConnectivityGraph(std::move(w));
}

inline Matrix random_symmetric(std::size_t n, Rng& rng) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) m(i, j) = m(j, i) = 2.0 * rng.uniform01() - 1.0;
  return m;
}

/// Copies node v into a new node n with the same row/column, no twin edge.
inline ConnectivityGraph duplicate_vertex(const ConnectivityGraph& g, std::size_t v) {
  const std::size_t n = g.size();
  Matrix w(n + 1, n + 1);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) w(i, j) = g.weight(i, j);
  for (std::size_t j = 0; j < n; ++j) w(n, j) = w(j, n) = g.weight(v, j);
  return ConnectivityGraph(std::move(w));
}

inline ConnectivityGraph unit_graph(std::size_t n,
                                    std::initializer_list<std::pair<std::size_t, std::size_t>> edges) {
  Matrix w(n, n);
  for (auto [i, j] : edges) w(i, j) = w(j, i) = 1.0;
  return ConnectivityGraph(std::move(w));
}

inline ConnectivityGraph complete_graph(std::size_t n) {
  Matrix w(n, n, 1.0);
  for (std::size_t i = 0; i < n; ++i) w(i, i) = 0.0;
  return ConnectivityGraph(std::move(w));
}

}  // namespace specemd::oracle
