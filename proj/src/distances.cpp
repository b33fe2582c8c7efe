#include "specemd/distances.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <queue>
#include <string>
#include <vector>

#include "specemd/errors.hpp"

namespace specemd {

namespace {

std::vector<double> sorted_copy(std::span<const double> x) {
  std::vector<double> v(x.begin(), x.end());
  if (!std::is_sorted(v.begin(), v.end())) std::sort(v.begin(), v.end());
  return v;
}

// Transportation simplex on integer-valued masses. Supplies are m each, demands
// n each, so every basic flow stays an exact integer in double precision and
// the only rounding happens in the potentials.
class TransportationSimplex {
 public:
  TransportationSimplex(std::span<const double> s, std::span<const double> t)
      : rows_(s.size()), cols_(t.size()), cost_(rows_, cols_) {
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) cost_(i, j) = std::abs(s[i] - t[j]);
  }

  Matrix solve() {
    northwest_corner();
    const std::size_t max_pivots = 50 * (rows_ + cols_) * (rows_ + cols_) + 1000;
    for (std::size_t pivot = 0;; ++pivot) {
      if (pivot == max_pivots)
        throw ConvergenceError("transportation simplex exceeded " + std::to_string(max_pivots) +
                               " pivots");
      compute_potentials();
      const auto entering = find_entering();
      if (!entering) break;
      pivot_on(*entering);
    }
    Matrix flows(rows_, cols_);
    const double total = static_cast<double>(rows_ * cols_);
    for (const auto& cell : basis_) flows(cell.row, cell.col) = cell.flow / total;
    return flows;
  }

  const Matrix& cost() const { return cost_; }

 private:
  struct Cell {
    std::size_t row;
    std::size_t col;
    double flow;
  };
  struct Entering {
    std::size_t row;
    std::size_t col;
  };

  static constexpr double kReducedCostTolerance = 1e-12;

  // Tree node ids: rows are [0, rows_), columns are [rows_, rows_ + cols_).
  std::size_t col_node(std::size_t j) const { return rows_ + j; }

  void northwest_corner() {
    std::vector<double> supply(rows_, static_cast<double>(cols_));
    std::vector<double> demand(cols_, static_cast<double>(rows_));
    std::size_t i = 0, j = 0;
    while (true) {
      const double x = std::min(supply[i], demand[j]);
      basis_.push_back({i, j, x});
      supply[i] -= x;
      demand[j] -= x;
      if (i + 1 == rows_ && j + 1 == cols_) break;
      if (supply[i] == 0.0 && i + 1 < rows_)
        ++i;
      else
        ++j;
    }
  }

  void build_adjacency() {
    adjacency_.assign(rows_ + cols_, {});
    for (std::size_t b = 0; b < basis_.size(); ++b) {
      adjacency_[basis_[b].row].push_back(b);
      adjacency_[col_node(basis_[b].col)].push_back(b);
    }
  }

  void compute_potentials() {
    build_adjacency();
    const double unset = std::numeric_limits<double>::quiet_NaN();
    u_.assign(rows_, unset);
    v_.assign(cols_, unset);
    u_[0] = 0.0;
    std::queue<std::size_t> frontier;
    frontier.push(0);
    while (!frontier.empty()) {
      const std::size_t node = frontier.front();
      frontier.pop();
      for (std::size_t b : adjacency_[node]) {
        const Cell& c = basis_[b];
        if (node < rows_ && std::isnan(v_[c.col])) {
          v_[c.col] = cost_(c.row, c.col) - u_[c.row];
          frontier.push(col_node(c.col));
        } else if (node >= rows_ && std::isnan(u_[c.row])) {
          u_[c.row] = cost_(c.row, c.col) - v_[c.col];
          frontier.push(c.row);
        }
      }
    }
  }

  // Bland's rule: the first improving cell in row-major order.
  std::optional<Entering> find_entering() const {
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j)
        if (cost_(i, j) - u_[i] - v_[j] < -kReducedCostTolerance) {
          const bool basic = std::any_of(basis_.begin(), basis_.end(), [&](const Cell& c) {
            return c.row == i && c.col == j;
          });
          if (!basic) return Entering{i, j};
        }
    return std::nullopt;
  }

  // Basis cells on the tree path from row node `row` to column node `col`,
  // ordered from the row end.
  std::vector<std::size_t> tree_path(std::size_t row, std::size_t col) const {
    const std::size_t nodes = rows_ + cols_;
    const std::size_t none = std::numeric_limits<std::size_t>::max();
    std::vector<std::size_t> via(nodes, none);  // basis cell used to reach node
    std::vector<bool> seen(nodes, false);
    std::queue<std::size_t> frontier;
    frontier.push(row);
    seen[row] = true;
    const std::size_t target = col_node(col);
    while (!frontier.empty() && !seen[target]) {
      const std::size_t node = frontier.front();
      frontier.pop();
      for (std::size_t b : adjacency_[node]) {
        const Cell& c = basis_[b];
        const std::size_t other = node < rows_ ? col_node(c.col) : c.row;
        if (seen[other]) continue;
        seen[other] = true;
        via[other] = b;
        frontier.push(other);
      }
    }
    if (!seen[target]) throw ConvergenceError("transportation simplex basis is not a spanning tree");
    std::vector<std::size_t> path;
    for (std::size_t node = target; node != row;) {
      const std::size_t b = via[node];
      path.push_back(b);
      node = node < rows_ ? col_node(basis_[b].col) : basis_[b].row;
    }
    std::reverse(path.begin(), path.end());
    return path;
  }

  void pivot_on(const Entering& e) {
    const auto path = tree_path(e.row, e.col);
    // The entering cell gains flow; path cells alternate -, +, -, ... starting
    // from the one sharing the entering row. The path has odd length.
    std::size_t leaving = path.front();
    double theta = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < path.size(); k += 2) {
      const Cell& c = basis_[path[k]];
      const Cell& best = basis_[leaving];
      const bool smaller = c.flow < theta;
      const bool tie_lower_index =
          c.flow == theta && (c.row * cols_ + c.col) < (best.row * cols_ + best.col);
      if (smaller || tie_lower_index) {
        theta = c.flow;
        leaving = path[k];
      }
    }
    for (std::size_t k = 0; k < path.size(); ++k) basis_[path[k]].flow += (k % 2 == 0) ? -theta : theta;
    basis_[leaving] = {e.row, e.col, theta};
  }

  std::size_t rows_;
  std::size_t cols_;
  Matrix cost_;
  std::vector<Cell> basis_;
  std::vector<std::vector<std::size_t>> adjacency_;
  std::vector<double> u_;
  std::vector<double> v_;
};

}  // namespace

double emd_sorted(std::span<const double> s, std::span<const double> t) {
  if (s.empty() || t.empty()) throw InvalidArgument("emd_sorted: empty sample");
  if (s.size() != t.size())
    throw InvalidArgument("emd_sorted: sample sizes differ (" + std::to_string(s.size()) + " vs " +
                          std::to_string(t.size()) + ")");
  const bool presorted = std::is_sorted(s.begin(), s.end()) && std::is_sorted(t.begin(), t.end());
  double sum = 0.0;
  if (presorted) {
    for (std::size_t k = 0; k < s.size(); ++k) sum += std::abs(s[k] - t[k]);
  } else {
    const auto a = sorted_copy(s);
    const auto b = sorted_copy(t);
    for (std::size_t k = 0; k < a.size(); ++k) sum += std::abs(a[k] - b[k]);
  }
  return sum / static_cast<double>(s.size());
}

EmdSolution emd_lp(std::span<const double> s, std::span<const double> t) {
  if (s.empty() || t.empty()) throw InvalidArgument("emd_lp: empty sample");
  TransportationSimplex simplex(s, t);
  EmdSolution out;
  out.plan.flows = simplex.solve();
  double weighted = 0.0, mass = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = 0; j < t.size(); ++j) {
      const double f = out.plan.flows(i, j);
      weighted += f * simplex.cost()(i, j);
      mass += f;
    }
  out.plan.cost = weighted / mass;
  out.distance = out.plan.cost;
  return out;
}

double emd(std::span<const double> s, std::span<const double> t) {
  if (s.size() == t.size()) return emd_sorted(s, t);
  return emd_lp(s, t).distance;
}

Matrix pairwise_distances(std::span<const Spectrum> spectra, Execution exec) {
  const std::size_t n = spectra.size();
  Matrix d(n, n);
  parallel_for(exec, n, [&](std::size_t i) {
    for (std::size_t j = i + 1; j < n; ++j) d(i, j) = emd_sorted(spectra[i].values(), spectra[j].values());
  });
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) d(j, i) = d(i, j);
  return d;
}

namespace reference {

Matrix pairwise_distances(std::span<const Spectrum> spectra) {
  const std::size_t n = spectra.size();
  Matrix d(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) d(i, j) = emd_sorted(spectra[i].values(), spectra[j].values());
  return d;
}

}  // namespace reference

}  // namespace specemd
