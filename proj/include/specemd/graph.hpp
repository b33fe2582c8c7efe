#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "specemd/matrix.hpp"

namespace specemd {

/// Region centre in millimetres (MNI space for connectome data).
struct Point3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

/// One row per node, in node order.
using CoordinateTable = std::vector<Point3>;

double euclidean_distance(const Point3& a, const Point3& b);

/// Undirected weighted graph with a dense adjacency matrix.
///
/// Invariants: square, a_ij == a_ji exactly, a_ii == 0, a_ij finite and >= 0.
/// The constructor enforces them; use symmetrized() for raw input that may be
/// slightly asymmetric or carry self-loops.
class ConnectivityGraph {
 public:
  ConnectivityGraph() = default;
  explicit ConnectivityGraph(Matrix weights);

  /// Averages m with its transpose and zeroes the diagonal.
  static ConnectivityGraph symmetrized(const Matrix& m);

  std::size_t size() const noexcept { return weights_.rows(); }
  const Matrix& weights() const noexcept { return weights_; }
  double weight(std::size_t i, std::size_t j) const noexcept { return weights_(i, j); }

  /// Number of unordered pairs with positive weight.
  std::size_t edge_count() const;

  /// Σ_ij a_ij over ordered pairs (each undirected edge counted twice).
  double total_weight() const;

  bool operator==(const ConnectivityGraph&) const = default;

 private:
  Matrix weights_;
};

enum class Weighting { original, distance, combined };

std::string_view to_string(Weighting w);
std::optional<Weighting> parse_weighting(std::string_view name);
bool needs_coordinates(Weighting w);

ConnectivityGraph weight_original(const ConnectivityGraph& g);

/// Binarizes the support and weights each present edge by 1 / l_ij.
ConnectivityGraph weight_distance(const ConnectivityGraph& g, const CoordinateTable& coords);

/// a_ij / l_ij.
ConnectivityGraph weight_combined(const ConnectivityGraph& g, const CoordinateTable& coords);

/// Dispatches on the scheme; coords may be null only for Weighting::original.
ConnectivityGraph apply_weighting(const ConnectivityGraph& g, Weighting w,
                                  const CoordinateTable* coords);

/// Divides by Σ_ij a_ij over all ordered pairs, so entries sum to 1.
ConnectivityGraph scale_by_total_weight(const ConnectivityGraph& g);

std::vector<double> degrees(const ConnectivityGraph& g);

/// D^{-1/2} (D - A) D^{-1/2}, with D^{-1/2} taken as 0 on isolated nodes, so
/// their rows and columns are entirely zero.
Matrix normalized_laplacian(const ConnectivityGraph& g);

/// Entrywise mean of the weight matrices.
ConnectivityGraph group_average(std::span<const ConnectivityGraph> graphs);

/// Relabels nodes: node i of the result is node perm[i] of g.
ConnectivityGraph permute_nodes(const ConnectivityGraph& g, std::span<const std::size_t> perm);

}  // namespace specemd
