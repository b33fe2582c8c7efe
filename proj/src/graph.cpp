#include "specemd/graph.hpp"

#include <cmath>
#include <string>

#include "specemd/errors.hpp"

namespace specemd {

namespace {

void check_invariants(const Matrix& w) {
  if (!w.square()) throw InvalidArgument("adjacency matrix is not square");
  const std::size_t n = w.rows();
  for (std::size_t i = 0; i < n; ++i) {
    if (w(i, i) != 0.0)
      throw InvalidArgument("adjacency matrix has a nonzero diagonal at node " +
                            std::to_string(i));
    for (std::size_t j = 0; j < n; ++j) {
      const double v = w(i, j);
      if (!std::isfinite(v) || v < 0.0)
        throw InvalidArgument("adjacency entry (" + std::to_string(i) + ", " +
                              std::to_string(j) + ") is negative or not finite");
      if (v != w(j, i))
        throw InvalidArgument("adjacency matrix is not symmetric at (" + std::to_string(i) +
                              ", " + std::to_string(j) + ")");
    }
  }
}

void check_coordinates(const ConnectivityGraph& g, const CoordinateTable& coords) {
  if (coords.size() != g.size())
    throw InvalidArgument("coordinate table has " + std::to_string(coords.size()) +
                          " rows but the graph has " + std::to_string(g.size()) + " nodes");
}

// Applies value(a_ij, l_ij) to every present edge; absent edges stay absent.
template <typename F>
ConnectivityGraph reweight_by_length(const ConnectivityGraph& g, const CoordinateTable& coords,
                                     F value) {
  check_coordinates(g, coords);
  const std::size_t n = g.size();
  Matrix w(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double a = g.weight(i, j);
      if (a <= 0.0) continue;
      const double l = euclidean_distance(coords[i], coords[j]);
      if (!(l > 0.0))
        throw InvalidArgument("nodes " + std::to_string(i) + " and " + std::to_string(j) +
                              " share an edge but have coincident coordinates");
      w(i, j) = w(j, i) = value(a, l);
    }
  return ConnectivityGraph(std::move(w));
}

}  // namespace

double euclidean_distance(const Point3& a, const Point3& b) {
  const double dx = a.x - b.x, dy = a.y - b.y, dz = a.z - b.z;
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

ConnectivityGraph::ConnectivityGraph(Matrix weights) : weights_(std::move(weights)) {
  check_invariants(weights_);
}

ConnectivityGraph ConnectivityGraph::symmetrized(const Matrix& m) {
  if (!m.square()) throw InvalidArgument("adjacency matrix is not square");
  const std::size_t n = m.rows();
  Matrix w(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) w(i, j) = w(j, i) = 0.5 * (m(i, j) + m(j, i));
  return ConnectivityGraph(std::move(w));
}

std::size_t ConnectivityGraph::edge_count() const {
  std::size_t count = 0;
  for (std::size_t i = 0; i < size(); ++i)
    for (std::size_t j = i + 1; j < size(); ++j)
      if (weights_(i, j) > 0.0) ++count;
  return count;
}

double ConnectivityGraph::total_weight() const {
  double sum = 0.0;
  for (double v : weights_.data()) sum += v;
  return sum;
}

std::string_view to_string(Weighting w) {
  switch (w) {
    case Weighting::original: return "original";
    case Weighting::distance: return "distance";
    case Weighting::combined: return "combined";
  }
  return "unknown";
}

std::optional<Weighting> parse_weighting(std::string_view name) {
  if (name == "original") return Weighting::original;
  if (name == "distance") return Weighting::distance;
  if (name == "combined") return Weighting::combined;
  return std::nullopt;
}

bool needs_coordinates(Weighting w) { return w != Weighting::original; }

ConnectivityGraph weight_original(const ConnectivityGraph& g) { return g; }

ConnectivityGraph weight_distance(const ConnectivityGraph& g, const CoordinateTable& coords) {
  return reweight_by_length(g, coords, [](double, double l) { return 1.0 / l; });
}

ConnectivityGraph weight_combined(const ConnectivityGraph& g, const CoordinateTable& coords) {
  return reweight_by_length(g, coords, [](double a, double l) { return a / l; });
}

ConnectivityGraph apply_weighting(const ConnectivityGraph& g, Weighting w,
                                  const CoordinateTable* coords) {
  if (w == Weighting::original) return weight_original(g);
  if (coords == nullptr)
    throw InvalidArgument(std::string(to_string(w)) + " weighting requires node coordinates");
  return w == Weighting::distance ? weight_distance(g, *coords) : weight_combined(g, *coords);
}

ConnectivityGraph scale_by_total_weight(const ConnectivityGraph& g) {
  const double total = g.total_weight();
  if (!(total > 0.0)) throw InvalidArgument("cannot scale a graph with zero total weight");
  Matrix w = g.weights();
  for (double& v : w.data()) v /= total;
  return ConnectivityGraph(std::move(w));
}

std::vector<double> degrees(const ConnectivityGraph& g) {
  std::vector<double> d(g.size(), 0.0);
  for (std::size_t i = 0; i < g.size(); ++i)
    for (double v : g.weights().row(i)) d[i] += v;
  return d;
}

Matrix normalized_laplacian(const ConnectivityGraph& g) {
  const std::size_t n = g.size();
  const auto d = degrees(g);
  std::vector<double> inv_sqrt(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    if (d[i] > 0.0) inv_sqrt[i] = 1.0 / std::sqrt(d[i]);

  Matrix L(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    if (d[i] > 0.0) L(i, i) = 1.0;
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = -g.weight(i, j) * inv_sqrt[i] * inv_sqrt[j];
      L(i, j) = L(j, i) = v;
    }
  }
  return L;
}

ConnectivityGraph group_average(std::span<const ConnectivityGraph> graphs) {
  if (graphs.empty()) throw InvalidArgument("group_average: no graphs given");
  const std::size_t n = graphs.front().size();
  Matrix sum(n, n);
  for (const auto& g : graphs) {
    if (g.size() != n)
      throw InvalidArgument("group_average: graphs have different node counts (" +
                            std::to_string(n) + " vs " + std::to_string(g.size()) + ")");
    const auto src = g.weights().data();
    auto dst = sum.data();
    for (std::size_t k = 0; k < dst.size(); ++k) dst[k] += src[k];
  }
  const double count = static_cast<double>(graphs.size());
  for (double& v : sum.data()) v /= count;
  return ConnectivityGraph(std::move(sum));
}

ConnectivityGraph permute_nodes(const ConnectivityGraph& g, std::span<const std::size_t> perm) {
  if (perm.size() != g.size()) throw InvalidArgument("permutation length differs from node count");
  return ConnectivityGraph(submatrix(g.weights(), perm, perm));
}

}  // namespace specemd
