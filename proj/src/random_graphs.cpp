#include "specemd/random_graphs.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "specemd/errors.hpp"
#include "specemd/rng.hpp"

namespace specemd {

namespace {

std::size_t max_edges(std::size_t n) { return n * (n - (n > 0 ? 1 : 0)) / 2; }

void check_edge_budget(std::size_t n, std::size_t m) {
  if (m > max_edges(n))
    throw InvalidArgument("cannot place " + std::to_string(m) + " edges on " + std::to_string(n) +
                          " nodes (at most " + std::to_string(max_edges(n)) + ")");
}

// Simple undirected graph as a boolean adjacency matrix plus an edge count.
class EdgeSet {
 public:
  explicit EdgeSet(std::size_t n) : n_(n), adj_(n * n, false) {}

  bool has(std::size_t i, std::size_t j) const { return adj_[i * n_ + j]; }
  std::size_t count() const { return count_; }
  std::size_t nodes() const { return n_; }
  std::size_t degree(std::size_t i) const {
    return static_cast<std::size_t>(std::count(adj_.begin() + i * n_, adj_.begin() + (i + 1) * n_, true));
  }

  void add(std::size_t i, std::size_t j) {
    if (i == j || has(i, j)) return;
    adj_[i * n_ + j] = adj_[j * n_ + i] = true;
    ++count_;
  }
  void remove(std::size_t i, std::size_t j) {
    if (!has(i, j)) return;
    adj_[i * n_ + j] = adj_[j * n_ + i] = false;
    --count_;
  }

  std::vector<std::pair<std::size_t, std::size_t>> edges() const {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = i + 1; j < n_; ++j)
        if (has(i, j)) out.emplace_back(i, j);
    return out;
  }
  std::vector<std::pair<std::size_t, std::size_t>> non_edges() const {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = i + 1; j < n_; ++j)
        if (!has(i, j)) out.emplace_back(i, j);
    return out;
  }

  ConnectivityGraph to_graph() const {
    Matrix w(n_, n_);
    for (std::size_t k = 0; k < adj_.size(); ++k) w.data()[k] = adj_[k] ? 1.0 : 0.0;
    return ConnectivityGraph(std::move(w));
  }

 private:
  std::size_t n_;
  std::vector<bool> adj_;
  std::size_t count_ = 0;
};

// Removes or adds uniformly chosen edges until exactly m remain.
void adjust_edge_count(EdgeSet& g, std::size_t m, Rng& rng) {
  if (g.count() > m) {
    auto edges = g.edges();
    rng.shuffle(std::span(edges));
    for (std::size_t k = 0; g.count() > m; ++k) g.remove(edges[k].first, edges[k].second);
  } else if (g.count() < m) {
    auto candidates = g.non_edges();
    rng.shuffle(std::span(candidates));
    for (std::size_t k = 0; g.count() < m; ++k) g.add(candidates[k].first, candidates[k].second);
  }
}

}  // namespace

std::string_view to_string(GraphModel m) {
  switch (m) {
    case GraphModel::erdos_renyi: return "er";
    case GraphModel::barabasi_albert: return "ba";
    case GraphModel::watts_strogatz: return "ws";
  }
  return "unknown";
}

ConnectivityGraph generate_er(std::size_t n, std::size_t m, std::uint64_t seed) {
  check_edge_budget(n, m);
  Rng rng(seed);
  EdgeSet g(n);
  auto pairs = g.non_edges();
  // Partial Fisher-Yates: the first m slots are a uniform m-subset.
  for (std::size_t k = 0; k < m; ++k) {
    const auto pick = k + static_cast<std::size_t>(rng.uniform_index(pairs.size() - k));
    std::swap(pairs[k], pairs[pick]);
    g.add(pairs[k].first, pairs[k].second);
  }
  return g.to_graph();
}

ConnectivityGraph generate_ba(std::size_t n, std::size_t m, std::uint64_t seed) {
  if (n < 2) throw InvalidArgument("Barabasi-Albert model needs at least 2 nodes");
  check_edge_budget(n, m);
  const auto rounded = static_cast<std::size_t>(std::llround(static_cast<double>(m) / static_cast<double>(n)));
  const std::size_t k = std::max<std::size_t>(1, rounded);

  Rng rng(seed);
  EdgeSet g(n);
  // Every edge endpoint appears once, so uniform draws are degree-proportional.
  std::vector<std::size_t> endpoints;
  for (std::size_t v = 1; v <= k; ++v) {
    g.add(0, v);
    endpoints.push_back(0);
    endpoints.push_back(v);
  }
  for (std::size_t v = k + 1; v < n; ++v) {
    std::set<std::size_t> targets;
    while (targets.size() < k)
      targets.insert(endpoints[static_cast<std::size_t>(rng.uniform_index(endpoints.size()))]);
    for (std::size_t t : targets) {
      g.add(v, t);
      endpoints.push_back(v);
      endpoints.push_back(t);
    }
  }
  adjust_edge_count(g, m, rng);
  return g.to_graph();
}

ConnectivityGraph generate_ws(std::size_t n, std::size_t m, double rewire_p, std::uint64_t seed) {
  if (!(rewire_p >= 0.0 && rewire_p <= 1.0))
    throw InvalidArgument("rewiring probability must lie in [0, 1]");
  check_edge_budget(n, m);
  const auto k = static_cast<std::size_t>(
      std::llround(2.0 * static_cast<double>(m) / static_cast<double>(std::max<std::size_t>(n, 1))));
  if (k < 2 || k % 2 != 0 || k >= n)
    throw InvalidArgument("Watts-Strogatz lattice degree round(2m/n) = " + std::to_string(k) +
                          " must be even, at least 2 and below n = " + std::to_string(n));

  Rng rng(seed);
  EdgeSet g(n);
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t j = 1; j <= k / 2; ++j) g.add(u, (u + j) % n);

  // Rewire the far endpoint of each lattice edge, one neighbour ring at a time.
  for (std::size_t j = 1; j <= k / 2; ++j) {
    for (std::size_t u = 0; u < n; ++u) {
      const std::size_t v = (u + j) % n;
      if (!rng.bernoulli(rewire_p)) continue;
      if (!g.has(u, v) || g.degree(u) + 1 >= n) continue;
      std::size_t w;
      do {
        w = static_cast<std::size_t>(rng.uniform_index(n));
      } while (w == u || g.has(u, w));
      g.remove(u, v);
      g.add(u, w);
    }
  }
  adjust_edge_count(g, m, rng);
  return g.to_graph();
}

ConnectivityGraph generate(const GraphSpec& spec) {
  switch (spec.model) {
    case GraphModel::erdos_renyi: return generate_er(spec.nodes, spec.edges, spec.seed);
    case GraphModel::barabasi_albert: return generate_ba(spec.nodes, spec.edges, spec.seed);
    case GraphModel::watts_strogatz:
      return generate_ws(spec.nodes, spec.edges, spec.ws_rewire, spec.seed);
  }
  throw InvalidArgument("unknown graph model");
}

}  // namespace specemd
