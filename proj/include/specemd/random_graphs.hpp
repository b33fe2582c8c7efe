#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>

#include "specemd/graph.hpp"

namespace specemd {

enum class GraphModel { erdos_renyi, barabasi_albert, watts_strogatz };

std::string_view to_string(GraphModel m);

struct GraphSpec {
  std::size_t nodes = 0;
  std::size_t edges = 0;
  GraphModel model = GraphModel::erdos_renyi;
  double ws_rewire = 0.2;
  std::uint64_t seed = 0;
};

/// Exactly m distinct edges drawn uniformly without replacement; unit weights.
ConnectivityGraph generate_er(std::size_t n, std::size_t m, std::uint64_t seed);

/// Preferential attachment with k = max(1, round(m/n)) edges per arriving
/// node, grown from a star on k+1 nodes, then trimmed or topped up with
/// uniform random edges to exactly m.
ConnectivityGraph generate_ba(std::size_t n, std::size_t m, std::uint64_t seed);

/// Ring lattice of even degree k = round(2m/n), each lattice edge rewired with
/// probability rewire_p, then adjusted to exactly m edges.
ConnectivityGraph generate_ws(std::size_t n, std::size_t m, double rewire_p, std::uint64_t seed);

ConnectivityGraph generate(const GraphSpec& spec);

}  // namespace specemd
