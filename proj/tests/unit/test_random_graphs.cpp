#include <algorithm>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "oracles.hpp"
#include "specemd/errors.hpp"
#include "specemd/random_graphs.hpp"
#include "specemd/spectral.hpp"

using namespace specemd;

namespace {

double max_degree(const ConnectivityGraph& g) {
  const auto d = degrees(g);
  return *std::max_element(d.begin(), d.end());
}

bool is_simple_unit(const ConnectivityGraph& g) {
  for (double v : g.weights().data())
    if (v != 0.0 && v != 1.0) return false;
  return true;
}

}  // namespace

TEST_CASE("ER graphs have exactly m edges and are reproducible") {
  CHECK(generate_er(4, 6, 1) == oracle::complete_graph(4));
  const auto g = generate_er(100, 300, 42);
  CHECK(g.edge_count() == 300);
  CHECK(is_simple_unit(g));
  CHECK(generate_er(100, 300, 42) == g);
  CHECK_FALSE(generate_er(100, 300, 43) == g);
  CHECK_THROWS_AS(generate_er(4, 7, 1), InvalidArgument);
}

TEST_CASE("BA graphs") {
  // n = 5, m = 4: k = 1, a tree grown by attachment
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto tree = generate_ba(5, 4, seed);
    CHECK(tree.edge_count() == 4);
    CHECK(oracle::component_count(tree) == 1);
  }
  const auto g = generate_ba(100, 300, 3);
  CHECK(g.edge_count() == 300);
  CHECK(is_simple_unit(g));
  CHECK(generate_ba(100, 300, 3) == g);
  CHECK_THROWS_AS(generate_ba(1, 0, 1), InvalidArgument);
  CHECK_THROWS_AS(generate_ba(5, 11, 1), InvalidArgument);
  // m off a multiple of k is reached by adjustment
  CHECK(generate_ba(50, 77, 9).edge_count() == 77);
}

TEST_CASE("BA degree tails are heavier than matched ER") {
  int heavier = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed)
    heavier += max_degree(generate_ba(100, 300, seed)) > max_degree(generate_er(100, 300, seed + 1000));
  CHECK(heavier >= 90);
}

TEST_CASE("WS with no rewiring is a ring lattice") {
  const auto cycle = generate_ws(6, 6, 0.0, 1);
  CHECK(cycle == oracle::unit_graph(6, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {0, 5}}));
  const auto s = spectrum_of(cycle);
  std::vector<double> analytic;
  for (int j = 0; j < 6; ++j) analytic.push_back(1.0 - std::cos(2.0 * std::numbers::pi * j / 6.0));
  std::sort(analytic.begin(), analytic.end());
  for (std::size_t k = 0; k < 6; ++k) CHECK(std::abs(s[k] - analytic[k]) <= 1e-8);

  const auto lattice = generate_ws(20, 40, 0.0, 1);
  for (double d : degrees(lattice)) CHECK(d == 4.0);
}

TEST_CASE("WS rewiring keeps the edge count and simplicity") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto g = generate_ws(64, 128, 0.2, seed);
    CHECK(g.edge_count() == 128);
    CHECK(is_simple_unit(g));
  }
  CHECK(generate_ws(64, 130, 0.2, 1).edge_count() == 130);
  CHECK(generate_ws(64, 128, 0.2, 5) == generate_ws(64, 128, 0.2, 5));
  CHECK_THROWS_AS(generate_ws(10, 15, 0.2, 1), InvalidArgument);  // k = 3 is odd
  CHECK_THROWS_AS(generate_ws(10, 2, 0.2, 1), InvalidArgument);   // k = 0
  CHECK_THROWS_AS(generate_ws(10, 20, 1.5, 1), InvalidArgument);
}

TEST_CASE("WS spectra carry more mass near 1 than matched ER") {
  const std::vector<double> at_one{1.0};
  int wins = 0;
  for (std::uint64_t seed = 0; seed < 15; ++seed) {
    const auto ws = spectrum_of(generate_ws(128, 512, 0.2, seed));
    const auto er = spectrum_of(generate_er(128, 512, seed + 77));
    wins += density_curve(ws.values(), 0.02, at_one).density[0] >
            density_curve(er.values(), 0.02, at_one).density[0];
  }
  CHECK(wins > 7);
}

TEST_CASE("generate dispatches on the model") {
  GraphSpec spec{30, 60, GraphModel::watts_strogatz, 0.2, 4};
  CHECK(generate(spec) == generate_ws(30, 60, 0.2, 4));
  spec.model = GraphModel::barabasi_albert;
  CHECK(generate(spec) == generate_ba(30, 60, 4));
  spec.model = GraphModel::erdos_renyi;
  CHECK(generate(spec) == generate_er(30, 60, 4));
}
