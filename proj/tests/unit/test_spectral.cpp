#include <cmath>
#include <numbers>

#include "doctest.h"
#include "oracles.hpp"
#include "specemd/errors.hpp"
#include "specemd/spectral.hpp"

using namespace specemd;

namespace {

void check_values(std::span<const double> got, std::initializer_list<double> want, double tol) {
  REQUIRE(got.size() == want.size());
  std::size_t k = 0;
  for (double w : want) CHECK(std::abs(got[k++] - w) <= tol);
}

}  // namespace

TEST_CASE("eigenvalues of small fixed matrices") {
  check_values(eigenvalues_symmetric(Matrix::identity(3)), {1, 1, 1}, 1e-15);
  Matrix l(2, 2);
  l(0, 0) = l(1, 1) = 1.0;
  l(0, 1) = l(1, 0) = -1.0;
  check_values(eigenvalues_symmetric(l), {0, 2}, 1e-15);
  check_values(eigenvalues_symmetric(Matrix(4, 4)), {0, 0, 0, 0}, 0.0);
  CHECK(eigenvalues_symmetric(Matrix()).empty());
}

TEST_CASE("eigensolver rejects non-symmetric input") {
  Matrix m = Matrix::identity(3);
  m(0, 2) = 0.5;
  CHECK_THROWS_AS(eigenvalues_symmetric(m), InvalidArgument);
  CHECK_THROWS_AS(eigenvalues_symmetric(Matrix(2, 3)), InvalidArgument);
}

TEST_CASE("eigenvalues match characteristic-polynomial roots on random 8x8 matrices") {
  Rng rng(2024);
  for (int trial = 0; trial < 10; ++trial) {
    const auto m = oracle::random_symmetric(8, rng);
    const auto roots = oracle::characteristic_roots(m);
    const auto values = eigenvalues_symmetric(m);
    REQUIRE(roots.size() == 8);
    for (std::size_t k = 0; k < 8; ++k) CHECK(std::abs(values[k] - roots[k]) <= 1e-8);
  }
}

TEST_CASE("Jacobi eigenpairs reconstruct the matrix and preserve the trace") {
  Rng rng(99);
  for (std::size_t n : {1u, 2u, 17u, 64u, 150u, 300u}) {
    const auto m = oracle::random_symmetric(n, rng);
    const auto eig = jacobi_eigen(m, true);
    CHECK(std::is_sorted(eig.values.begin(), eig.values.end()));
    Matrix residual = multiply(m, eig.vectors);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n; ++k) residual(i, k) -= eig.vectors(i, k) * eig.values[k];
    CHECK(frobenius_norm(residual) <= 1e-8 * frobenius_norm(m));
    double sum = 0.0;
    for (double v : eig.values) sum += v;
    CHECK(std::abs(sum - trace(m)) <= 1e-8 * std::max(1.0, std::abs(trace(m))));
    CHECK(eig.sweeps <= 100);
  }
}

TEST_CASE("sweep cap surfaces as a convergence error") {
  Rng rng(3);
  const auto m = oracle::random_symmetric(12, rng);
  CHECK_THROWS_AS(jacobi_eigen(m, false, JacobiOptions{1e-12, 1}), ConvergenceError);
}

TEST_CASE("analytic normalized-Laplacian spectra") {
  check_values(spectrum_of(oracle::complete_graph(2)).values(), {0, 2}, 1e-12);
  check_values(spectrum_of(oracle::unit_graph(3, {{0, 1}, {1, 2}})).values(), {0, 1, 2}, 1e-12);
  const double four_thirds = 4.0 / 3.0;
  check_values(spectrum_of(oracle::complete_graph(4)).values(),
               {0, four_thirds, four_thirds, four_thirds}, 1e-12);
  check_values(spectrum_of(oracle::unit_graph(4, {{0, 1}, {2, 3}})).values(), {0, 0, 2, 2}, 1e-12);
}

TEST_CASE("spectrum validation clamps round-off and rejects real excursions") {
  const auto s = Spectrum::from_eigenvalues({2.0 + 5e-10, -5e-10, 1.0});
  CHECK(s[0] == 0.0);
  CHECK(s[1] == 1.0);
  CHECK(s[2] == 2.0);
  CHECK_THROWS_AS(Spectrum::from_eigenvalues({0.0, 2.1}), ConvergenceError);
  CHECK_THROWS_AS(Spectrum::from_eigenvalues({-1e-6, 1.0}), ConvergenceError);
  CHECK_THROWS_AS(Spectrum::from_eigenvalues({0.5, 1.0}), ConvergenceError);
  CHECK_THROWS_AS(Spectrum::from_eigenvalues({}), InvalidArgument);
}

TEST_CASE("zero multiplicity equals the number of connected components") {
  Rng rng(7);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 5 + rng.uniform_index(50);
    // sparse graphs so several components appear
    const auto g = oracle::random_weighted_graph(n, 1.5 / static_cast<double>(n), rng, 0.1);
    const auto s = spectrum_of(g);
    CHECK(s.zero_multiplicity() == oracle::component_count(g));
    CHECK(s.values().front() >= 0.0);
    CHECK(s.values().back() <= 2.0);
  }
}

TEST_CASE("doubling a vertex injects eigenvalue 1") {
  Rng rng(17);
  for (int trial = 0; trial < 10; ++trial) {
    const auto g = oracle::random_weighted_graph(12 + rng.uniform_index(20), 0.3, rng);
    std::size_t v = 0;
    while (degrees(g)[v] == 0.0) ++v;
    const auto s = spectrum_of(oracle::duplicate_vertex(g, v));
    double closest = 10.0;
    for (double x : s.values()) closest = std::min(closest, std::abs(x - 1.0));
    CHECK(closest <= 1e-8);
  }
}

TEST_CASE("density curve closed forms") {
  const double sigma = kDefaultDensitySigma;
  const double peak = 1.0 / (sigma * std::sqrt(2.0 * std::numbers::pi));
  const std::vector<double> one{1.0};
  const std::vector<double> grid{1.0, 1.0 + 5.0 * sigma};
  const auto c = density_curve(one, sigma, grid);
  CHECK(peak == doctest::Approx(19.9471).epsilon(1e-5));
  CHECK(c.density[0] == doctest::Approx(peak).epsilon(1e-14));
  CHECK(c.density[1] == doctest::Approx(peak * std::exp(-12.5)).epsilon(1e-12));

  const std::vector<double> five(5, 1.0);
  const auto c5 = density_curve(five, sigma, grid);
  CHECK(c5.density[0] == doctest::Approx(5.0 * c.density[0]).epsilon(1e-14));
  CHECK(c5.density[1] == doctest::Approx(5.0 * c.density[1]).epsilon(1e-14));

  CHECK_THROWS_AS(density_curve(one, 0.0, grid), InvalidArgument);
  CHECK_THROWS_AS(density_curve(one, -1.0, grid), InvalidArgument);
  const std::vector<double> descending{1.0, 0.0};
  CHECK_THROWS_AS(density_curve(one, sigma, descending), InvalidArgument);
}

TEST_CASE("density integrates to the number of eigenvalues") {
  Rng rng(8);
  const auto s = spectrum_of(oracle::random_weighted_graph(40, 0.2, rng));
  const double sigma = 0.02;
  const auto grid = uniform_grid(-5 * sigma, 2 + 5 * sigma, 0.002);
  const auto c = density_curve(s.values(), sigma, grid);
  double area = 0.0;
  for (std::size_t k = 1; k < grid.size(); ++k)
    area += 0.5 * (grid[k] - grid[k - 1]) * (c.density[k] + c.density[k - 1]);
  CHECK(std::abs(area - 40.0) <= 0.01 * 40.0);
  for (double f : c.density) CHECK(f >= 0.0);
}

TEST_CASE("default density grid") {
  const auto grid = default_density_grid();
  CHECK(grid.size() == 1101);
  CHECK(grid.front() == -0.1);
  CHECK(grid.back() == doctest::Approx(2.1).epsilon(1e-12));
}

TEST_CASE("batch spectra agree with one-at-a-time spectra for any worker count") {
  Rng rng(12);
  std::vector<ConnectivityGraph> graphs;
  for (int k = 0; k < 9; ++k) graphs.push_back(oracle::random_weighted_graph(20 + k, 0.3, rng));
  const auto serial = spectra_of(graphs, Execution::serial());
  const auto parallel = spectra_of(graphs, Execution::with_workers(4));
  REQUIRE(serial.size() == graphs.size());
  for (std::size_t k = 0; k < graphs.size(); ++k) {
    CHECK(serial[k] == spectrum_of(graphs[k]));
    CHECK(parallel[k] == serial[k]);
  }
}
