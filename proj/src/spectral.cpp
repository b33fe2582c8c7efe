#include "specemd/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>
#include <vector>

#include "specemd/errors.hpp"

namespace specemd {

namespace {

// Square working matrix whose row stride avoids powers of two; the rotation
// walks two columns at once and power-of-two strides alias in the cache.
class Workspace {
 public:
  explicit Workspace(std::size_t n) : n_(n), ld_(n % 8 == 0 ? n + 1 : n), data_(n * ld_, 0.0) {}

  std::size_t rows() const noexcept { return n_; }
  std::size_t cols() const noexcept { return n_; }
  double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * ld_ + j]; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * ld_ + j]; }

 private:
  std::size_t n_;
  std::size_t ld_;
  std::vector<double> data_;
};

double off_diagonal_norm(const Workspace& a) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = i + 1; j < a.cols(); ++j) sum += 2.0 * a(i, j) * a(i, j);
  return std::sqrt(sum);
}

// Annihilates a(p, q) with a Jacobi rotation, updating both triangles.
void rotate(Workspace& a, Workspace* v, std::size_t p, std::size_t q) {
  const double apq = a(p, q);
  if (apq == 0.0) return;
  // Below the resolution of both diagonal entries: drop instead of rotating,
  // which also keeps late sweeps out of subnormal arithmetic.
  const double g = 100.0 * std::abs(apq);
  if (std::abs(a(p, p)) + g == std::abs(a(p, p)) && std::abs(a(q, q)) + g == std::abs(a(q, q))) {
    a(p, q) = a(q, p) = 0.0;
    return;
  }
  const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
  double t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
  if (theta < 0.0) t = -t;
  const double c = 1.0 / std::sqrt(t * t + 1.0);
  const double s = t * c;
  const double tau = s / (1.0 + c);

  a(p, p) -= t * apq;
  a(q, q) += t * apq;
  a(p, q) = a(q, p) = 0.0;

  const std::size_t n = a.rows();
  for (std::size_t k = 0; k < n; ++k) {
    if (k == p || k == q) continue;
    const double akp = a(k, p);
    const double akq = a(k, q);
    const double new_kp = akp - s * (akq + tau * akp);
    const double new_kq = akq + s * (akp - tau * akq);
    a(k, p) = a(p, k) = new_kp;
    a(k, q) = a(q, k) = new_kq;
  }
  if (v != nullptr) {
    for (std::size_t k = 0; k < n; ++k) {
      const double vkp = (*v)(k, p);
      const double vkq = (*v)(k, q);
      (*v)(k, p) = vkp - s * (vkq + tau * vkp);
      (*v)(k, q) = vkq + s * (vkp - tau * vkq);
    }
  }
}

}  // namespace

EigenDecomposition jacobi_eigen(const Matrix& m, bool want_vectors, const JacobiOptions& options) {
  if (!m.square()) throw InvalidArgument("eigensolver: matrix is not square");
  const std::size_t n = m.rows();
  const double norm = frobenius_norm(m);
  if (!std::isfinite(norm)) throw InvalidArgument("eigensolver: matrix has non-finite entries");
  if (max_asymmetry(m) > 1e-10 * norm)
    throw InvalidArgument("eigensolver: matrix is not symmetric");

  Workspace a(n);
  // Work on the exactly symmetric part so both triangles stay in lockstep.
  for (std::size_t i = 0; i < n; ++i) {
    a(i, i) = m(i, i);
    for (std::size_t j = i + 1; j < n; ++j) a(i, j) = a(j, i) = 0.5 * (m(i, j) + m(j, i));
  }

  EigenDecomposition out;
  Workspace vectors(want_vectors ? n : 0);
  for (std::size_t i = 0; i < vectors.rows(); ++i) vectors(i, i) = 1.0;
  Workspace* v = want_vectors ? &vectors : nullptr;

  const double threshold = options.tolerance * norm;
  int sweep = 0;
  while (off_diagonal_norm(a) > threshold) {
    if (sweep == options.max_sweeps)
      throw ConvergenceError("Jacobi eigensolver did not converge in " +
                             std::to_string(options.max_sweeps) + " sweeps (n = " +
                             std::to_string(n) + ")");
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) rotate(a, v, p, q);
    ++sweep;
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a(i, i) < a(j, j); });
  out.values.resize(n);
  for (std::size_t k = 0; k < n; ++k) out.values[k] = a(order[k], order[k]);
  if (want_vectors) {
    out.vectors = Matrix(n, n);
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = vectors(i, order[k]);
  }
  out.sweeps = sweep;
  return out;
}

std::vector<double> eigenvalues_symmetric(const Matrix& m) {
  return jacobi_eigen(m, false).values;
}

Spectrum Spectrum::from_eigenvalues(std::vector<double> values) {
  if (values.empty()) throw InvalidArgument("spectrum of an empty graph");
  std::sort(values.begin(), values.end());
  for (double& v : values) {
    if (v < -kTolerance || v > 2.0 + kTolerance)
      throw ConvergenceError("normalized Laplacian eigenvalue " + std::to_string(v) +
                             " lies outside [0, 2]");
    v = std::clamp(v, 0.0, 2.0);
  }
  if (values.front() > kTolerance)
    throw ConvergenceError("normalized Laplacian spectrum lacks a zero eigenvalue (smallest " +
                           std::to_string(values.front()) + ")");
  Spectrum s;
  s.values_ = std::move(values);
  return s;
}

std::size_t Spectrum::zero_multiplicity() const {
  return static_cast<std::size_t>(
      std::count_if(values_.begin(), values_.end(), [](double v) { return v <= kTolerance; }));
}

Spectrum spectrum_of(const ConnectivityGraph& g) {
  return Spectrum::from_eigenvalues(eigenvalues_symmetric(normalized_laplacian(g)));
}

std::vector<Spectrum> spectra_of(std::span<const ConnectivityGraph> graphs, Execution exec) {
  std::vector<Spectrum> out(graphs.size());
  parallel_for(exec, graphs.size(), [&](std::size_t i) { out[i] = spectrum_of(graphs[i]); });
  return out;
}

std::vector<double> uniform_grid(double lo, double hi, double step) {
  if (!(step > 0.0) || !(hi >= lo)) throw InvalidArgument("uniform_grid: need step > 0, hi >= lo");
  const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 0.5)) + 1;
  std::vector<double> grid(count);
  for (std::size_t i = 0; i < count; ++i) grid[i] = lo + static_cast<double>(i) * step;
  return grid;
}

std::vector<double> default_density_grid() { return uniform_grid(-0.1, 2.1, 0.002); }

DensityCurve density_curve(std::span<const double> eigenvalues, double sigma,
                           std::span<const double> grid) {
  if (!(sigma > 0.0)) throw InvalidArgument("density bandwidth sigma must be positive");
  if (!std::is_sorted(grid.begin(), grid.end()))
    throw InvalidArgument("density grid must be ascending");
  const double norm = 1.0 / std::sqrt(2.0 * std::numbers::pi * sigma * sigma);
  const double inv_two_var = 1.0 / (2.0 * sigma * sigma);
  DensityCurve curve;
  curve.grid.assign(grid.begin(), grid.end());
  curve.density.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    double f = 0.0;
    for (double s : eigenvalues) {
      const double d = grid[i] - s;
      f += norm * std::exp(-d * d * inv_two_var);
    }
    curve.density[i] = f;
  }
  return curve;
}

}  // namespace specemd
