#pragma once

#include <span>

#include "specemd/matrix.hpp"
#include "specemd/parallel.hpp"
#include "specemd/spectral.hpp"

namespace specemd {

/// Optimal flows between two uniform-mass point sets.
struct TransportPlan {
  Matrix flows;  // n x m, rows sum to 1/n, columns to 1/m
  double cost = 0.0;
};

struct EmdSolution {
  double distance = 0.0;
  TransportPlan plan;
};

/// Earth mover's distance between two equal-size uniform samples on the line:
/// the mean absolute difference of the sorted values. Inputs need not be
/// sorted. Throws InvalidArgument on a size mismatch or empty input.
double emd_sorted(std::span<const double> s, std::span<const double> t);

/// Earth mover's distance by solving the transportation LP with a
/// transportation simplex (Bland's rule). Sizes may differ.
EmdSolution emd_lp(std::span<const double> s, std::span<const double> t);

/// emd_sorted when sizes match, emd_lp otherwise.
double emd(std::span<const double> s, std::span<const double> t);

/// Symmetric matrix of emd_sorted over all pairs; upper triangle is computed
/// in parallel and mirrored.
Matrix pairwise_distances(std::span<const Spectrum> spectra, Execution exec = {});

namespace reference {

/// Serial double loop, kept as the baseline for the parallel version.
Matrix pairwise_distances(std::span<const Spectrum> spectra);

}  // namespace reference

}  // namespace specemd
