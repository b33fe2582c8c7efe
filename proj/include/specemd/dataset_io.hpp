#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "specemd/graph.hpp"
#include "specemd/kernels.hpp"
#include "specemd/matrix.hpp"

namespace specemd {

/// Non-fatal diagnostics collected while loading.
using Warnings = std::vector<std::string>;

struct ManifestEntry {
  std::filesystem::path matrix_path;  // resolved against the manifest directory
  int label = 0;                      // 0 or 1
  std::string subject_id;
};

struct DatasetManifest {
  std::vector<ManifestEntry> entries;

  std::size_t size() const noexcept { return entries.size(); }
  /// Manifest labels mapped to SVM labels: 1 -> +1, 0 -> -1.
  std::vector<int> svm_labels() const;
};

/// Parses a square matrix of comma- or whitespace-delimited numbers.
/// Errors name the file and the offending row/column (1-based).
Matrix parse_matrix_text(const std::string& text, const std::string& source = "<text>");

/// Loads a connectivity matrix, symmetrizing by averaging with the transpose
/// and zeroing the diagonal. Asymmetry beyond 1e-6 relative is reported to
/// warnings when given.
ConnectivityGraph load_matrix(const std::filesystem::path& path, Warnings* warnings = nullptr);

/// Writes n lines of n fields, 17 significant digits.
void save_matrix(const Matrix& m, const std::filesystem::path& path);

/// CSV "x,y,z" per node, no header.
CoordinateTable load_coordinates(const std::filesystem::path& path);

/// CSV with header path,label,subject_id. Relative matrix paths are resolved
/// against the manifest's directory. Does not touch the matrix files.
DatasetManifest load_manifest(const std::filesystem::path& path);

/// Loads every matrix of the manifest; a missing or malformed file raises an
/// InputError naming the subject.
std::vector<ConnectivityGraph> load_graphs(const DatasetManifest& manifest,
                                           Warnings* warnings = nullptr);

/// First line n, then n lines of n fields. Throws InvalidArgument if the
/// matrix is not symmetric.
void save_gram(const Matrix& gram, const std::filesystem::path& path);
void save_gram(const GramMatrix& gram, const std::filesystem::path& path);

/// Reads the Gram format; min_eigenvalue is recomputed.
GramMatrix load_gram(const std::filesystem::path& path);

/// Decimal text with 17 significant digits; parses back to the same double.
std::string format_double(double v);

}  // namespace specemd
