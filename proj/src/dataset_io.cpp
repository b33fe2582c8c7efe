#include "specemd/dataset_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <string_view>

#include "specemd/errors.hpp"

namespace specemd {

namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << text;
  if (!out.flush()) throw Error("failed writing " + path.string());
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    lines.push_back(text.substr(start, end - start));
    start = end + 1;
  }
  while (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();
  return lines;
}

// Comma-separated when the line has a comma, whitespace-separated otherwise.
std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  line = trim(line);
  if (line.empty()) return fields;
  if (line.find(',') != std::string_view::npos) {
    std::size_t start = 0;
    while (true) {
      const auto end = line.find(',', start);
      fields.push_back(trim(line.substr(start, end == std::string_view::npos ? end : end - start)));
      if (end == std::string_view::npos) break;
      start = end + 1;
    }
  } else {
    std::size_t pos = 0;
    while (pos < line.size()) {
      const auto begin = line.find_first_not_of(" \t\r", pos);
      if (begin == std::string_view::npos) break;
      auto end = line.find_first_of(" \t\r", begin);
      if (end == std::string_view::npos) end = line.size();
      fields.push_back(line.substr(begin, end - begin));
      pos = end;
    }
  }
  return fields;
}

std::string location(const std::string& source, std::size_t row, std::size_t col) {
  return source + ": row " + std::to_string(row + 1) + ", column " + std::to_string(col + 1);
}

double parse_number(std::string_view token, const std::string& where) {
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (token.empty() || ec != std::errc() || ptr != token.data() + token.size())
    throw InputError(where + ": '" + std::string(token) + "' is not a number");
  if (!std::isfinite(value)) throw InputError(where + ": value is not finite");
  return value;
}

std::string format_rows(const Matrix& m) {
  std::string out;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j > 0) out += ',';
      out += format_double(m(i, j));
    }
    out += '\n';
  }
  return out;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  if (ec != std::errc()) throw Error("cannot format number");
  return std::string(buf, ptr);
}

std::vector<int> DatasetManifest::svm_labels() const {
  std::vector<int> y;
  y.reserve(entries.size());
  for (const auto& e : entries) y.push_back(e.label == 1 ? 1 : -1);
  return y;
}

Matrix parse_matrix_text(const std::string& text, const std::string& source) {
  const auto lines = split_lines(text);
  if (lines.empty()) throw InputError(source + ": empty matrix file");
  const std::size_t n = lines.size();
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto fields = split_fields(lines[i]);
    if (fields.size() != n)
      throw InputError(source + ": row " + std::to_string(i + 1) + " has " +
                       std::to_string(fields.size()) + " fields, expected " + std::to_string(n) +
                       " for a square matrix");
    for (std::size_t j = 0; j < n; ++j) m(i, j) = parse_number(fields[j], location(source, i, j));
  }
  return m;
}

ConnectivityGraph load_matrix(const fs::path& path, Warnings* warnings) {
  const std::string source = path.string();
  const Matrix raw = parse_matrix_text(read_file(path), source);
  double largest = 0.0;
  for (std::size_t i = 0; i < raw.rows(); ++i)
    for (std::size_t j = 0; j < raw.cols(); ++j) {
      if (raw(i, j) < 0.0)
        throw InputError(location(source, i, j) + ": negative weight " + format_double(raw(i, j)));
      largest = std::max(largest, raw(i, j));
    }
  const double asym = max_asymmetry(raw);
  if (warnings != nullptr && asym > 1e-6 * largest)
    warnings->push_back(source + ": matrix is asymmetric (max |a_ij - a_ji| = " +
                        format_double(asym) + "); symmetrized by averaging");
  return ConnectivityGraph::symmetrized(raw);
}

void save_matrix(const Matrix& m, const fs::path& path) { write_file(path, format_rows(m)); }

CoordinateTable load_coordinates(const fs::path& path) {
  const std::string source = path.string();
  const auto text = read_file(path);
  const auto lines = split_lines(text);
  if (lines.empty()) throw InputError(source + ": empty coordinate file");
  CoordinateTable table;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto fields = split_fields(lines[i]);
    if (fields.size() != 3)
      throw InputError(source + ": row " + std::to_string(i + 1) + " has " +
                       std::to_string(fields.size()) + " fields, expected x,y,z");
    table.push_back(Point3{parse_number(fields[0], location(source, i, 0)),
                           parse_number(fields[1], location(source, i, 1)),
                           parse_number(fields[2], location(source, i, 2))});
  }
  return table;
}

DatasetManifest load_manifest(const fs::path& path) {
  const std::string source = path.string();
  const auto text = read_file(path);
  const auto lines = split_lines(text);
  if (lines.empty() || trim(lines.front()) != "path,label,subject_id")
    throw InputError(source + ": expected header 'path,label,subject_id'");

  DatasetManifest manifest;
  std::set<std::string> seen;
  const fs::path base = path.parent_path();
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (trim(lines[i]).empty()) continue;
    std::vector<std::string_view> fields;
    std::string_view rest = lines[i];
    for (std::size_t comma; (comma = rest.find(',')) != std::string_view::npos;) {
      fields.push_back(trim(rest.substr(0, comma)));
      rest.remove_prefix(comma + 1);
    }
    fields.push_back(trim(rest));
    const std::string where = source + ": line " + std::to_string(i + 1);
    if (fields.size() != 3) throw InputError(where + ": expected 3 fields");
    if (fields[0].empty() || fields[2].empty()) throw InputError(where + ": empty path or subject_id");
    if (fields[1] != "0" && fields[1] != "1")
      throw InputError(where + ": label '" + std::string(fields[1]) + "' is not 0 or 1");

    ManifestEntry entry;
    entry.matrix_path = fs::path(std::string(fields[0]));
    if (entry.matrix_path.is_relative()) entry.matrix_path = base / entry.matrix_path;
    entry.label = fields[1] == "1" ? 1 : 0;
    entry.subject_id = std::string(fields[2]);
    if (!seen.insert(entry.subject_id).second)
      throw InputError(where + ": duplicate subject_id '" + entry.subject_id + "'");
    manifest.entries.push_back(std::move(entry));
  }
  return manifest;
}

std::vector<ConnectivityGraph> load_graphs(const DatasetManifest& manifest, Warnings* warnings) {
  std::vector<ConnectivityGraph> graphs;
  graphs.reserve(manifest.size());
  for (const auto& e : manifest.entries) {
    if (!fs::exists(e.matrix_path))
      throw InputError("subject " + e.subject_id + ": matrix file " + e.matrix_path.string() +
                       " does not exist");
    try {
      graphs.push_back(load_matrix(e.matrix_path, warnings));
    } catch (const Error& err) {
      throw InputError("subject " + e.subject_id + ": " + err.what());
    }
  }
  return graphs;
}

void save_gram(const Matrix& gram, const fs::path& path) {
  if (!gram.square()) throw InvalidArgument("Gram matrix is not square");
  if (max_asymmetry(gram) != 0.0) throw InvalidArgument("Gram matrix is not symmetric");
  write_file(path, std::to_string(gram.rows()) + "\n" + format_rows(gram));
}

void save_gram(const GramMatrix& gram, const fs::path& path) { save_gram(gram.values, path); }

GramMatrix load_gram(const fs::path& path) {
  const std::string source = path.string();
  const auto text = read_file(path);
  const auto newline = text.find('\n');
  const std::string first(trim(std::string_view(text).substr(0, newline)));
  std::size_t n = 0;
  const auto [ptr, ec] = std::from_chars(first.data(), first.data() + first.size(), n);
  if (first.empty() || ec != std::errc() || ptr != first.data() + first.size())
    throw InputError(source + ": first line must be the matrix size");
  const std::string body = newline == std::string::npos ? std::string() : text.substr(newline + 1);
  GramMatrix gram;
  gram.values = n == 0 ? Matrix() : parse_matrix_text(body, source);
  if (gram.values.rows() != n)
    throw InputError(source + ": header says " + std::to_string(n) + " rows, found " +
                     std::to_string(gram.values.rows()));
  if (max_asymmetry(gram.values) != 0.0) throw InputError(source + ": Gram matrix is not symmetric");
  gram.min_eigenvalue = min_eigenvalue(gram.values);
  return gram;
}

}  // namespace specemd
