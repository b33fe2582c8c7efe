#pragma once

#include <string>
#include <vector>

namespace specemd::cli {

struct Series {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

/// Standalone SVG line chart: one polyline per series, a frame with min/max
/// tick labels, and a legend.
std::string render_line_chart(const std::vector<Series>& series, const std::string& title,
                              const std::string& x_label, const std::string& y_label);

}  // namespace specemd::cli
