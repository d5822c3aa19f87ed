#pragma once

// Minimal self-contained SVG line plots.

#include <filesystem>
#include <string>
#include <vector>

namespace wkam::cli {

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  bool markers = false;  // dots instead of a polyline
};

void write_svg_plot(const std::filesystem::path& path, const std::string& title, const std::vector<PlotSeries>& series);

}  // namespace wkam::cli
