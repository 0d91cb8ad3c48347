#pragma once

#include <string>
#include <vector>

namespace vpfp {

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  bool markers = false;  // points instead of a polyline
};

struct Plot {
  std::string title;
  std::string xlabel;
  std::string ylabel;
  bool log_x = false;
  bool log_y = false;
  std::vector<PlotSeries> series;
};

/// Minimal SVG: frame, ticks at round values, one polyline (or marker set)
/// per series and a legend. Nonpositive values are dropped on log axes.
std::string render_svg(const Plot& plot, int width = 640, int height = 420);
void write_svg(const std::string& path, const Plot& plot);

}  // namespace vpfp
