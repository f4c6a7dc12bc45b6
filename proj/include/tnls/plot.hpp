#pragma once

#include <string>
#include <vector>

namespace tnls {

struct PlotSeries {
  std::string label;
  std::vector<double> x, y;
};

struct PlotSpec {
  std::string title;
  std::string x_label, y_label;
  bool log_x = false, log_y = false;
  std::vector<PlotSeries> series;
};

// Standalone SVG line chart with axes, ticks and a legend.
std::string render_svg(const PlotSpec& plot);

// Shortest decimal text that reads back to the same double.
std::string format_double(double x);

}  // namespace tnls
