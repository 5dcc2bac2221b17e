#pragma once

#include <string>
#include <vector>

namespace gapprobe {

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

struct PlotSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<PlotSeries> series;
};

// Log-log line plot with decade ticks and a legend. Non-positive points are
// skipped. Output depends only on the input.
std::string render_loglog_svg(const PlotSpec& plot);

}  // namespace gapprobe
