#pragma once

#include <string>
#include <vector>

namespace pattn::svg {

struct Series {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

struct PointGroup {
  std::string name;
  std::vector<std::pair<double, double>> points;
  enum class Marker { dot, cross } marker = Marker::dot;
};

/// Writes a line chart with axes, tick labels and a legend.  Output is fully
/// deterministic: fixed canvas, fixed palette, fixed number formatting.
void write_line_chart(const std::string& path, const std::string& title,
                      const std::string& x_label, const std::string& y_label,
                      const std::vector<Series>& series);

/// Writes a 2-D scatter plot with equal-aspect axes and a legend.
void write_scatter(const std::string& path, const std::string& title,
                   const std::vector<PointGroup>& groups);

}  // namespace pattn::svg
