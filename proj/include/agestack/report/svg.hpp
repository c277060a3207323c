#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace agestack::report {

struct LineSeries {
  std::string name;
  std::vector<std::pair<double, double>> points;  // (x, y), ascending x
  bool dashed = false;
};

struct ChartLabels {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::string comment;  // emitted as an XML comment when non-empty
};

// Deterministic SVG text: fixed two-decimal coordinates, fixed palette.
std::string line_chart_svg(const ChartLabels& labels, const std::vector<LineSeries>& series);

struct BarGroup {
  std::string category;
  std::vector<double> values;  // one per series
};

std::string bar_chart_svg(const ChartLabels& labels, const std::vector<std::string>& series_names,
                          const std::vector<BarGroup>& groups, double y_max);

// Escapes &, <, >, ", ' for XML text and attributes.
std::string xml_escape(std::string_view text);

}  // namespace agestack::report
