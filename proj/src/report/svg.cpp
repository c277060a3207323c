#include "agestack/report/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace agestack::report {

namespace {

constexpr double kWidth = 760.0;
constexpr double kHeight = 460.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 170.0;
constexpr double kTop = 50.0;
constexpr double kBottom = 60.0;

constexpr const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  std::string s(buf);
  return s == "-0.00" ? "0.00" : s;
}

const char* colour(std::size_t i) { return kPalette[i % std::size(kPalette)]; }

// Round the axis maximum up to a multiple of `step`.
double nice_max(double v, double step) { return std::max(step, std::ceil(v / step) * step); }

void header(std::ostringstream& out, const ChartLabels& labels) {
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  if (!labels.comment.empty()) {
    std::string c = labels.comment;
    for (std::size_t p; (p = c.find("--")) != std::string::npos;) c.replace(p, 2, "- -");
    out << "<!-- " << c << " -->\n";
  }
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(kWidth) << "\" height=\""
      << num(kHeight) << "\" viewBox=\"0 0 " << num(kWidth) << ' ' << num(kHeight) << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << num(kWidth / 2) << "\" y=\"28.00\" text-anchor=\"middle\" "
      << "font-family=\"sans-serif\" font-size=\"16\">" << xml_escape(labels.title) << "</text>\n";
}

void axes(std::ostringstream& out, const ChartLabels& labels, double y_max, double y_step) {
  const double x0 = kLeft;
  const double y0 = kHeight - kBottom;
  const double x1 = kWidth - kRight;
  const double plot_h = y0 - kTop;
  out << "<g font-family=\"sans-serif\" font-size=\"11\" fill=\"#333\">\n";
  for (double v = 0.0; v <= y_max + 1e-9; v += y_step) {
    const double y = y0 - v / y_max * plot_h;
    out << "<line x1=\"" << num(x0) << "\" y1=\"" << num(y) << "\" x2=\"" << num(x1) << "\" y2=\""
        << num(y) << "\" stroke=\"#e0e0e0\"/>\n";
    out << "<text x=\"" << num(x0 - 6) << "\" y=\"" << num(y + 4)
        << "\" text-anchor=\"end\">" << num(v) << "</text>\n";
  }
  out << "<line x1=\"" << num(x0) << "\" y1=\"" << num(y0) << "\" x2=\"" << num(x1) << "\" y2=\""
      << num(y0) << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << num(x0) << "\" y1=\"" << num(kTop) << "\" x2=\"" << num(x0)
      << "\" y2=\"" << num(y0) << "\" stroke=\"black\"/>\n";
  out << "<text x=\"" << num((x0 + x1) / 2) << "\" y=\"" << num(kHeight - 18)
      << "\" text-anchor=\"middle\" font-size=\"13\">" << xml_escape(labels.x_label)
      << "</text>\n";
  out << "<text x=\"18.00\" y=\"" << num((kTop + y0) / 2)
      << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 18.00 "
      << num((kTop + y0) / 2) << ")\">" << xml_escape(labels.y_label) << "</text>\n";
  out << "</g>\n";
}

void legend(std::ostringstream& out, const std::vector<std::string>& names) {
  const double x = kWidth - kRight + 16;
  out << "<g font-family=\"sans-serif\" font-size=\"12\">\n";
  for (std::size_t i = 0; i < names.size(); ++i) {
    const double y = kTop + 10 + 20.0 * static_cast<double>(i);
    out << "<rect x=\"" << num(x) << "\" y=\"" << num(y - 9) << "\" width=\"12.00\" height=\"12.00\" fill=\""
        << colour(i) << "\"/>\n";
    out << "<text x=\"" << num(x + 18) << "\" y=\"" << num(y + 1) << "\">" << xml_escape(names[i])
        << "</text>\n";
  }
  out << "</g>\n";
}

}  // namespace

std::string xml_escape(std::string_view text) {
  std::string out;
  for (const char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::string line_chart_svg(const ChartLabels& labels, const std::vector<LineSeries>& series) {
  double x_min = 0.0, x_max = 1.0, y_max = 1.0;
  bool first = true;
  for (const auto& s : series) {
    for (const auto& [x, y] : s.points) {
      if (first) {
        x_min = x_max = x;
        first = false;
      }
      x_min = std::min(x_min, x);
      x_max = std::max(x_max, x);
      y_max = std::max(y_max, y);
    }
  }
  if (x_max <= x_min) x_max = x_min + 1.0;
  const double y_step = y_max > 20 ? 5.0 : (y_max > 5 ? 2.0 : 0.5);
  y_max = nice_max(y_max, y_step);

  std::ostringstream out;
  header(out, labels);
  axes(out, labels, y_max, y_step);

  const double x0 = kLeft, x1 = kWidth - kRight, y0 = kHeight - kBottom;
  const auto px = [&](double x) { return x0 + (x - x_min) / (x_max - x_min) * (x1 - x0); };
  const auto py = [&](double y) { return y0 - y / y_max * (y0 - kTop); };

  out << "<g font-family=\"sans-serif\" font-size=\"11\" fill=\"#333\">\n";
  const double tick = (x_max - x_min) > 12 ? 5.0 : 1.0;
  for (double x = std::ceil(x_min / tick) * tick; x <= x_max + 1e-9; x += tick) {
    out << "<text x=\"" << num(px(x)) << "\" y=\"" << num(y0 + 16)
        << "\" text-anchor=\"middle\">" << num(x) << "</text>\n";
  }
  out << "</g>\n";

  std::vector<std::string> names;
  for (std::size_t i = 0; i < series.size(); ++i) {
    names.push_back(series[i].name);
    out << "<polyline fill=\"none\" stroke=\"" << colour(i) << "\" stroke-width=\"2.00\"";
    if (series[i].dashed) out << " stroke-dasharray=\"6 4\"";
    out << " points=\"";
    for (std::size_t k = 0; k < series[i].points.size(); ++k) {
      if (k) out << ' ';
      out << num(px(series[i].points[k].first)) << ',' << num(py(series[i].points[k].second));
    }
    out << "\"/>\n";
  }
  legend(out, names);
  out << "</svg>\n";
  return out.str();
}

std::string bar_chart_svg(const ChartLabels& labels, const std::vector<std::string>& series_names,
                          const std::vector<BarGroup>& groups, double y_max) {
  const double y_step = y_max > 2 ? 1.0 : 0.1;
  y_max = nice_max(y_max, y_step);

  std::ostringstream out;
  header(out, labels);
  axes(out, labels, y_max, y_step);

  const double x0 = kLeft, x1 = kWidth - kRight, y0 = kHeight - kBottom;
  const double group_w = (x1 - x0) / static_cast<double>(std::max<std::size_t>(groups.size(), 1));
  const double bar_w =
      group_w * 0.8 / static_cast<double>(std::max<std::size_t>(series_names.size(), 1));
  for (std::size_t g = 0; g < groups.size(); ++g) {
    const double gx = x0 + group_w * static_cast<double>(g) + group_w * 0.1;
    for (std::size_t s = 0; s < groups[g].values.size(); ++s) {
      const double h = groups[g].values[s] / y_max * (y0 - kTop);
      out << "<rect x=\"" << num(gx + bar_w * static_cast<double>(s)) << "\" y=\"" << num(y0 - h)
          << "\" width=\"" << num(bar_w) << "\" height=\"" << num(h) << "\" fill=\"" << colour(s)
          << "\"/>\n";
    }
    out << "<text x=\"" << num(x0 + group_w * (static_cast<double>(g) + 0.5)) << "\" y=\""
        << num(y0 + 16) << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
        << xml_escape(groups[g].category) << "</text>\n";
  }
  legend(out, series_names);
  out << "</svg>\n";
  return out.str();
}

}  // namespace agestack::report
