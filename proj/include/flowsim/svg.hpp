#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

namespace flowsim {

// Minimal deterministic SVG line charts: fixed canvas, fixed palette, no
// timestamps, so identical tables render byte-identical files.
namespace svg {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

struct ChartOptions {
  std::string title;
  std::string x_label;
  std::string y_label;
  double reference_y = std::nan("");  // drawn as a dashed horizontal line when finite
};

namespace detail {

constexpr double kWidth = 860.0;
constexpr double kHeight = 540.0;
constexpr double kLeft = 80.0;
constexpr double kRight = 830.0;
constexpr double kTop = 60.0;
constexpr double kBottom = 480.0;
constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                                    "#8c564b"};

inline std::string fmt(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

inline std::string fmt2(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

}  // namespace detail

inline std::string line_chart(const std::vector<Series>& series, const ChartOptions& opt) {
  using namespace detail;
  if (series.empty()) {
    throw std::invalid_argument("chart needs at least one series");
  }
  double x_min = 0, x_max = 0, y_min = 0, y_max = 0;
  bool first = true;
  for (const auto& s : series) {
    if (s.x.size() != s.y.size() || s.x.empty()) {
      throw std::invalid_argument("series must be non-empty with matching x/y sizes");
    }
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (first) {
        x_min = x_max = s.x[i];
        y_min = y_max = s.y[i];
        first = false;
      } else {
        x_min = std::min(x_min, s.x[i]);
        x_max = std::max(x_max, s.x[i]);
        y_min = std::min(y_min, s.y[i]);
        y_max = std::max(y_max, s.y[i]);
      }
    }
  }
  if (std::isfinite(opt.reference_y)) {
    y_min = std::min(y_min, opt.reference_y);
    y_max = std::max(y_max, opt.reference_y);
  }
  if (x_max == x_min) {
    x_max = x_min + 1.0;
  }
  if (y_max == y_min) {
    y_max = y_min + 1.0;
  }
  const double y_pad = 0.08 * (y_max - y_min);
  y_min -= y_pad;
  y_max += y_pad;

  const auto sx = [&](double x) { return kLeft + (x - x_min) / (x_max - x_min) * (kRight - kLeft); };
  const auto sy = [&](double y) { return kBottom - (y - y_min) / (y_max - y_min) * (kBottom - kTop); };

  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"860\" height=\"540\" "
         "viewBox=\"0 0 860 540\">\n";
  out += "<rect width=\"860\" height=\"540\" fill=\"white\"/>\n";
  out += "<text x=\"430\" y=\"32\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"18\">" + opt.title + "</text>\n";

  // axes and ticks
  out += "<line x1=\"" + fmt2(kLeft) + "\" y1=\"" + fmt2(kBottom) + "\" x2=\"" + fmt2(kRight) +
         "\" y2=\"" + fmt2(kBottom) + "\" stroke=\"black\"/>\n";
  out += "<line x1=\"" + fmt2(kLeft) + "\" y1=\"" + fmt2(kTop) + "\" x2=\"" + fmt2(kLeft) +
         "\" y2=\"" + fmt2(kBottom) + "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 5; ++i) {
    const double fx = x_min + (x_max - x_min) * i / 5.0;
    const double fy = y_min + (y_max - y_min) * i / 5.0;
    out += "<line x1=\"" + fmt2(sx(fx)) + "\" y1=\"" + fmt2(kBottom) + "\" x2=\"" + fmt2(sx(fx)) +
           "\" y2=\"" + fmt2(kBottom + 6) + "\" stroke=\"black\"/>\n";
    out += "<text x=\"" + fmt2(sx(fx)) + "\" y=\"" + fmt2(kBottom + 24) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" + fmt(fx) +
           "</text>\n";
    out += "<line x1=\"" + fmt2(kLeft - 6) + "\" y1=\"" + fmt2(sy(fy)) + "\" x2=\"" + fmt2(kLeft) +
           "\" y2=\"" + fmt2(sy(fy)) + "\" stroke=\"black\"/>\n";
    out += "<text x=\"" + fmt2(kLeft - 10) + "\" y=\"" + fmt2(sy(fy) + 4) +
           "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">" + fmt(fy) +
           "</text>\n";
  }
  out += "<text x=\"455\" y=\"520\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"14\">" + opt.x_label + "</text>\n";
  out += "<text x=\"24\" y=\"270\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"14\" transform=\"rotate(-90 24 270)\">" + opt.y_label + "</text>\n";

  if (std::isfinite(opt.reference_y)) {
    out += "<line x1=\"" + fmt2(kLeft) + "\" y1=\"" + fmt2(sy(opt.reference_y)) + "\" x2=\"" +
           fmt2(kRight) + "\" y2=\"" + fmt2(sy(opt.reference_y)) +
           "\" stroke=\"#888888\" stroke-dasharray=\"6 4\"/>\n";
  }

  for (std::size_t si = 0; si < series.size(); ++si) {
    const char* color = detail::kPalette[si % 6];
    std::string points;
    for (std::size_t i = 0; i < series[si].x.size(); ++i) {
      points += fmt2(sx(series[si].x[i])) + "," + fmt2(sy(series[si].y[i])) + " ";
    }
    out += "<polyline fill=\"none\" stroke=\"" + std::string(color) +
           "\" stroke-width=\"2\" points=\"" + points + "\"/>\n";
    for (std::size_t i = 0; i < series[si].x.size(); ++i) {
      out += "<circle cx=\"" + fmt2(sx(series[si].x[i])) + "\" cy=\"" + fmt2(sy(series[si].y[i])) +
             "\" r=\"3\" fill=\"" + color + "\"/>\n";
    }
    out += "<rect x=\"" + fmt2(kLeft + 12) + "\" y=\"" + fmt2(kTop + 8 + 20.0 * si) +
           "\" width=\"12\" height=\"12\" fill=\"" + color + "\"/>\n";
    out += "<text x=\"" + fmt2(kLeft + 30) + "\" y=\"" + fmt2(kTop + 18 + 20.0 * si) +
           "\" font-family=\"sans-serif\" font-size=\"12\">" + series[si].label + "</text>\n";
  }
  out += "</svg>\n";
  return out;
}

}  // namespace svg
}  // namespace flowsim
