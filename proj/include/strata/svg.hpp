#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "strata/util.hpp"

namespace strata {

// Minimal SVG scatter/line charts for the --svg convenience flag; the CSV
// files remain the contract.
namespace svg {

struct Series {
  std::vector<double> x;
  std::vector<double> y;
};

namespace detail {

struct Frame {
  double x_min, x_max, y_min, y_max;
  static constexpr double width = 640, height = 420, margin = 56;

  double px(double x) const {
    double span = x_max - x_min;
    if (span == 0) span = 1;
    return margin + (x - x_min) / span * (width - 2 * margin);
  }
  double py(double y) const {
    double span = y_max - y_min;
    if (span == 0) span = 1;
    return height - margin - (y - y_min) / span * (height - 2 * margin);
  }
};

inline Frame fit(const Series& s) {
  Frame f{0, 1, 0, 1};
  if (!s.x.empty()) {
    f.x_min = *std::min_element(s.x.begin(), s.x.end());
    f.x_max = *std::max_element(s.x.begin(), s.x.end());
    f.y_min = *std::min_element(s.y.begin(), s.y.end());
    f.y_max = *std::max_element(s.y.begin(), s.y.end());
  }
  return f;
}

inline std::string num(double v) { return format_sig9(v); }

inline std::string header(const Frame& f, const std::string& title, const std::string& x_label,
                          const std::string& y_label) {
  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"420\" "
         "viewBox=\"0 0 640 420\">\n";
  out += "<rect width=\"640\" height=\"420\" fill=\"white\"/>\n";
  out += "<text x=\"320\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">" + title +
         "</text>\n";
  out += "<text x=\"320\" y=\"408\" text-anchor=\"middle\" font-size=\"12\">" + x_label +
         "</text>\n";
  out += "<text x=\"16\" y=\"210\" text-anchor=\"middle\" font-size=\"12\" "
         "transform=\"rotate(-90 16 210)\">" +
         y_label + "</text>\n";
  out += "<line x1=\"" + num(Frame::margin) + "\" y1=\"" + num(Frame::height - Frame::margin) +
         "\" x2=\"" + num(Frame::width - Frame::margin) + "\" y2=\"" +
         num(Frame::height - Frame::margin) + "\" stroke=\"black\"/>\n";
  out += "<line x1=\"" + num(Frame::margin) + "\" y1=\"" + num(Frame::margin) + "\" x2=\"" +
         num(Frame::margin) + "\" y2=\"" + num(Frame::height - Frame::margin) +
         "\" stroke=\"black\"/>\n";
  char buf[128];
  std::snprintf(buf, sizeof(buf),
                "<text x=\"%g\" y=\"%g\" font-size=\"10\">%s</text>\n", Frame::margin,
                Frame::height - Frame::margin + 14, num(f.x_min).c_str());
  out += buf;
  std::snprintf(buf, sizeof(buf),
                "<text x=\"%g\" y=\"%g\" font-size=\"10\" text-anchor=\"end\">%s</text>\n",
                Frame::width - Frame::margin, Frame::height - Frame::margin + 14,
                num(f.x_max).c_str());
  out += buf;
  std::snprintf(buf, sizeof(buf),
                "<text x=\"%g\" y=\"%g\" font-size=\"10\" text-anchor=\"end\">%s</text>\n",
                Frame::margin - 4, Frame::height - Frame::margin, num(f.y_min).c_str());
  out += buf;
  std::snprintf(buf, sizeof(buf),
                "<text x=\"%g\" y=\"%g\" font-size=\"10\" text-anchor=\"end\">%s</text>\n",
                Frame::margin - 4, Frame::margin + 4, num(f.y_max).c_str());
  out += buf;
  return out;
}

}  // namespace detail

inline std::string scatter(const Series& s, const std::string& title, const std::string& x_label,
                           const std::string& y_label) {
  detail::Frame f = detail::fit(s);
  std::string out = detail::header(f, title, x_label, y_label);
  for (size_t i = 0; i < s.x.size(); ++i) {
    out += "<circle cx=\"" + detail::num(f.px(s.x[i])) + "\" cy=\"" + detail::num(f.py(s.y[i])) +
           "\" r=\"1.5\" fill=\"steelblue\" fill-opacity=\"0.6\"/>\n";
  }
  out += "</svg>\n";
  return out;
}

inline std::string line_chart(const Series& s, const std::string& title,
                              const std::string& x_label, const std::string& y_label) {
  detail::Frame f = detail::fit(s);
  std::string out = detail::header(f, title, x_label, y_label);
  out += "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"1.5\" points=\"";
  for (size_t i = 0; i < s.x.size(); ++i) {
    if (i) out += ' ';
    out += detail::num(f.px(s.x[i])) + "," + detail::num(f.py(s.y[i]));
  }
  out += "\"/>\n";
  for (size_t i = 0; i < s.x.size(); ++i) {
    out += "<circle cx=\"" + detail::num(f.px(s.x[i])) + "\" cy=\"" + detail::num(f.py(s.y[i])) +
           "\" r=\"2.5\" fill=\"steelblue\"/>\n";
  }
  out += "</svg>\n";
  return out;
}

}  // namespace svg
}  // namespace strata
