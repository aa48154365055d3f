#include "pattn/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace pattn::svg {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 480.0;
constexpr double kMarginL = 70.0, kMarginR = 20.0, kMarginT = 40.0, kMarginB = 50.0;
const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

std::string fmt(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  void include(double v) {
    if (std::isfinite(v)) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  void pad() {
    if (!(lo <= hi)) {
      lo = 0.0;
      hi = 1.0;
    }
    if (lo == hi) {
      lo -= 0.5;
      hi += 0.5;
    }
    const double m = 0.05 * (hi - lo);
    lo -= m;
    hi += m;
  }
};

struct Mapper {
  Range rx, ry;
  double px(double x) const {
    return kMarginL + (x - rx.lo) / (rx.hi - rx.lo) * (kWidth - kMarginL - kMarginR);
  }
  double py(double y) const {
    return kHeight - kMarginB - (y - ry.lo) / (ry.hi - ry.lo) * (kHeight - kMarginT - kMarginB);
  }
};

void open_doc(std::ostringstream& out, const std::string& title) {
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(kWidth)
      << "\" height=\"" << fmt(kHeight) << "\" viewBox=\"0 0 " << fmt(kWidth) << ' '
      << fmt(kHeight) << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << fmt(kWidth / 2) << "\" y=\"24\" text-anchor=\"middle\" "
         "font-family=\"sans-serif\" font-size=\"16\">"
      << title << "</text>\n";
}

void draw_axes(std::ostringstream& out, const Mapper& map, const std::string& x_label,
               const std::string& y_label) {
  const double x0 = kMarginL, x1 = kWidth - kMarginR;
  const double y0 = kHeight - kMarginB, y1 = kMarginT;
  out << "<line x1=\"" << fmt(x0) << "\" y1=\"" << fmt(y0) << "\" x2=\"" << fmt(x1)
      << "\" y2=\"" << fmt(y0) << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << fmt(x0) << "\" y1=\"" << fmt(y0) << "\" x2=\"" << fmt(x0)
      << "\" y2=\"" << fmt(y1) << "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 5; ++i) {
    const double fx = map.rx.lo + (map.rx.hi - map.rx.lo) * i / 5.0;
    const double fy = map.ry.lo + (map.ry.hi - map.ry.lo) * i / 5.0;
    out << "<line x1=\"" << fmt(map.px(fx)) << "\" y1=\"" << fmt(y0) << "\" x2=\""
        << fmt(map.px(fx)) << "\" y2=\"" << fmt(y0 + 4) << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << fmt(map.px(fx)) << "\" y=\"" << fmt(y0 + 18)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" << fmt(fx)
        << "</text>\n";
    out << "<line x1=\"" << fmt(x0 - 4) << "\" y1=\"" << fmt(map.py(fy)) << "\" x2=\""
        << fmt(x0) << "\" y2=\"" << fmt(map.py(fy)) << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << fmt(x0 - 8) << "\" y=\"" << fmt(map.py(fy) + 4)
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << fmt(fy)
        << "</text>\n";
  }
  out << "<text x=\"" << fmt((x0 + x1) / 2) << "\" y=\"" << fmt(kHeight - 10)
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" << x_label
      << "</text>\n";
  out << "<text x=\"16\" y=\"" << fmt((y0 + y1) / 2)
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
         "transform=\"rotate(-90 16 "
      << fmt((y0 + y1) / 2) << ")\">" << y_label << "</text>\n";
}

void draw_legend(std::ostringstream& out, const std::vector<std::string>& names) {
  double y = kMarginT + 10.0;
  for (std::size_t i = 0; i < names.size(); ++i) {
    const char* color = kPalette[i % 6];
    out << "<rect x=\"" << fmt(kWidth - kMarginR - 150) << "\" y=\"" << fmt(y - 9)
        << "\" width=\"12\" height=\"12\" fill=\"" << color << "\"/>\n";
    out << "<text x=\"" << fmt(kWidth - kMarginR - 132) << "\" y=\"" << fmt(y + 2)
        << "\" font-family=\"sans-serif\" font-size=\"12\">" << names[i] << "</text>\n";
    y += 18.0;
  }
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("svg: cannot write " + path);
  f << content;
  if (!f) throw std::runtime_error("svg: write failed for " + path);
}

}  // namespace

void write_line_chart(const std::string& path, const std::string& title,
                      const std::string& x_label, const std::string& y_label,
                      const std::vector<Series>& series) {
  Mapper map;
  for (const Series& s : series) {
    for (double v : s.x) map.rx.include(v);
    for (double v : s.y) map.ry.include(v);
  }
  map.rx.pad();
  map.ry.pad();
  std::ostringstream out;
  open_doc(out, title);
  draw_axes(out, map, x_label, y_label);
  std::vector<std::string> names;
  for (std::size_t i = 0; i < series.size(); ++i) {
    const Series& s = series[i];
    names.push_back(s.name);
    out << "<polyline fill=\"none\" stroke=\"" << kPalette[i % 6]
        << "\" stroke-width=\"2\" points=\"";
    for (std::size_t k = 0; k < s.x.size(); ++k) {
      if (k) out << ' ';
      out << fmt(map.px(s.x[k])) << ',' << fmt(map.py(s.y[k]));
    }
    out << "\"/>\n";
    for (std::size_t k = 0; k < s.x.size(); ++k)
      out << "<circle cx=\"" << fmt(map.px(s.x[k])) << "\" cy=\"" << fmt(map.py(s.y[k]))
          << "\" r=\"3\" fill=\"" << kPalette[i % 6] << "\"/>\n";
  }
  draw_legend(out, names);
  out << "</svg>\n";
  write_file(path, out.str());
}

void write_scatter(const std::string& path, const std::string& title,
                   const std::vector<PointGroup>& groups) {
  Mapper map;
  for (const PointGroup& g : groups)
    for (const auto& [x, y] : g.points) {
      map.rx.include(x);
      map.ry.include(y);
    }
  map.rx.pad();
  map.ry.pad();
  // Equal aspect: widen the shorter range.
  const double sx = (map.rx.hi - map.rx.lo) / (kWidth - kMarginL - kMarginR);
  const double sy = (map.ry.hi - map.ry.lo) / (kHeight - kMarginT - kMarginB);
  if (sx > sy) {
    const double c = (map.ry.lo + map.ry.hi) / 2, h = sx * (kHeight - kMarginT - kMarginB) / 2;
    map.ry.lo = c - h;
    map.ry.hi = c + h;
  } else {
    const double c = (map.rx.lo + map.rx.hi) / 2, h = sy * (kWidth - kMarginL - kMarginR) / 2;
    map.rx.lo = c - h;
    map.rx.hi = c + h;
  }
  std::ostringstream out;
  open_doc(out, title);
  draw_axes(out, map, "y1", "y2");
  std::vector<std::string> names;
  for (std::size_t i = 0; i < groups.size(); ++i) {
    const PointGroup& g = groups[i];
    names.push_back(g.name);
    const char* color = kPalette[i % 6];
    for (const auto& [x, y] : g.points) {
      const double cx = map.px(x), cy = map.py(y);
      if (g.marker == PointGroup::Marker::dot) {
        out << "<circle cx=\"" << fmt(cx) << "\" cy=\"" << fmt(cy) << "\" r=\"2.5\" fill=\""
            << color << "\" fill-opacity=\"0.6\"/>\n";
      } else {
        out << "<path d=\"M" << fmt(cx - 3) << ' ' << fmt(cy - 3) << " L" << fmt(cx + 3) << ' '
            << fmt(cy + 3) << " M" << fmt(cx - 3) << ' ' << fmt(cy + 3) << " L" << fmt(cx + 3)
            << ' ' << fmt(cy - 3) << "\" stroke=\"" << color << "\" stroke-width=\"1.5\"/>\n";
      }
    }
  }
  draw_legend(out, names);
  out << "</svg>\n";
  write_file(path, out.str());
}

}  // namespace pattn::svg
