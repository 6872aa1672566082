#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "walkersim/csv.hpp"
#include "walkersim/errors.hpp"

namespace walkersim {

struct Bar {
  std::string label;
  double value = 0.0;
  double err = 0.0;  // symmetric whisker, 0 for none
};

struct BarGroup {
  std::string label;
  std::vector<Bar> bars;
};

namespace detail {

inline std::string svg_num(double v) {
  return format_double(std::round(v * 100.0) / 100.0);
}

inline std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

inline double nice_step(double span) {
  if (!(span > 0.0)) return 1.0;
  const double raw = span / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double frac = raw / mag;
  double step;
  if (frac < 1.5) {
    step = 1.0;
  } else if (frac < 3.0) {
    step = 2.0;
  } else if (frac < 7.0) {
    step = 5.0;
  } else {
    step = 10.0;
  }
  return step * mag;
}

}  // namespace detail

// Grouped bar chart as a standalone SVG document. Output bytes depend only on
// the inputs, so rendered charts diff cleanly between runs.
inline std::string svg_bar_chart(const std::string& title, const std::string& y_label,
                                 const std::vector<BarGroup>& groups,
                                 int width = 640, int height = 400) {
  using detail::svg_num;
  using detail::xml_escape;
  if (groups.empty()) throw ConfigError("groups", "chart needs at least one group");
  std::size_t bars_per_group = groups.front().bars.size();
  if (bars_per_group == 0) throw ConfigError("groups", "chart needs bars");
  for (const auto& g : groups)
    if (g.bars.size() != bars_per_group)
      throw ConfigError("groups", "all groups need the same bar count");

  static const char* kPalette[] = {"#4477aa", "#ee6677", "#228833", "#ccbb44",
                                   "#66ccee", "#aa3377"};
  const int n_colors = 6;

  double data_max = 0.0;
  for (const auto& g : groups)
    for (const auto& b : g.bars) data_max = std::max(data_max, b.value + b.err);
  const double step = detail::nice_step(data_max);
  double y_max = std::ceil(data_max / step) * step;
  if (!(y_max > 0.0)) y_max = 1.0;

  const double ml = 70.0, mr = 20.0, mt = 50.0, mb = 60.0;
  const double pw = width - ml - mr;
  const double ph = height - mt - mb;
  auto ypix = [&](double v) { return mt + ph * (1.0 - v / y_max); };

  std::string s;
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(width) +
       "\" height=\"" + std::to_string(height) + "\" viewBox=\"0 0 " +
       std::to_string(width) + " " + std::to_string(height) + "\">\n";
  s += "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
  s += "<text x=\"" + svg_num(width / 2.0) +
       "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
       "font-size=\"16\" fill=\"#222222\">" +
       xml_escape(title) + "</text>\n";

  for (double v = 0.0; v <= y_max + step * 1e-9; v += step) {
    const double y = ypix(v);
    s += "<line x1=\"" + svg_num(ml) + "\" y1=\"" + svg_num(y) + "\" x2=\"" +
         svg_num(ml + pw) + "\" y2=\"" + svg_num(y) +
         "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
    s += "<text x=\"" + svg_num(ml - 8.0) + "\" y=\"" + svg_num(y + 4.0) +
         "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\" "
         "fill=\"#444444\">" +
         svg_num(v) + "</text>\n";
  }
  s += "<text x=\"16\" y=\"" + svg_num(mt + ph / 2.0) +
       "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" "
       "fill=\"#444444\" transform=\"rotate(-90 16 " +
       svg_num(mt + ph / 2.0) + ")\">" + xml_escape(y_label) + "</text>\n";

  const double group_w = pw / static_cast<double>(groups.size());
  const double slot_w = group_w / static_cast<double>(bars_per_group + 1);
  for (std::size_t gi = 0; gi < groups.size(); ++gi) {
    const auto& g = groups[gi];
    const double gx = ml + group_w * static_cast<double>(gi);
    for (std::size_t bi = 0; bi < g.bars.size(); ++bi) {
      const auto& b = g.bars[bi];
      const double x = gx + slot_w * (static_cast<double>(bi) + 0.5);
      const double y = ypix(std::max(0.0, b.value));
      const double h = mt + ph - y;
      s += "<rect x=\"" + svg_num(x) + "\" y=\"" + svg_num(y) + "\" width=\"" +
           svg_num(slot_w * 0.9) + "\" height=\"" + svg_num(std::max(0.0, h)) +
           "\" fill=\"" + kPalette[bi % n_colors] + "\"/>\n";
      if (b.err > 0.0) {
        const double cx = x + slot_w * 0.45;
        const double ylo = ypix(std::max(0.0, b.value - b.err));
        const double yhi = ypix(std::min(y_max, b.value + b.err));
        s += "<line x1=\"" + svg_num(cx) + "\" y1=\"" + svg_num(ylo) + "\" x2=\"" +
             svg_num(cx) + "\" y2=\"" + svg_num(yhi) +
             "\" stroke=\"#222222\" stroke-width=\"1.5\"/>\n";
        for (double ye : {ylo, yhi})
          s += "<line x1=\"" + svg_num(cx - 4.0) + "\" y1=\"" + svg_num(ye) +
               "\" x2=\"" + svg_num(cx + 4.0) + "\" y2=\"" + svg_num(ye) +
               "\" stroke=\"#222222\" stroke-width=\"1.5\"/>\n";
      }
    }
    s += "<text x=\"" + svg_num(gx + group_w / 2.0) + "\" y=\"" +
         svg_num(mt + ph + 20.0) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" "
         "fill=\"#222222\">" +
         xml_escape(g.label) + "</text>\n";
  }

  if (bars_per_group > 1) {
    double lx = ml + 8.0;
    const double ly = mt + 10.0;
    for (std::size_t bi = 0; bi < bars_per_group; ++bi) {
      const std::string& label = groups.front().bars[bi].label;
      s += "<rect x=\"" + svg_num(lx) + "\" y=\"" + svg_num(ly - 9.0) +
           "\" width=\"10\" height=\"10\" fill=\"" + kPalette[bi % n_colors] +
           "\"/>\n";
      s += "<text x=\"" + svg_num(lx + 14.0) + "\" y=\"" + svg_num(ly) +
           "\" font-family=\"sans-serif\" font-size=\"11\" fill=\"#222222\">" +
           xml_escape(label) + "</text>\n";
      lx += 14.0 + 7.0 * static_cast<double>(label.size()) + 16.0;
    }
  }

  s += "<line x1=\"" + svg_num(ml) + "\" y1=\"" + svg_num(mt) + "\" x2=\"" +
       svg_num(ml) + "\" y2=\"" + svg_num(mt + ph) +
       "\" stroke=\"#222222\" stroke-width=\"1\"/>\n";
  s += "<line x1=\"" + svg_num(ml) + "\" y1=\"" + svg_num(mt + ph) + "\" x2=\"" +
       svg_num(ml + pw) + "\" y2=\"" + svg_num(mt + ph) +
       "\" stroke=\"#222222\" stroke-width=\"1\"/>\n";
  s += "</svg>\n";
  return s;
}

}  // namespace walkersim
