#pragma once

// Minimal SVG line plots: polylines, optional log axes, ticks and a legend.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "cwlab/error.hpp"

namespace cwlab::io {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  bool markers = false;
};

struct PlotSpec {
  std::string title;
  std::string xlabel;
  std::string ylabel;
  bool logx = false;
  bool logy = false;
  int width = 720;
  int height = 480;
};

namespace detail {

inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

inline std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

inline std::vector<double> linear_ticks(double lo, double hi) {
  const double span = hi - lo;
  if (!(span > 0)) return {lo};
  const double raw = span / 6.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 5.0, 10.0})
    if (raw <= m * mag) {
      step = m * mag;
      break;
    }
  std::vector<double> t;
  for (double v = std::ceil(lo / step) * step; v <= hi + 1e-9 * step; v += step) t.push_back(std::abs(v) < 1e-12 * step ? 0.0 : v);
  return t;
}

inline const char* color(std::size_t i) {
  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"};
  return palette[i % 6];
}

}  // namespace detail

/// Render series as an SVG document. Non-positive values are dropped on log axes.
inline std::string render_svg(const PlotSpec& spec, const std::vector<Series>& series) {
  const double ml = 80, mr = 20, mt = 40, mb = 60;
  const double pw = spec.width - ml - mr, ph = spec.height - mt - mb;
  auto tx = [&](double v) { return spec.logx ? std::log10(v) : v; };
  auto ty = [&](double v) { return spec.logy ? std::log10(v) : v; };
  auto usable = [&](double x, double y) {
    return std::isfinite(x) && std::isfinite(y) && (!spec.logx || x > 0) && (!spec.logy || y > 0);
  };
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (const auto& s : series) {
    if (s.x.size() != s.y.size()) throw DimensionError("svg series '" + s.label + "': x/y length mismatch");
    for (std::size_t i = 0; i < s.x.size(); ++i)
      if (usable(s.x[i], s.y[i])) {
        x0 = std::min(x0, tx(s.x[i]));
        x1 = std::max(x1, tx(s.x[i]));
        y0 = std::min(y0, ty(s.y[i]));
        y1 = std::max(y1, ty(s.y[i]));
      }
  }
  if (!std::isfinite(x0)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  if (x1 == x0) x0 -= 0.5, x1 += 0.5;
  if (y1 == y0) y0 -= 0.5, y1 += 0.5;
  const double pad = 0.04 * (y1 - y0);
  y0 -= pad;
  y1 += pad;
  auto px = [&](double v) { return ml + (v - x0) / (x1 - x0) * pw; };
  auto py = [&](double v) { return mt + ph - (v - y0) / (y1 - y0) * ph; };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << spec.width << "\" height=\"" << spec.height
     << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << spec.width / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">"
     << detail::escape(spec.title) << "</text>\n";
  os << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << pw << "\" height=\"" << ph
     << "\" fill=\"none\" stroke=\"black\"/>\n";

  auto ticks = [&](double lo, double hi, bool log) {
    if (!log) return detail::linear_ticks(lo, hi);
    std::vector<double> t;
    const double step = std::max(1.0, std::ceil((hi - lo) / 8.0));
    for (double e = std::ceil(lo); e <= hi; e += step) t.push_back(e);
    return t;
  };
  for (double t : ticks(x0, x1, spec.logx)) {
    const double p = px(t);
    os << "<line x1=\"" << detail::num(p) << "\" y1=\"" << mt + ph << "\" x2=\"" << detail::num(p) << "\" y2=\""
       << mt + ph + 5 << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << detail::num(p) << "\" y=\"" << mt + ph + 18 << "\" text-anchor=\"middle\">"
       << (spec.logx ? "1e" + detail::num(t) : detail::num(t)) << "</text>\n";
  }
  for (double t : ticks(y0, y1, spec.logy)) {
    const double p = py(t);
    os << "<line x1=\"" << ml - 5 << "\" y1=\"" << detail::num(p) << "\" x2=\"" << ml << "\" y2=\""
       << detail::num(p) << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << ml - 8 << "\" y=\"" << detail::num(p + 4) << "\" text-anchor=\"end\">"
       << (spec.logy ? "1e" + detail::num(t) : detail::num(t)) << "</text>\n";
  }
  os << "<text x=\"" << ml + pw / 2 << "\" y=\"" << spec.height - 15 << "\" text-anchor=\"middle\">"
     << detail::escape(spec.xlabel) << "</text>\n";
  os << "<text x=\"18\" y=\"" << mt + ph / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
     << mt + ph / 2 << ")\">" << detail::escape(spec.ylabel) << "</text>\n";

  for (std::size_t si = 0; si < series.size(); ++si) {
    const auto& s = series[si];
    std::string pts;
    for (std::size_t i = 0; i < s.x.size(); ++i)
      if (usable(s.x[i], s.y[i])) pts += detail::num(px(tx(s.x[i]))) + "," + detail::num(py(ty(s.y[i]))) + " ";
    os << "<polyline fill=\"none\" stroke=\"" << detail::color(si) << "\" stroke-width=\"1.5\" points=\"" << pts
       << "\"/>\n";
    if (s.markers)
      for (std::size_t i = 0; i < s.x.size(); ++i)
        if (usable(s.x[i], s.y[i]))
          os << "<circle cx=\"" << detail::num(px(tx(s.x[i]))) << "\" cy=\"" << detail::num(py(ty(s.y[i])))
             << "\" r=\"2.5\" fill=\"" << detail::color(si) << "\"/>\n";
    const double ly = mt + 16 + 16.0 * static_cast<double>(si);
    os << "<line x1=\"" << ml + pw - 150 << "\" y1=\"" << ly << "\" x2=\"" << ml + pw - 130 << "\" y2=\"" << ly
       << "\" stroke=\"" << detail::color(si) << "\" stroke-width=\"2\"/>\n";
    os << "<text x=\"" << ml + pw - 125 << "\" y=\"" << ly + 4 << "\">" << detail::escape(s.label) << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace cwlab::io
