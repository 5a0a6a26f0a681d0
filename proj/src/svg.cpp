#include "vortex/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace vortex {

namespace {

const char* const kPalette[] = {"#1f4e9c", "#c0392b", "#2e8b57", "#8e44ad", "#d35400",
                                "#16a085", "#7f8c8d", "#2c3e50"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick_text(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", std::abs(v) < 1e-12 ? 0.0 : v);
  return buf;
}

std::string escape(const std::string& s) {
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

double nice_step(double span, int target) {
  const double raw = span / target;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double f = raw / mag;
  return mag * (f < 1.5 ? 1.0 : f < 3.5 ? 2.0 : f < 7.5 ? 5.0 : 10.0);
}

struct Frame {
  double x0, x1, y0, y1;     // data window
  double left, top, w, h;    // pixel box
  double px(double x) const { return left + (x - x0) / (x1 - x0) * w; }
  double py(double y) const { return top + h - (y - y0) / (y1 - y0) * h; }
};

}  // namespace

std::string render_svg(const PlotSpec& spec, const std::vector<Series>& series,
                       const std::vector<Marker>& markers) {
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  auto grow = [&](double x, double y) {
    if (!std::isfinite(x) || !std::isfinite(y)) return;
    x0 = std::min(x0, x);
    x1 = std::max(x1, x);
    y0 = std::min(y0, y);
    y1 = std::max(y1, y);
  };
  for (const Series& s : series)
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) grow(s.x[i], s.y[i]);
  for (const Marker& m : markers) grow(m.x, m.y);
  if (!std::isfinite(x0)) x0 = 0.0, x1 = 1.0, y0 = 0.0, y1 = 1.0;
  if (x1 - x0 < 1e-12) x0 -= 0.5, x1 += 0.5;
  if (y1 - y0 < 1e-12) y0 -= 0.5, y1 += 0.5;
  const double padx = 0.04 * (x1 - x0), pady = 0.04 * (y1 - y0);
  x0 -= padx, x1 += padx, y0 -= pady, y1 += pady;

  Frame f{x0, x1, y0, y1, 70.0, 40.0, spec.width - 95.0, spec.height - 95.0};
  if (spec.equal_aspect) {
    // widen whichever axis is short so one data unit has the same length
    const double sx = f.w / (x1 - x0), sy = f.h / (y1 - y0);
    if (sx > sy) {
      const double extra = (f.w / sy - (x1 - x0)) / 2;
      f.x0 -= extra, f.x1 += extra;
    } else {
      const double extra = (f.h / sx - (y1 - y0)) / 2;
      f.y0 -= extra, f.y1 += extra;
    }
  }

  std::ostringstream o;
  o << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
    << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << spec.width << "\" height=\"" << spec.height
    << "\" viewBox=\"0 0 " << spec.width << ' ' << spec.height << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
    << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<rect x=\"" << num(f.left) << "\" y=\"" << num(f.top) << "\" width=\"" << num(f.w) << "\" height=\""
    << num(f.h) << "\" fill=\"none\" stroke=\"#333\"/>\n";

  const double sx = nice_step(f.x1 - f.x0, 6), sy = nice_step(f.y1 - f.y0, 6);
  o << "<g stroke=\"#ddd\" stroke-width=\"0.6\">\n";
  for (double t = std::ceil(f.x0 / sx) * sx; t <= f.x1; t += sx)
    o << "<line x1=\"" << num(f.px(t)) << "\" y1=\"" << num(f.top) << "\" x2=\"" << num(f.px(t)) << "\" y2=\""
      << num(f.top + f.h) << "\"/>\n";
  for (double t = std::ceil(f.y0 / sy) * sy; t <= f.y1; t += sy)
    o << "<line x1=\"" << num(f.left) << "\" y1=\"" << num(f.py(t)) << "\" x2=\"" << num(f.left + f.w)
      << "\" y2=\"" << num(f.py(t)) << "\"/>\n";
  o << "</g>\n<g fill=\"#333\">\n";
  for (double t = std::ceil(f.x0 / sx) * sx; t <= f.x1; t += sx)
    o << "<text x=\"" << num(f.px(t)) << "\" y=\"" << num(f.top + f.h + 16) << "\" text-anchor=\"middle\">"
      << tick_text(t) << "</text>\n";
  for (double t = std::ceil(f.y0 / sy) * sy; t <= f.y1; t += sy)
    o << "<text x=\"" << num(f.left - 6) << "\" y=\"" << num(f.py(t) + 4) << "\" text-anchor=\"end\">"
      << tick_text(t) << "</text>\n";
  o << "</g>\n";
  o << "<text x=\"" << num(f.left + f.w / 2) << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">"
    << escape(spec.title) << "</text>\n";
  o << "<text x=\"" << num(f.left + f.w / 2) << "\" y=\"" << spec.height - 12
    << "\" text-anchor=\"middle\">" << escape(spec.xlabel) << "</text>\n";
  o << "<text x=\"16\" y=\"" << num(f.top + f.h / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
    << num(f.top + f.h / 2) << ")\">" << escape(spec.ylabel) << "</text>\n";

  o << "<g fill=\"none\" stroke-linejoin=\"round\">\n";
  for (const Series& s : series) {
    if (s.x.size() < 2) continue;
    o << "<polyline stroke=\"" << s.color << "\" stroke-width=\"" << s.width << '"'
      << (s.dashed ? " stroke-dasharray=\"6 4\"" : "") << " points=\"";
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      o << num(f.px(s.x[i])) << ',' << num(f.py(s.y[i])) << ' ';
    }
    o << "\"/>\n";
  }
  o << "</g>\n";
  for (const Marker& m : markers) {
    o << "<circle cx=\"" << num(f.px(m.x)) << "\" cy=\"" << num(f.py(m.y)) << "\" r=\"3.5\" fill=\"" << m.color
      << "\"/>\n";
    if (!m.label.empty())
      o << "<text x=\"" << num(f.px(m.x) + 6) << "\" y=\"" << num(f.py(m.y) - 6) << "\" fill=\"" << m.color
        << "\">" << escape(m.label) << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

std::string orbit_figure(const ChoreographyPaths& p, bool inertial, const std::string& title) {
  std::vector<Series> series;
  std::vector<Marker> markers;
  const auto& src = inertial ? p.paths : p.rotating;
  for (std::size_t j = 0; j < src.size(); ++j) {
    Series s;
    s.color = kPalette[j % std::size(kPalette)];
    s.width = 1.0;
    for (const cplx& z : src[j]) {
      s.x.push_back(z.real());
      s.y.push_back(z.imag());
    }
    if (!src[j].empty()) {  // close the loop
      s.x.push_back(src[j].front().real());
      s.y.push_back(src[j].front().imag());
      markers.push_back({src[j].front().real(), src[j].front().imag(), std::to_string(j + 1), s.color});
    }
    series.push_back(std::move(s));
  }
  const auto& center = inertial ? p.center_path : p.center_rotating;
  if (center && !center->empty()) {
    Series s;
    s.color = "#555";
    s.dashed = true;
    for (const cplx& z : *center) {
      s.x.push_back(z.real());
      s.y.push_back(z.imag());
    }
    markers.push_back({center->front().real(), center->front().imag(), "0", s.color});
    series.push_back(std::move(s));
  }
  PlotSpec spec;
  spec.title = title;
  spec.xlabel = "x";
  spec.ylabel = "y";
  spec.equal_aspect = true;
  spec.width = spec.height = 560;
  return render_svg(spec, series, markers);
}

std::string bifurcation_figure(const std::vector<Branch>& branches, Param x, const std::string& title,
                               const std::vector<Marker>& markers, Ordinate y) {
  auto value = [y](const BranchPoint& p) { return y == Ordinate::Rho ? p.rho : p.T; };
  std::vector<Series> series;
  for (const Branch& b : branches) {
    std::size_t i = 0;
    while (i < b.points.size()) {
      // one polyline per run of equal stability, sharing the joining point
      Series s;
      s.dashed = !b.points[i].stable;
      s.color = s.dashed ? "#c0392b" : "#1f4e9c";
      s.width = 1.6;
      std::size_t j = i;
      for (; j < b.points.size() && b.points[j].stable == b.points[i].stable; ++j) {
        s.x.push_back(b.points[j].orbit.get(x));
        s.y.push_back(value(b.points[j]));
      }
      if (j < b.points.size()) {
        s.x.push_back(b.points[j].orbit.get(x));
        s.y.push_back(value(b.points[j]));
      }
      series.push_back(std::move(s));
      i = j;
    }
  }
  PlotSpec spec;
  spec.title = title;
  spec.xlabel = to_string(x);
  spec.ylabel = y == Ordinate::Rho ? "T/T0" : "T";
  return render_svg(spec, series, markers);
}

}  // namespace vortex
