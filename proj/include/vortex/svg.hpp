#pragma once

#include <string>
#include <vector>

#include "vortex/choreography.hpp"
#include "vortex/continuation.hpp"

namespace vortex {

struct Series {
  std::vector<double> x, y;
  std::string color = "#1f4e9c";
  double width = 1.2;
  bool dashed = false;
};

struct Marker {
  double x = 0.0, y = 0.0;
  std::string label;
  std::string color = "#b22222";
};

struct PlotSpec {
  std::string title, xlabel, ylabel;
  bool equal_aspect = false;
  int width = 640, height = 520;
};

// Standalone SVG document with axes, ticks and the given polylines.
std::string render_svg(const PlotSpec& spec, const std::vector<Series>& series,
                       const std::vector<Marker>& markers = {});

// Paths of every vortex in the rotating frame (inertial = false) or the
// inertial frame; the starting positions are marked.
std::string orbit_figure(const ChoreographyPaths& paths, bool inertial, const std::string& title);

enum class Ordinate { Rho, Period };

// rho (or T) against a parameter, solid where stable and dashed where
// unstable, with labelled markers.
std::string bifurcation_figure(const std::vector<Branch>& branches, Param x, const std::string& title,
                               const std::vector<Marker>& markers = {}, Ordinate y = Ordinate::Rho);

}  // namespace vortex
