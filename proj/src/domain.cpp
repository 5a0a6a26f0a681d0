#include "vortex/domain.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <cmath>
#include <numbers>

#include "vortex/errors.hpp"

namespace vortex {

DomainSpec DomainSpec::plane() { return {}; }

DomainSpec DomainSpec::disk(double radius) {
  DomainSpec d;
  d.kind = DomainKind::Disk;
  d.R = radius;
  return d;
}

DomainSpec DomainSpec::center(double circulation) {
  DomainSpec d;
  d.kind = DomainKind::CenterVortex;
  d.mu = circulation;
  return d;
}

DomainSpec DomainSpec::sphere(double colatitude, Chart chart) {
  DomainSpec d;
  d.kind = DomainKind::Sphere;
  d.theta = colatitude;
  d.chart = chart;
  return d;
}

void DomainSpec::validate() const {
  switch (kind) {
    case DomainKind::Plane:
    case DomainKind::CenterVortex:
      if (!std::isfinite(mu)) throw DomainError("central circulation is not finite");
      return;
    case DomainKind::Disk:
      if (!(R > 1.0) || !std::isfinite(R))
        throw DomainError("disk radius must exceed the unit polygon radius (R > 1)");
      return;
    case DomainKind::Sphere:
      if (!(theta > 0.0 && theta < std::numbers::pi))
        throw DomainError("sphere colatitude must lie in (0, pi)");
      return;
  }
}

double DomainSpec::polygon_radius() const {
  if (kind != DomainKind::Sphere) return 1.0;
  const double t = std::tan(0.5 * theta);
  return chart == Chart::North ? 1.0 / t : t;
}

std::string to_string(DomainKind kind) {
  switch (kind) {
    case DomainKind::Plane: return "plane";
    case DomainKind::Disk: return "disk";
    case DomainKind::CenterVortex: return "center";
    case DomainKind::Sphere: return "sphere";
  }
  return "plane";
}

DomainKind domain_kind_from_string(const std::string& s) {
  if (s == "plane") return DomainKind::Plane;
  if (s == "disk") return DomainKind::Disk;
  if (s == "center") return DomainKind::CenterVortex;
  if (s == "sphere") return DomainKind::Sphere;
  throw VortexError("unknown domain kind '" + s + "'");
}

std::string to_string(Chart chart) { return chart == Chart::North ? "north" : "south"; }

std::string DomainSpec::name() const {
  char buf[96];
  switch (kind) {
    case DomainKind::Plane: return "plane";
    case DomainKind::Disk: std::snprintf(buf, sizeof buf, "disk(R=%.17g)", R); return buf;
    case DomainKind::CenterVortex:
      std::snprintf(buf, sizeof buf, "center(mu=%.17g)", mu);
      return buf;
    case DomainKind::Sphere:
      std::snprintf(buf, sizeof buf, "sphere(theta=%.17g,%s)", theta, to_string(chart).c_str());
      return buf;
  }
  return "plane";
}

Eigen::VectorXd Configuration::state() const {
  Eigen::VectorXd s(dim());
  for (int j = 0; j < n(); ++j) {
    s[2 * j] = positions[static_cast<std::size_t>(j)].x;
    s[2 * j + 1] = positions[static_cast<std::size_t>(j)].y;
  }
  if (center) {
    s[2 * n()] = center->x;
    s[2 * n() + 1] = center->y;
  }
  return s;
}

Configuration Configuration::from_state(std::span<const double> state, int n, bool with_center,
                                        std::vector<double> circulations) {
  Configuration c;
  c.positions.resize(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j)
    c.positions[static_cast<std::size_t>(j)] = {state[2 * j], state[2 * j + 1]};
  if (with_center) c.center = Point{state[2 * n], state[2 * n + 1]};
  c.circulations = std::move(circulations);
  return c;
}

int state_dim(const DomainSpec& domain, int n) { return 2 * n + (domain.has_center() ? 2 : 0); }

double min_pairwise_distance(int n, bool with_center, std::span<const double> state) {
  const int m = n + (with_center ? 1 : 0);
  double best = std::numeric_limits<double>::infinity();
  for (int j = 0; j < m; ++j)
    for (int k = j + 1; k < m; ++k)
      best = std::min(best, std::hypot(state[2 * j] - state[2 * k],
                                       state[2 * j + 1] - state[2 * k + 1]));
  return best;
}

void validate_state(const DomainSpec& domain, int n, std::span<const double> state,
                    const std::string& where) {
  const std::string prefix = where.empty() ? std::string{} : where + ": ";
  if (n < 1) throw DomainError(prefix + "no vortices");
  const bool wc = domain.has_center();
  const int m = n + (wc ? 1 : 0);
  for (int j = 0; j < 2 * m; ++j)
    if (!std::isfinite(state[j])) throw DomainError(prefix + "non-finite vortex coordinate");
  const double d = min_pairwise_distance(n, wc, state);
  if (d < kCollisionGuard) throw DomainError(prefix + "vortex collision (distance " + std::to_string(d) + ")");
  if (domain.kind == DomainKind::Disk) {
    for (int j = 0; j < n; ++j) {
      const double r = std::hypot(state[2 * j], state[2 * j + 1]);
      if (r > domain.R - kCollisionGuard)
        throw DomainError(prefix + "vortex " + std::to_string(j + 1) + " outside the disk");
    }
  }
}

void validate_configuration(const DomainSpec& domain, const Configuration& config) {
  domain.validate();
  if (domain.has_center() != config.center.has_value())
    throw DomainError(domain.has_center() ? "center-vortex domain requires a central vortex"
                                          : "central vortex given for a domain without one");
  if (config.n() < 2) throw DomainError("at least two vortices are required");
  if (!config.circulations.empty() && config.circulations.size() != config.positions.size())
    throw DomainError("circulation list length does not match the vortex count");
  const Eigen::VectorXd s = config.state();
  validate_state(domain, config.n(), {s.data(), static_cast<std::size_t>(s.size())});
}

}  // namespace vortex
