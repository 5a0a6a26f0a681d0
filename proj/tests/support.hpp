#pragma once

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "vortex/dynamics.hpp"
#include "vortex/equilibria.hpp"

namespace vortex::test {

inline constexpr double kPi = std::numbers::pi;

// Central differences of f: R^d -> R^r at x.
template <class F>
Eigen::MatrixXd numeric_jacobian(F&& f, const Eigen::VectorXd& x, double h = 1e-6) {
  const Eigen::VectorXd f0 = f(x);
  Eigen::MatrixXd J(f0.size(), x.size());
  for (Eigen::Index c = 0; c < x.size(); ++c) {
    Eigen::VectorXd xp = x, xm = x;
    xp[c] += h;
    xm[c] -= h;
    J.col(c) = (f(xp) - f(xm)) / (2 * h);
  }
  return J;
}

inline double relative_error(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return (a - b).norm() / std::max(1.0, b.norm());
}

// Perturbed polygon with no close encounters: each vortex moves by at most
// `jitter` times the polygon radius.
inline Configuration jittered_polygon(const DomainSpec& domain, int n, std::mt19937& rng,
                                      double jitter = 0.15) {
  Configuration c = domain_polygon(domain, n);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const double r = domain.polygon_radius();
  for (Point& p : c.positions) {
    p.x += jitter * r * u(rng);
    p.y += jitter * r * u(rng);
  }
  if (c.center) {
    c.center->x += 0.05 * u(rng);
    c.center->y += 0.05 * u(rng);
  }
  return c;
}

inline std::vector<DomainSpec> sample_domains() {
  return {DomainSpec::plane(), DomainSpec::disk(3.0), DomainSpec::center(1.5),
          DomainSpec::sphere(0.8), DomainSpec::sphere(2.2, Chart::South)};
}

}  // namespace vortex::test
