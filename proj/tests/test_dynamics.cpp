#include <doctest.h>

#include <cmath>
#include <random>

#include "support.hpp"
#include "vortex/dynamics.hpp"
#include "vortex/equilibria.hpp"

using namespace vortex;
using vortex::test::kPi;

namespace {

Eigen::VectorXd as_vector(const std::vector<Point>& pts) {
  Eigen::VectorXd v(2 * static_cast<Eigen::Index>(pts.size()));
  for (std::size_t j = 0; j < pts.size(); ++j) {
    v[2 * j] = pts[j].x;
    v[2 * j + 1] = pts[j].y;
  }
  return v;
}

}  // namespace

TEST_CASE("frame frequency of the polygon") {
  CHECK(omega_equilibrium(DomainSpec::plane(), 5) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(omega_equilibrium(DomainSpec::plane(), 6) == doctest::Approx(2.5).epsilon(1e-15));
  CHECK(omega_equilibrium(DomainSpec::disk(6), 5) ==
        doctest::Approx(5.0 / (1.0 - std::pow(6.0, -10)) - 3.0).epsilon(1e-15));
  CHECK(omega_equilibrium(DomainSpec::center(1.85436), 5) == doctest::Approx(3.85436).epsilon(1e-15));
  const double r = 1.0 / std::tan(0.4);
  CHECK(omega_equilibrium(DomainSpec::sphere(0.8), 5) ==
        doctest::Approx(2.0 * (1 - std::pow(r, 4)) / (4 * r * r)).epsilon(1e-14));
  // the frequency belongs to the sphere, not to the chart
  CHECK(omega_equilibrium(DomainSpec::sphere(0.8, Chart::South), 5) ==
        doctest::Approx(omega_equilibrium(DomainSpec::sphere(0.8), 5)).epsilon(1e-14));
  CHECK(rotating_period(DomainSpec::plane(), 5) == doctest::Approx(kPi));
  CHECK(rotating_period(DomainSpec::sphere(0.65), 5) == doctest::Approx(-1.44534).epsilon(1e-5));
}

TEST_CASE("omega parameter derivative matches differences") {
  const double h = 1e-6;
  for (const DomainSpec& d : {DomainSpec::disk(2.0), DomainSpec::center(0.7), DomainSpec::sphere(1.1)}) {
    DomainSpec up = d, dn = d;
    double* p = d.kind == DomainKind::Disk ? &up.R : d.kind == DomainKind::Sphere ? &up.theta : &up.mu;
    double* q = d.kind == DomainKind::Disk ? &dn.R : d.kind == DomainKind::Sphere ? &dn.theta : &dn.mu;
    *p += h;
    *q -= h;
    const double fd = (omega_equilibrium(up, 5) - omega_equilibrium(dn, 5)) / (2 * h);
    CHECK(omega_parameter_derivative(d, 5) == doctest::Approx(fd).epsilon(1e-7));
  }
  CHECK(omega_parameter_derivative(DomainSpec::plane(), 5) == 0.0);
}

TEST_CASE("conserved quantities at known configurations") {
  const DomainSpec c = DomainSpec::center(2.0);
  Configuration cfg = domain_polygon(c, 3);
  CHECK(angular_impulse(c, cfg) == doctest::Approx(1.5));

  Configuration two;
  two.positions = {{0, 0}, {2, 0}};
  CHECK(hamiltonian(DomainSpec::plane(), two) == doctest::Approx(-0.5 * std::log(4.0)));
  CHECK(angular_impulse(DomainSpec::plane(), two) == doctest::Approx(2.0));

  // the ring of a sphere polygon at the equator carries impulse n/2
  Configuration eq = polygon(4, 1.0);
  CHECK(angular_impulse(DomainSpec::sphere(kPi / 2), eq) == doctest::Approx(2.0));
}

TEST_CASE("polygon is a fixed point of the rotating frame") {
  for (const DomainSpec& d : vortex::test::sample_domains()) {
    for (int n : {3, 5, 6}) {
      const Configuration cfg = domain_polygon(d, n);
      const auto f = rotating_field(d, omega_equilibrium(d, n), cfg);
      CHECK(as_vector(f).lpNorm<Eigen::Infinity>() < 1e-12);
    }
  }
}

TEST_CASE("augmented field formula") {
  std::mt19937 rng(7);
  const DomainSpec d = DomainSpec::disk(2.5);
  const Configuration cfg = vortex::test::jittered_polygon(d, 4, rng);
  const SystemParams p{1.3, 0.7, 0.2, -0.1};
  const VortexField vf(d, 4);
  const Eigen::VectorXd s = cfg.state();
  std::vector<double> V(8), out(8);
  vf.interaction({s.data(), 8}, V);
  vf.field({s.data(), 8}, p, out);
  for (int j = 0; j < 4; ++j) {
    const cplx u{s[2 * j], s[2 * j + 1]}, v{V[2 * j], V[2 * j + 1]};
    const cplx expect = p.T * cplx(p.lambda1, -1) * p.omega * u - p.T * cplx(p.lambda2, -1) * v;
    CHECK(std::abs(cplx(out[2 * j], out[2 * j + 1]) - expect) < 1e-13);
  }
}

TEST_CASE("field Jacobian matches differences in every domain") {
  std::mt19937 rng(11);
  for (const DomainSpec& d : vortex::test::sample_domains()) {
    const int n = 5;
    const Configuration cfg = vortex::test::jittered_polygon(d, n, rng);
    const VortexField vf(d, n, {1.0, 1.0, 1.0, 1.0, 1.2});
    const SystemParams p{omega_equilibrium(d, n), 1.4, 0.03, -0.02};
    const Eigen::VectorXd s = cfg.state();
    auto f = [&](const Eigen::VectorXd& x) {
      Eigen::VectorXd y(x.size());
      vf.field({x.data(), static_cast<std::size_t>(x.size())}, p, {y.data(), static_cast<std::size_t>(y.size())});
      return y;
    };
    Eigen::MatrixXd J(s.size(), s.size());
    vf.field_jacobian({s.data(), static_cast<std::size_t>(s.size())}, p, J);
    CAPTURE(d.name());
    CHECK(vortex::test::relative_error(J, vortex::test::numeric_jacobian(f, s)) < 1e-7);
  }
}

TEST_CASE("circulation and domain derivatives of the interaction") {
  std::mt19937 rng(5);
  const double h = 1e-6;
  for (const DomainSpec& d : {DomainSpec::disk(2.0), DomainSpec::center(0.8), DomainSpec::sphere(1.0)}) {
    const int n = 4;
    const Configuration cfg = vortex::test::jittered_polygon(d, n, rng);
    const Eigen::VectorXd s = cfg.state();
    const auto sz = static_cast<std::size_t>(s.size());
    auto V = [&](const DomainSpec& dom, double kn) {
      const VortexField vf(dom, n, {1.0, 1.0, 1.0, kn});
      Eigen::VectorXd out(s.size());
      vf.interaction({s.data(), sz}, {out.data(), sz});
      return out;
    };
    const VortexField vf(d, n, {1.0, 1.0, 1.0, 1.1});
    Eigen::VectorXd dk(s.size()), dd(s.size());
    vf.interaction_kappa_derivative({s.data(), sz}, {dk.data(), sz});
    vf.interaction_domain_derivative({s.data(), sz}, {dd.data(), sz});
    CHECK((dk - (V(d, 1.1 + h) - V(d, 1.1 - h)) / (2 * h)).norm() < 1e-7);

    DomainSpec up = d, dn = d;
    if (d.kind == DomainKind::Disk) {
      up.R += h;
      dn.R -= h;
    } else if (d.kind == DomainKind::CenterVortex) {
      up.mu += h;
      dn.mu -= h;
    } else {
      CHECK(dd.norm() == 0.0);
      continue;
    }
    CHECK((dd - (V(up, 1.1) - V(dn, 1.1)) / (2 * h)).norm() < 1e-7);
  }
}

TEST_CASE("the two sphere charts describe the same motion") {
  std::mt19937 rng(3);
  const double th = 1.1;
  const DomainSpec north = DomainSpec::sphere(th), south = DomainSpec::sphere(th, Chart::South);
  const double w = omega_equilibrium(north, 5);
  const Configuration q = vortex::test::jittered_polygon(north, 5, rng, 0.3);
  const Configuration p = chart_switch(q);
  const auto fq = rotating_field(north, w, q);
  const auto fp = rotating_field(south, w, p);
  for (int j = 0; j < 5; ++j) {
    const cplx qj = q.positions[j].z();
    const cplx expect = -std::conj(fq[j].z()) / (std::conj(qj) * std::conj(qj));
    CHECK(std::abs(fp[j].z() - expect) < 1e-12 * (1 + std::abs(expect)));
  }
}
