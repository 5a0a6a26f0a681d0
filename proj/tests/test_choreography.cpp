#include <doctest.h>

#include <cmath>

#include "support.hpp"
#include "vortex/choreography.hpp"
#include "vortex/errors.hpp"

using namespace vortex;
using vortex::test::kPi;

namespace {

// Exact choreography with the rotational symmetry an l:m orbit carries: the
// curve only contains harmonics p = l (mod m) of the m T period, and vortex j
// runs it j shift T / n ahead.
ChoreographyPaths synthetic(const ResonanceSpec& spec, int spp) {
  const double T = 1.0;
  ChoreographyPaths p;
  p.T = T;
  p.periods = spec.m;
  p.omega = 2 * kPi * spec.l / (spec.m * T);
  auto q = [&](double t) {
    const double th = 2 * kPi * t / (spec.m * T);
    return std::polar(1.0, spec.l * th) + 0.3 * std::polar(1.0, (spec.l - spec.m) * th) +
           0.1 * std::polar(1.0, (spec.l + spec.m) * th);
  };
  const int total = spec.m * spp;
  for (int i = 0; i < total; ++i) p.times.push_back(i * T / spp);
  p.paths.resize(static_cast<std::size_t>(spec.n));
  p.rotating.resize(static_cast<std::size_t>(spec.n));
  for (int j = 1; j <= spec.n; ++j) {
    const double lead = j == spec.n ? 0.0 : static_cast<double>(j) * spec.shift * T / spec.n;
    for (double t : p.times) {
      const cplx z = q(t + lead);
      p.paths[static_cast<std::size_t>(j - 1)].push_back(z);
      p.rotating[static_cast<std::size_t>(j - 1)].push_back(std::polar(1.0, -p.omega * t) * z);
    }
  }
  return p;
}

std::vector<cplx> circle(int turns, int samples, cplx center = 0.0, double r = 1.0) {
  std::vector<cplx> v;
  for (int i = 0; i < samples; ++i) v.push_back(center + std::polar(r, 2 * kPi * turns * i / samples));
  return v;
}

}  // namespace

TEST_CASE("modular inverse") {
  CHECK(modular_inverse(9, 8) == 1);
  CHECK(modular_inverse(3, 7) == 5);
  CHECK(modular_inverse(-33, 26) == 11);
  CHECK(modular_inverse(5, 1) == 0);
  CHECK_THROWS_AS(modular_inverse(4, 6), NotResonantError);
}

TEST_CASE("resonance arithmetic") {
  const ResonanceSpec a = resonance_data(2, 9, 8, 5);
  CHECK(a.l_star == 1);
  CHECK(a.d == 1);
  CHECK(a.k_tilde >= 0);
  CHECK(a.k_tilde < 5);
  CHECK(a.shift == ((2 - 10 * 1) % 40 + 40) % 40);
  CHECK(a.k_tilde == a.shift % 5);

  const ResonanceSpec b = resonance_data(3, -33, 26, 5);
  CHECK(b.l_star == 11);
  CHECK(b.shift >= 0);
  CHECK(b.shift < 130);

  const ResonanceSpec c = resonance_data(2, 3, 1, 5);
  CHECK(c.l_star == 0);
  CHECK(c.shift == 2);

  CHECK(resonance_data(5, 6, 5, 5).d == 5);
}

TEST_CASE("non-resonant ratios are rejected") {
  CHECK_THROWS_AS(resonance_data(2, 6, 4, 5), NotResonantError);
  CHECK_THROWS_AS(resonance_data(2, 5, 3, 5), NotResonantError);
  CHECK_THROWS_AS(resonance_data(2, 5, 0, 5), NotResonantError);
  CHECK_THROWS_AS(resonance_data(7, 1, 1, 5), PreconditionError);
}

TEST_CASE("trigonometric interpolation") {
  std::vector<cplx> s;
  const int N = 32;
  auto f = [](double x) { return std::polar(1.0, 3 * x) + cplx(0.5, 0.0) * std::polar(1.0, -2 * x) + 0.25; };
  for (int i = 0; i < N; ++i) s.push_back(f(2 * kPi * i / N));
  const PeriodicInterpolant p(s);
  for (double pos : {0.0, 0.37, 5.5, 31.9, -3.25})
    CHECK(std::abs(p(pos) - f(2 * kPi * pos / N)) < 1e-13);
  const std::vector<cplx> shifted = p.shifted(4.0);
  for (int i = 0; i < N; ++i) CHECK(std::abs(shifted[i] - s[(i + 4) % N]) < 1e-13);
}

TEST_CASE("winding numbers") {
  CHECK(winding_number(circle(1, 64)) == 1);
  CHECK(winding_number(circle(-3, 200)) == -3);
  CHECK(winding_number(circle(2, 200, {5.0, 0.0}), {5.0, 0.0}) == 2);
  CHECK(winding_number(circle(1, 64, {5.0, 0.0})) == 0);
  CHECK_THROWS_AS(winding_number(circle(9, 20)), PreconditionError);
  CHECK_THROWS_AS(winding_number(circle(1, 64), {1.0, 0.0}), SingularInputError);
  CHECK(std::abs(centroid(circle(1, 64, {2.0, -1.0}))) == doctest::Approx(std::sqrt(5.0)));
}

TEST_CASE("an exact choreography verifies") {
  for (auto [k, l, m, n] : {std::tuple{2, 9, 8, 5}, {3, -33, 26, 5}, {2, 3, 1, 5}, {4, 11, 4, 5}}) {
    const ResonanceSpec spec = resonance_data(k, l, m, n);
    const ChoreographyPaths p = synthetic(spec, 64);
    const ChoreographyReport r = verify_choreography(p, spec);
    CAPTURE(l);
    CHECK(r.residual < 1e-10);
    CHECK(r.closure < 1e-10);
    CHECK(r.full);
    CHECK(rotation_symmetry_residual(p, spec) < 1e-10);
    CHECK(winding_number(p.paths.back()) == l);
  }
}

TEST_CASE("a broken choreography is detected") {
  const ResonanceSpec spec = resonance_data(2, 9, 8, 5);
  ChoreographyPaths p = synthetic(spec, 64);
  for (cplx& z : p.paths[1]) z += 1e-3;
  CHECK(verify_choreography(p, spec).residual == doctest::Approx(1e-3).epsilon(1e-6));
}
