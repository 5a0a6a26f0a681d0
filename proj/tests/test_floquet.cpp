#include <doctest.h>

#include <cmath>

#include "support.hpp"
#include "vortex/floquet.hpp"

using namespace vortex;

namespace {

Eigen::MatrixXd rotation(double a) {
  Eigen::MatrixXd r(2, 2);
  r << std::cos(a), -std::sin(a), std::sin(a), std::cos(a);
  return r;
}

// Block-diagonal symplectic map: hyperbolic pair (s, 1/s), an elliptic
// rotation and a trivial Jordan block, conjugated by a random well-conditioned
// change of basis.
Eigen::MatrixXd symplectic_like(double s, double angle, unsigned seed) {
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(6, 6);
  D(0, 0) = s;
  D(1, 1) = 1.0 / s;
  D.block(2, 2, 2, 2) = rotation(angle);
  D(4, 4) = 1.0;
  D(4, 5) = 0.7;
  D(5, 5) = 1.0;
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-0.3, 0.3);
  Eigen::MatrixXd P = Eigen::MatrixXd::Identity(6, 6);
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) P(i, j) += u(rng);
  return P * D * P.inverse();
}

}  // namespace

TEST_CASE("multipliers are sorted and classified") {
  const FloquetSpectrum f = multipliers(symplectic_like(3.0, 0.4, 1));
  REQUIRE(f.multipliers.size() == 6);
  CHECK(std::abs(f.multipliers.front()) == doctest::Approx(3.0));
  for (std::size_t i = 1; i < 6; ++i) CHECK(std::abs(f.multipliers[i]) <= std::abs(f.multipliers[i - 1]) + 1e-12);
  CHECK(f.max_magnitude == doctest::Approx(3.0));
  CHECK_FALSE(f.stable);
  CHECK(classify(f) == Stability::Unstable);
  CHECK(f.trivial_cluster_size == 2);
  CHECK(std::string(to_string(Stability::Unstable)) == "U");
}

TEST_CASE("stability threshold") {
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(2, 2);
  m(0, 0) = 1.0 + 5e-6;
  m(1, 1) = 1.0 / m(0, 0);
  CHECK(multipliers(m).stable);
  m(0, 0) = 1.0 + 2e-4;
  m(1, 1) = 1.0 / m(0, 0);
  CHECK_FALSE(multipliers(m).stable);
}

TEST_CASE("a split trivial cluster does not decide stability") {
  // Jordan block at 1 perturbed into 1 +- 4e-5
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(4, 4);
  m(0, 0) = 1.0 + 4e-5;
  m(1, 1) = 1.0 / m(0, 0);
  m.block(2, 2, 2, 2) = rotation(0.5);
  const FloquetSpectrum f = multipliers(m);
  CHECK(f.trivial_cluster_size == 2);
  CHECK(f.max_magnitude > kStabilityThreshold);
  CHECK(f.stable);
  m(2, 2) *= 1.01;
  CHECK_FALSE(multipliers(m).stable);
}

TEST_CASE("pairing defects") {
  const PairingDefects ok = pairing_defects({{4.0, 0}, {0.25, 0}, {0, 1}, {0, -1}, {1, 0}, {1, 0}});
  CHECK(ok.pairing < 1e-15);
  CHECK(ok.product < 1e-15);
  const PairingDefects bad = pairing_defects({{4.0, 0}, {0.2, 0}});
  CHECK(bad.pairing == doctest::Approx(0.2));
  CHECK(bad.product == doctest::Approx(0.2));
}

TEST_CASE("factored multipliers resolve strongly hyperbolic products") {
  // 40 factors whose product stretches by 1e14: every factor is the same
  // conjugated hyperbolic map, so the exact multipliers are known.
  const double s = std::pow(1e14, 1.0 / 40);
  const Eigen::MatrixXd F = symplectic_like(s, 0.05, 2);
  const std::vector<Eigen::MatrixXd> factors(40, F);
  Eigen::MatrixXd M = Eigen::MatrixXd::Identity(6, 6);
  for (const auto& f : factors) M = f * M;

  const FloquetSpectrum lifted = multipliers(factors);
  REQUIRE(lifted.multipliers.size() == 6);
  CHECK(lifted.max_magnitude == doctest::Approx(1e14).epsilon(1e-8));
  CHECK(std::abs(lifted.multipliers.back()) == doctest::Approx(1e-14).epsilon(1e-6));
  const PairingDefects pd = pairing_defects(lifted.multipliers);
  CHECK(pd.pairing < 1e-8);
  CHECK(pd.product < 1e-8);
  CHECK(lifted.trivial_cluster_size == 2);

  // the assembled product loses the small multiplier entirely
  CHECK(pairing_defects(multipliers(M).multipliers).pairing > 1e-3);
}

TEST_CASE("mild products take the direct path") {
  const std::vector<Eigen::MatrixXd> factors(10, symplectic_like(1.1, 0.3, 3));
  Eigen::MatrixXd M = Eigen::MatrixXd::Identity(6, 6);
  for (const auto& f : factors) M = f * M;
  const FloquetSpectrum a = multipliers(factors), b = multipliers(M);
  CHECK(a.max_magnitude == doctest::Approx(b.max_magnitude).epsilon(1e-12));
}
