#include <doctest.h>

#include <cmath>
#include <random>

#include "support.hpp"
#include "vortex/bordered_solver.hpp"
#include "vortex/collocation.hpp"
#include "vortex/errors.hpp"

using namespace vortex;
using vortex::test::kPi;

TEST_CASE("Gauss-Legendre rules are exact to degree 2p-1") {
  for (int p = 1; p <= 7; ++p) {
    const GaussRule g = gauss_legendre(p);
    REQUIRE(static_cast<int>(g.nodes.size()) == p);
    for (int k = 0; k <= 2 * p - 1; ++k) {
      double s = 0.0;
      for (int i = 0; i < p; ++i) s += g.weights[i] * std::pow(g.nodes[i], k);
      CHECK(s == doctest::Approx(1.0 / (k + 1)).epsilon(1e-14));
    }
    for (double t : g.nodes) {
      CHECK(t > 0.0);
      CHECK(t < 1.0);
    }
  }
}

TEST_CASE("Lagrange basis identities") {
  for (int p : {2, 4, 6}) {
    const LagrangeBasis b(p);
    for (int k = 0; k <= p; ++k) {
      const Eigen::VectorXd v = b.values(static_cast<double>(k) / p);
      for (int j = 0; j <= p; ++j) CHECK(v[j] == doctest::Approx(j == k ? 1.0 : 0.0));
    }
    for (double tau : {0.13, 0.5, 0.91}) {
      CHECK(b.values(tau).sum() == doctest::Approx(1.0));
      CHECK(std::abs(b.derivatives(tau).sum()) < 1e-11);
      // derivative of tau^2 reproduced exactly
      Eigen::VectorXd sq(p + 1);
      for (int j = 0; j <= p; ++j) sq[j] = std::pow(static_cast<double>(j) / p, 2);
      CHECK(b.derivatives(tau).dot(sq) == doctest::Approx(2 * tau));
    }
    // p-th derivative of tau^p is p!
    Eigen::VectorXd top(p + 1);
    for (int j = 0; j <= p; ++j) top[j] = std::pow(static_cast<double>(j) / p, p);
    CHECK(b.top_derivatives().dot(top) == doctest::Approx(std::tgamma(p + 1.0)));
  }
}

TEST_CASE("mesh bookkeeping") {
  const Mesh m = Mesh::uniform(10, 4);
  CHECK(m.node_count() == 41);
  CHECK(m.node_time(0) == 0.0);
  CHECK(m.node_time(40) == doctest::Approx(1.0));
  CHECK(m.node_time(6) == doctest::Approx(0.15));
  double tau = 0.0;
  CHECK(m.locate(0.37, tau) == 3);
  CHECK(tau == doctest::Approx(0.7));
  // periodic: t = 1 is the start of the first interval
  CHECK(m.locate(1.0, tau) == 0);
  CHECK(tau == doctest::Approx(0.0));
  CHECK(m.node_weights().sum() == doctest::Approx(1.0));
  CHECK(m.gauss_values().rows() == 5);
  CHECK(m.gauss_values().cols() == 4);
  CHECK_THROWS(Mesh({0.0, 0.6, 0.5, 0.7, 0.75, 0.8, 0.85, 0.9, 0.93, 0.96, 1.0}, 3));
  CHECK_THROWS(Mesh::uniform(4, 3));
}

TEST_CASE("piecewise polynomials are reproduced exactly") {
  const Mesh m({0.0, 0.1, 0.15, 0.2, 0.35, 0.4, 0.5, 0.6, 0.8, 0.9, 1.0}, 3);
  Eigen::MatrixXd nodes(2, m.node_count());
  auto f = [](double t) { return Eigen::Vector2d(1 - 2 * t + 3 * t * t * t, t * t); };
  for (int i = 0; i < m.node_count(); ++i) nodes.col(i) = f(m.node_time(i));
  for (double t : {0.0, 0.05, 0.33, 0.62, 0.999}) {
    CHECK((evaluate(m, nodes, t) - f(t)).norm() < 1e-13);
    CHECK((evaluate_derivative(m, nodes, t) - Eigen::Vector2d(-2 + 9 * t * t, 2 * t)).norm() < 1e-11);
  }
}

TEST_CASE("remeshing a periodic signal converges at the polynomial order") {
  auto sample = [](const Mesh& m) {
    Eigen::MatrixXd x(1, m.node_count());
    for (int i = 0; i < m.node_count(); ++i) x(0, i) = std::sin(2 * kPi * m.node_time(i));
    return x;
  };
  auto error = [&](int N) {
    const Mesh from = Mesh::uniform(N, 4);
    const Mesh to = Mesh::uniform(13, 5);
    const Eigen::MatrixXd y = remesh(from, sample(from), to);
    return (y - sample(to)).cwiseAbs().maxCoeff();
  };
  const double e1 = error(12), e2 = error(24);
  CHECK(e1 < 1e-4);
  CHECK(e1 / e2 > 20.0);  // fifth order would give 32
}

namespace {

BlockSystem random_system(int N, int p, int d, int P, std::mt19937& rng) {
  std::normal_distribution<double> g;
  BlockSystem s;
  s.intervals = N;
  s.degree = p;
  s.dim = d;
  s.params = P;
  for (int i = 0; i < N; ++i) {
    Eigen::MatrixXd L(p * d, (p + 1) * d + P);
    for (Eigen::Index r = 0; r < L.rows(); ++r)
      for (Eigen::Index c = 0; c < L.cols(); ++c) L(r, c) = g(rng);
    s.local.push_back(L);
    Eigen::VectorXd b(p * d);
    for (Eigen::Index r = 0; r < b.size(); ++r) b[r] = g(rng);
    s.local_rhs.push_back(b);
  }
  s.border.resize(d + P, s.unknowns());
  s.border_rhs.resize(d + P);
  for (Eigen::Index r = 0; r < s.border.rows(); ++r) {
    for (Eigen::Index c = 0; c < s.border.cols(); ++c) s.border(r, c) = g(rng);
    s.border_rhs[r] = g(rng);
  }
  return s;
}

}  // namespace

TEST_CASE("condensed solve agrees with the dense solve") {
  std::mt19937 rng(1);
  for (auto [N, p, d, P] : {std::tuple{3, 2, 2, 1}, {6, 4, 4, 3}, {10, 3, 6, 2}}) {
    const BlockSystem s = random_system(N, p, d, P, rng);
    REQUIRE(s.equations() == s.unknowns());
    const BlockSolution sol = solve_block_system(s);
    const Eigen::VectorXd ref = s.dense().fullPivLu().solve(s.dense_rhs());
    CHECK((sol.x - ref).norm() < 1e-9 * (1 + ref.norm()));
    CHECK(sol.rcond > 0.0);
  }
}

TEST_CASE("rank-deficient systems: error by default, minimum-norm on request") {
  std::mt19937 rng(2);
  BlockSystem s = random_system(5, 3, 4, 2, rng);
  // duplicate border equation leaves one direction undetermined
  s.border.row(s.border.rows() - 1) = s.border.row(0);
  s.border_rhs[s.border.rows() - 1] = s.border_rhs[0];
  CHECK_THROWS_AS(solve_block_system(s, 1e-12), SingularJacobianError);
  const BlockSolution sol = solve_block_system(s, 1e-15, 1e-10);
  CHECK((s.dense() * sol.x - s.dense_rhs()).norm() < 1e-8);
}
