#include "vortex/collocation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "vortex/errors.hpp"

namespace vortex {

GaussRule gauss_legendre(int points) {
  if (points < 1) throw PreconditionError("Gauss rule needs at least one point");
  // Golub-Welsch: eigenvalues of the symmetric Jacobi matrix of the Legendre
  // recurrence are the nodes on [-1, 1].
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(points, points);
  for (int k = 1; k < points; ++k) {
    const double b = k / std::sqrt(4.0 * k * k - 1.0);
    J(k, k - 1) = b;
    J(k - 1, k) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  GaussRule r;
  for (int k = 0; k < points; ++k) {
    // polish with Newton on P_n for full accuracy
    double x = es.eigenvalues()[k];
    double dp = 1.0;
    for (int it = 0; it < 3; ++it) {
      double p0 = 1.0, p1 = x;
      for (int m = 2; m <= points; ++m) {
        const double p2 = ((2.0 * m - 1.0) * x * p1 - (m - 1.0) * p0) / m;
        p0 = p1;
        p1 = p2;
      }
      dp = points * (x * p1 - p0) / (x * x - 1.0);
      x -= p1 / dp;
    }
    r.nodes.push_back(0.5 * (x + 1.0));
    r.weights.push_back(1.0 / ((1.0 - x * x) * dp * dp));
  }
  return r;
}

LagrangeBasis::LagrangeBasis(int degree) : p_(degree) {
  if (degree < 1) throw PreconditionError("polynomial degree must be positive");
  for (int k = 0; k <= p_; ++k) nodes_.push_back(static_cast<double>(k) / p_);
  for (int k = 0; k <= p_; ++k) {
    double d = 1.0;
    for (int m = 0; m <= p_; ++m)
      if (m != k) d *= nodes_[static_cast<std::size_t>(k)] - nodes_[static_cast<std::size_t>(m)];
    denom_.push_back(d);
  }
  // p-th derivative of l_k is p! / denom_k.
  double fact = 1.0;
  for (int m = 2; m <= p_; ++m) fact *= m;
  top_.resize(p_ + 1);
  for (int k = 0; k <= p_; ++k) top_[k] = fact / denom_[static_cast<std::size_t>(k)];
}

Eigen::VectorXd LagrangeBasis::values(double tau) const {
  Eigen::VectorXd v(p_ + 1);
  for (int k = 0; k <= p_; ++k) {
    double num = 1.0;
    for (int m = 0; m <= p_; ++m)
      if (m != k) num *= tau - nodes_[static_cast<std::size_t>(m)];
    v[k] = num / denom_[static_cast<std::size_t>(k)];
  }
  return v;
}

Eigen::VectorXd LagrangeBasis::derivatives(double tau) const {
  Eigen::VectorXd v(p_ + 1);
  for (int k = 0; k <= p_; ++k) {
    double sum = 0.0;
    for (int q = 0; q <= p_; ++q) {
      if (q == k) continue;
      double prod = 1.0;
      for (int m = 0; m <= p_; ++m)
        if (m != k && m != q) prod *= tau - nodes_[static_cast<std::size_t>(m)];
      sum += prod;
    }
    v[k] = sum / denom_[static_cast<std::size_t>(k)];
  }
  return v;
}

Mesh::Mesh(std::vector<double> boundaries, int degree) : t_(std::move(boundaries)), p_(degree) {
  if (p_ < 3 || p_ > 7) throw PreconditionError("collocation degree must lie in 3..7");
  if (t_.size() < 11) throw PreconditionError("mesh needs at least 10 intervals");
  if (std::abs(t_.front()) > 1e-15 || std::abs(t_.back() - 1.0) > 1e-15)
    throw PreconditionError("mesh must span [0, 1]");
  t_.front() = 0.0;
  t_.back() = 1.0;
  for (std::size_t i = 1; i < t_.size(); ++i)
    if (!(t_[i] > t_[i - 1])) throw PreconditionError("mesh boundaries must increase strictly");
  build();
}

Mesh Mesh::uniform(int intervals, int degree) {
  std::vector<double> t(static_cast<std::size_t>(intervals) + 1);
  for (int i = 0; i <= intervals; ++i) t[static_cast<std::size_t>(i)] = static_cast<double>(i) / intervals;
  return Mesh(std::move(t), degree);
}

void Mesh::build() {
  gauss_ = gauss_legendre(p_);
  basis_ = std::make_shared<LagrangeBasis>(p_);
  gv_.resize(p_ + 1, p_);
  gd_.resize(p_ + 1, p_);
  for (int c = 0; c < p_; ++c) {
    gv_.col(c) = basis_->values(gauss_.nodes[static_cast<std::size_t>(c)]);
    gd_.col(c) = basis_->derivatives(gauss_.nodes[static_cast<std::size_t>(c)]);
  }
}

double Mesh::node_time(int node) const {
  const int i = std::min(node / p_, intervals() - 1);
  const int k = node - i * p_;
  return t_[static_cast<std::size_t>(i)] + h(i) * k / p_;
}

int Mesh::locate(double t, double& tau) const {
  t -= std::floor(t);
  auto it = std::upper_bound(t_.begin(), t_.end(), t);
  int i = static_cast<int>(it - t_.begin()) - 1;
  i = std::clamp(i, 0, intervals() - 1);
  tau = (t - t_[static_cast<std::size_t>(i)]) / h(i);
  return i;
}

Eigen::VectorXd Mesh::node_weights() const {
  // Exact quadrature of the interpolant: integrate each basis function with
  // the Gauss rule.
  Eigen::VectorXd w = Eigen::VectorXd::Zero(node_count());
  Eigen::VectorXd local = Eigen::VectorXd::Zero(p_ + 1);
  for (int c = 0; c < p_; ++c) local += gauss_.weights[static_cast<std::size_t>(c)] * gv_.col(c);
  for (int i = 0; i < intervals(); ++i) w.segment(i * p_, p_ + 1) += h(i) * local;
  return w;
}

Eigen::VectorXd evaluate(const Mesh& mesh, const Eigen::MatrixXd& nodes, double t) {
  double tau = 0.0;
  const int i = mesh.locate(t, tau);
  const int p = mesh.degree();
  return nodes.middleCols(i * p, p + 1) * mesh.basis().values(tau);
}

Eigen::VectorXd evaluate_derivative(const Mesh& mesh, const Eigen::MatrixXd& nodes, double t) {
  double tau = 0.0;
  const int i = mesh.locate(t, tau);
  const int p = mesh.degree();
  return nodes.middleCols(i * p, p + 1) * mesh.basis().derivatives(tau) / mesh.h(i);
}

Eigen::MatrixXd remesh(const Mesh& from, const Eigen::MatrixXd& nodes, const Mesh& to) {
  Eigen::MatrixXd out(nodes.rows(), to.node_count());
  for (int k = 0; k + 1 < to.node_count(); ++k) out.col(k) = evaluate(from, nodes, to.node_time(k));
  out.col(to.node_count() - 1) = nodes.col(nodes.cols() - 1);
  return out;
}

}  // namespace vortex
