#pragma once

#include <memory>
#include <vector>

#include <Eigen/Dense>

namespace vortex {

// Gauss-Legendre nodes and weights on [0, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
GaussRule gauss_legendre(int points);

// Lagrange basis of degree p on the equispaced local nodes k/p, k = 0..p.
class LagrangeBasis {
 public:
  explicit LagrangeBasis(int degree);
  int degree() const { return p_; }
  // Values (or first derivatives) of all p+1 basis polynomials at tau.
  Eigen::VectorXd values(double tau) const;
  Eigen::VectorXd derivatives(double tau) const;
  // p-th derivatives (constants).
  const Eigen::VectorXd& top_derivatives() const { return top_; }

 private:
  int p_;
  std::vector<double> nodes_;
  std::vector<double> denom_;
  Eigen::VectorXd top_;
};

// Piecewise-polynomial mesh on [0, 1]: N intervals, degree p.
class Mesh {
 public:
  Mesh() = default;
  Mesh(std::vector<double> boundaries, int degree);
  static Mesh uniform(int intervals, int degree);

  int intervals() const { return static_cast<int>(t_.size()) - 1; }
  int degree() const { return p_; }
  int node_count() const { return intervals() * p_ + 1; }
  const std::vector<double>& boundaries() const { return t_; }
  double h(int i) const { return t_[static_cast<std::size_t>(i) + 1] - t_[static_cast<std::size_t>(i)]; }
  // Time of global node index (i p + k).
  double node_time(int node) const;
  // Interval containing t in [0, 1] and the local coordinate.
  int locate(double t, double& tau) const;
  // Trapezoid-like weights of the nodes for L2 inner products.
  Eigen::VectorXd node_weights() const;

  const GaussRule& gauss() const { return gauss_; }
  const LagrangeBasis& basis() const { return *basis_; }
  // Basis values and derivatives at the Gauss points: (p+1) x p.
  const Eigen::MatrixXd& gauss_values() const { return gv_; }
  const Eigen::MatrixXd& gauss_derivatives() const { return gd_; }

 private:
  void build();
  std::vector<double> t_;
  int p_ = 4;
  GaussRule gauss_;
  std::shared_ptr<LagrangeBasis> basis_;
  Eigen::MatrixXd gv_, gd_;
};

// Evaluation helpers for node arrays (dim x node_count) on a mesh.
Eigen::VectorXd evaluate(const Mesh& mesh, const Eigen::MatrixXd& nodes, double t);
Eigen::VectorXd evaluate_derivative(const Mesh& mesh, const Eigen::MatrixXd& nodes, double t);
// Interpolate a periodic solution onto another mesh.
Eigen::MatrixXd remesh(const Mesh& from, const Eigen::MatrixXd& nodes, const Mesh& to);

}  // namespace vortex
