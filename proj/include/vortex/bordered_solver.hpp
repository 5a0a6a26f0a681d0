#pragma once

#include <vector>

#include <Eigen/Dense>

namespace vortex {

// Linear system of a collocation discretization:
//   N interval blocks, each with p*d rows over the p+1 consecutive node
//   states of its interval plus P trailing parameter columns, and
//   g dense border rows over the full unknown vector
//   [node_0 .. node_{Np} (d each), params (P)].
struct BlockSystem {
  int intervals = 0;
  int degree = 0;
  int dim = 0;
  int params = 0;
  std::vector<Eigen::MatrixXd> local;      // (p d) x ((p+1) d + P)
  std::vector<Eigen::VectorXd> local_rhs;  // p d
  Eigen::MatrixXd border;                  // g x unknowns()
  Eigen::VectorXd border_rhs;

  int node_count() const { return intervals * degree + 1; }
  int unknowns() const { return node_count() * dim + params; }
  int equations() const { return intervals * degree * dim + static_cast<int>(border.rows()); }
  // Assembled dense matrix (tests and diagnostics).
  Eigen::MatrixXd dense() const;
  Eigen::VectorXd dense_rhs() const;
};

struct BlockSolution {
  Eigen::VectorXd x;
  double rcond = 0.0;
};

// Eliminates the interval-interior unknowns with per-interval QR, solves the
// reduced (boundary nodes + parameters) system by LU and back-substitutes.
// Throws SingularJacobianError when the reduced system's reciprocal
// condition estimate falls below `min_rcond`. When `least_squares_below` is
// positive and the estimate is under it, the reduced system is instead solved
// in the minimum-norm least-squares sense (rank-deficient problems with
// continuous families of solutions); the rank threshold is relative 1e-10.
BlockSolution solve_block_system(const BlockSystem& sys, double min_rcond = 1e-15,
                                 double least_squares_below = 0.0);

// Transfer matrices node_{(i+1)p} = M_i node_{ip} of the homogeneous interval
// equations (parameter columns ignored).
std::vector<Eigen::MatrixXd> interval_transfers(const BlockSystem& sys);

}  // namespace vortex
