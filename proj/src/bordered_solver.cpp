#include "vortex/bordered_solver.hpp"

#include <cmath>
#include <string>

#include "vortex/errors.hpp"

namespace vortex {

Eigen::MatrixXd BlockSystem::dense() const {
  const int d = dim, p = degree, P = params;
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(equations(), unknowns());
  const int pcol = node_count() * d;
  for (int i = 0; i < intervals; ++i) {
    const auto& L = local[static_cast<std::size_t>(i)];
    M.block(i * p * d, i * p * d, p * d, (p + 1) * d) = L.leftCols((p + 1) * d);
    if (P > 0) M.block(i * p * d, pcol, p * d, P) = L.rightCols(P);
  }
  M.bottomRows(border.rows()) = border;
  return M;
}

Eigen::VectorXd BlockSystem::dense_rhs() const {
  const int blk = degree * dim;
  Eigen::VectorXd r(equations());
  for (int i = 0; i < intervals; ++i) r.segment(i * blk, blk) = local_rhs[static_cast<std::size_t>(i)];
  r.tail(border_rhs.size()) = border_rhs;
  return r;
}

namespace {

struct Condensed {
  // delta_int = a + SL dL + SR dR + SP dP
  Eigen::VectorXd a;
  Eigen::MatrixXd SL, SR, SP;
  // reduced rows: BL dL + BR dR + BP dP = b
  Eigen::MatrixXd BL, BR, BP;
  Eigen::VectorXd b;
};

Condensed condense(const BlockSystem& sys, int i) {
  const int d = sys.dim, p = sys.degree, P = sys.params;
  const int ni = (p - 1) * d;
  const auto& L = sys.local[static_cast<std::size_t>(i)];
  const Eigen::HouseholderQR<Eigen::MatrixXd> qr(L.middleCols(d, ni));
  Eigen::MatrixXd other(p * d, 2 * d + P + 1);
  other << L.leftCols(d), L.middleCols(p * d, d), L.rightCols(P),
      sys.local_rhs[static_cast<std::size_t>(i)];
  other.applyOnTheLeft(qr.householderQ().transpose());
  const auto R1 = qr.matrixQR().topLeftCorner(ni, ni).triangularView<Eigen::Upper>();
  const Eigen::MatrixXd top = R1.solve(other.topRows(ni));
  Condensed c;
  c.SL = -top.leftCols(d);
  c.SR = -top.middleCols(d, d);
  c.SP = -top.middleCols(2 * d, P);
  c.a = top.col(2 * d + P);
  c.BL = other.bottomRows(d).leftCols(d);
  c.BR = other.bottomRows(d).middleCols(d, d);
  c.BP = other.bottomRows(d).middleCols(2 * d, P);
  c.b = other.bottomRows(d).col(2 * d + P);
  return c;
}

}  // namespace

BlockSolution solve_block_system(const BlockSystem& sys, double min_rcond, double least_squares_below) {
  const int d = sys.dim, p = sys.degree, P = sys.params, N = sys.intervals;
  const int g = static_cast<int>(sys.border.rows());
  const int nr = (N + 1) * d + P;
  if (N * d + g != nr)
    throw PreconditionError("collocation system is not square: " + std::to_string(N * d + g) +
                            " reduced equations for " + std::to_string(nr) + " unknowns");
  const int pcol = (N + 1) * d;

  std::vector<Condensed> cs;
  cs.reserve(static_cast<std::size_t>(N));
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(nr, nr);
  Eigen::VectorXd r(nr);
  for (int i = 0; i < N; ++i) {
    cs.push_back(condense(sys, i));
    const Condensed& c = cs.back();
    M.block(i * d, i * d, d, d) = c.BL;
    M.block(i * d, (i + 1) * d, d, d) = c.BR;
    if (P > 0) M.block(i * d, pcol, d, P) = c.BP;
    r.segment(i * d, d) = c.b;
  }
  const int row0 = N * d;
  r.tail(g) = sys.border_rhs;
  if (P > 0) M.block(row0, pcol, g, P) = sys.border.rightCols(P);
  for (int i = 0; i <= N; ++i) M.block(row0, i * d, g, d) += sys.border.middleCols(i * p * d, d);
  for (int i = 0; i < N; ++i) {
    const Eigen::MatrixXd Gi = sys.border.middleCols((i * p + 1) * d, (p - 1) * d);
    if (Gi.isZero(0.0)) continue;
    const Condensed& c = cs[static_cast<std::size_t>(i)];
    M.block(row0, i * d, g, d) += Gi * c.SL;
    M.block(row0, (i + 1) * d, g, d) += Gi * c.SR;
    if (P > 0) M.block(row0, pcol, g, P) += Gi * c.SP;
    r.tail(g) -= Gi * c.a;
  }

  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(M);
  BlockSolution out;
  out.rcond = lu.rcond();
  Eigen::VectorXd y;
  if (least_squares_below > 0.0 && !(out.rcond >= least_squares_below)) {
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod;
    cod.setThreshold(1e-10);
    cod.compute(M);
    y = cod.solve(r);
  } else {
    if (!(out.rcond >= min_rcond))
      throw SingularJacobianError("singular collocation Jacobian (rcond " + std::to_string(out.rcond) + ")",
                                  out.rcond);
    y = lu.solve(r);
  }

  out.x.resize(sys.unknowns());
  const Eigen::VectorXd dP = y.tail(P);
  for (int i = 0; i < N; ++i) {
    const Condensed& c = cs[static_cast<std::size_t>(i)];
    const auto dL = y.segment(i * d, d);
    const auto dR = y.segment((i + 1) * d, d);
    out.x.segment(i * p * d, d) = dL;
    Eigen::VectorXd inner = c.a + c.SL * dL + c.SR * dR;
    if (P > 0) inner += c.SP * dP;
    out.x.segment((i * p + 1) * d, (p - 1) * d) = inner;
  }
  out.x.segment(N * p * d, d) = y.segment(N * d, d);
  out.x.tail(P) = dP;
  if (!out.x.allFinite())
    throw SingularJacobianError("non-finite collocation update", out.rcond);
  return out;
}

std::vector<Eigen::MatrixXd> interval_transfers(const BlockSystem& sys) {
  std::vector<Eigen::MatrixXd> out;
  out.reserve(static_cast<std::size_t>(sys.intervals));
  for (int i = 0; i < sys.intervals; ++i) {
    const Condensed c = condense(sys, i);
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(c.BR);
    out.push_back(-lu.solve(c.BL));
  }
  return out;
}

}  // namespace vortex
