#pragma once

#include <vector>

#include <Eigen/Dense>

#include "vortex/domain.hpp"

namespace vortex {

inline constexpr double kStabilityThreshold = 1.0 + 1e-5;

// The symmetry and the first integrals put Jordan blocks at 1 in every
// monodromy matrix. Rounding and discretization split those blocks by roughly
// the square root of the perturbation, which can exceed the stability
// threshold, so multipliers within the trivial tolerance of 1 are left out of
// the stability decision (but not out of max_magnitude).
struct FloquetSpectrum {
  std::vector<cplx> multipliers;  // sorted by decreasing magnitude
  int trivial_cluster_size = 0;   // multipliers within the trivial tolerance of 1
  double max_magnitude = 0.0;
  bool stable = false;
};

enum class Stability { Stable, Unstable };

FloquetSpectrum multipliers(const Eigen::MatrixXd& monodromy, double trivial_tolerance = 1e-4);

// Multipliers of the product factors.back() * ... * factors.front(). When the
// product grows past 1e3 the eigenvalues come from the block-cyclic lifting
// of grouped factors, whose K-th powers are the multipliers; this keeps the
// small multipliers and the unit cluster accurate where the eigenvalues of
// the assembled product are swamped by its largest direction.
FloquetSpectrum multipliers(const std::vector<Eigen::MatrixXd>& factors, double trivial_tolerance = 1e-4);

// Deviations from the symplectic structure of a multiplier set: the largest
// |mu nu - 1| over a reciprocal matching, and |prod mu - 1|.
struct PairingDefects {
  double pairing = 0.0;
  double product = 0.0;
};
PairingDefects pairing_defects(const std::vector<cplx>& multipliers);
Stability classify(const FloquetSpectrum& spectrum);
const char* to_string(Stability s);

}  // namespace vortex
