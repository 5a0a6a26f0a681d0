#pragma once

#include <vector>

#include <Eigen/Dense>

#include "vortex/domain.hpp"

namespace vortex {

struct Eigenpair {
  cplx value;
  Eigen::VectorXcd vector;  // unit 2-norm, real-coordinate layout of the state
};

struct Equilibrium {
  DomainSpec domain;
  Configuration config;  // circulations always populated (ring only)
  double omega = 0.0;
  double lambda1 = 0.0;
  double kappa_n = 1.0;
  std::vector<Eigenpair> spectrum;  // sorted by decreasing imaginary part
  Eigen::MatrixXd jacobian;         // field Jacobian at (config, omega, lambda1)
  double residual = 0.0;

  int n() const { return config.n(); }
  std::vector<cplx> eigenvalues() const;
};

// Frequencies nu_k = sqrt(s_k (2 omega - s_k)), s_k = k(n-k)/2, k = 1..n-1.
// Modes with a negative radicand are listed in `unstable_k` instead.
struct NormalModes {
  int n = 0;
  double omega = 0.0;
  std::vector<int> k;
  std::vector<double> s;
  std::vector<double> nu;
  std::vector<int> unstable_k;
};

NormalModes normal_modes(int n, double omega);

// Regular polygon u_j = radius e^{2 pi i j / n}, j = 1..n (vortex n on the
// positive real axis).
Configuration polygon(int n, double radius);
// Polygon placed for `domain`: stereographic radius on the sphere and a
// central vortex at the origin for the center domain.
Configuration domain_polygon(const DomainSpec& domain, int n);

struct NewtonOptions {
  int max_iterations = 25;
  double tolerance = 1e-10;
  int max_halvings = 8;
};

// Newton solve of the stationary augmented equations plus Im u_n = 0 for the
// positions and lambda1, with circulation kappa_n on vortex n.
Equilibrium solve_equilibrium(const DomainSpec& domain, const Configuration& guess,
                              double kappa_n = 1.0, const NewtonOptions& options = {});

// Natural-parameter continuation in kappa_n with secant predictor.
Equilibrium continue_equilibrium_in_kappa(const DomainSpec& domain, const Equilibrium& start,
                                          double kappa_target, double max_step = 0.02,
                                          const NewtonOptions& options = {});

// Equilibrium near `guess` at circulation kappa_n, with the derivative of its
// state with respect to kappa_n.
struct EquilibriumSensitivity {
  Configuration config;
  Eigen::VectorXd d_kappa;
};
EquilibriumSensitivity equilibrium_sensitivity(const DomainSpec& domain, const Configuration& guess,
                                               double kappa_n);

// Eigen-decomposition of a real square matrix, sorted by decreasing
// imaginary part and then decreasing real part.
std::vector<Eigenpair> eigenpairs(const Eigen::MatrixXd& m);

struct SpectrumTolerances {
  double imaginary_axis = 1e-8;
  double multiplicity = 1e-6;
  double zero = 1e-6;
};

struct ImaginaryPair {
  double frequency = 0.0;  // positive imaginary part
  int multiplicity = 0;
};

struct SpectrumClassification {
  std::vector<ImaginaryPair> imaginary;  // decreasing frequency
  int zero_multiplicity = 0;
  bool near_zero_real_pair = false;  // zero cluster split into +-epsilon reals
  std::vector<cplx> unstable;        // off-axis eigenvalues outside the zero cluster
};

SpectrumClassification classify_spectrum(const std::vector<cplx>& spectrum,
                                          const SpectrumTolerances& tol = {});

}  // namespace vortex
