#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "vortex/domain.hpp"

namespace vortex {

// Rotating-frame frequency, time rescaling and unfolding parameters of the
// augmented field
//   du_j/dt = T (lambda1 - i) omega u_j - T (lambda2 - i) V_j(u),
// where V is the domain's interaction term. With lambda1 = lambda2 = 0 and
// T = 1 this is the rotating-frame equation of motion.
struct SystemParams {
  double omega = 0.0;
  double T = 1.0;
  double lambda1 = 0.0;
  double lambda2 = 0.0;
};

// Frequency of the polygonal relative equilibrium.
//   plane (n-1)/2, disk n/(1-R^-2n) - (n+1)/2, center mu + (n-1)/2,
//   sphere ((n-1)/2)(1-r^4)/(4r^2) with r = cot(theta/2).
double omega_equilibrium(const DomainSpec& domain, int n);
// d omega / d(domain parameter): R, mu or theta. Zero for the plane.
double omega_parameter_derivative(const DomainSpec& domain, int n);
// Period of the rotating frame, 2 pi / omega (signed; infinite at omega = 0).
double rotating_period(const DomainSpec& domain, int n);

// Evaluator for one domain with fixed circulations. State vectors use the
// flat layout of Configuration::state(). Stateless after construction, so a
// single instance may be shared between threads.
class VortexField {
 public:
  VortexField(const DomainSpec& domain, int n, std::vector<double> ring_circulations = {});

  const DomainSpec& domain() const { return domain_; }
  int n() const { return n_; }
  int dim() const { return dim_; }
  double kappa(int j) const { return kappa_[static_cast<std::size_t>(j)]; }

  // Interaction term V (complex per vortex, stored as real pairs).
  void interaction(std::span<const double> state, std::span<double> out) const;
  // Real dim x dim Jacobian of V.
  void interaction_jacobian(std::span<const double> state, Eigen::Ref<Eigen::MatrixXd> out) const;
  // dV / d kappa_n.
  void interaction_kappa_derivative(std::span<const double> state, std::span<double> out) const;
  // Explicit dV / dR (disk) or dV / dmu (center); zero for the other domains
  // (their parameter enters only through omega).
  void interaction_domain_derivative(std::span<const double> state, std::span<double> out) const;

  // Batched interaction over the columns of `states` (dim x B) using the
  // SIMD kernels.
  void interaction_batch(const Eigen::MatrixXd& states, Eigen::MatrixXd& out) const;

  void field(std::span<const double> state, const SystemParams& p, std::span<double> out) const;
  void field_jacobian(std::span<const double> state, const SystemParams& p,
                      Eigen::Ref<Eigen::MatrixXd> out) const;
  // Assemble the field from a precomputed interaction value.
  void field_from_interaction(std::span<const double> state, std::span<const double> V,
                              const SystemParams& p, std::span<double> out) const;

 private:
  DomainSpec domain_;
  int n_;
  int dim_;
  std::vector<double> kappa_;  // ring circulations, plus mu for the center
  double sign_ = 1.0;          // -1 for the south sphere chart
};

double hamiltonian(const DomainSpec& domain, const Configuration& config);
double angular_impulse(const DomainSpec& domain, const Configuration& config);

// du/dt of the rotating-frame equations (lambda = 0, T = 1). The central
// vortex, when present, is the last entry.
std::vector<Point> rotating_field(const DomainSpec& domain, double omega,
                                  const Configuration& config);
std::vector<Point> augmented_field(const DomainSpec& domain, const SystemParams& params,
                                   const Configuration& config);
Eigen::MatrixXd field_jacobian(const DomainSpec& domain, double omega,
                               const Configuration& config);

// Reflection across the circle of radius R: R^2 / conj(q).
Point image_vortex(Point q, double R);

// Inverse stereographic projection onto the unit sphere. In the south chart
// the z coordinate is negated so both charts describe the same sphere point.
Eigen::Vector3d sphere_lift(Point q, Chart chart = Chart::North);

// Antipodal chart map q -> 1/conj(q) applied to every vortex.
Configuration chart_switch(const Configuration& config);
Chart opposite(Chart chart);

}  // namespace vortex
