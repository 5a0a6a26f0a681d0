#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "vortex/collocation.hpp"
#include "vortex/domain.hpp"
#include "vortex/dynamics.hpp"

namespace vortex {

// Scalar unknowns that a continuation schedule may free.
enum class Param {
  Amplitude,
  Period,
  Lambda1,
  Lambda2,
  KappaN,
  DiskRadius,
  CenterCirculation,
  SphereAngle,
  PinRadius
};

std::string to_string(Param p);
Param param_from_string(const std::string& s);
// The physical parameter of a domain (R, mu or theta); nullopt for the plane.
std::optional<Param> domain_param(DomainKind kind);

// Derivative of the orbit at the Gauss points of a previous solution, used by
// the integral phase condition. Stored per vortex-n component.
struct PhaseReference {
  Mesh mesh;
  Eigen::MatrixXd nodes;  // dim x node_count
};

struct PeriodicOrbit {
  DomainSpec domain;
  int n = 0;
  Mesh mesh;
  Eigen::MatrixXd nodes;  // dim x node_count, columns are states at node times
  double T = 1.0;
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double A = 0.0;
  double kappa_n = 1.0;
  double r_n = 0.0;  // pinning value of Re u_n(0)
  Configuration reference_config;  // u^0 of the amplitude integral
  std::optional<PhaseReference> phase_reference;

  int dim() const { return state_dim(domain, n); }
  double get(Param p) const;
  void set(Param p, double value);
  double omega() const { return omega_equilibrium(domain, n); }
  double T0() const { return rotating_period(domain, n); }
  double rho() const { return T / T0(); }
  std::vector<double> circulations() const;
  SystemParams system_params() const { return {omega(), T, lambda1, lambda2}; }

  Eigen::VectorXd state(double t) const { return evaluate(mesh, nodes, t); }
  Eigen::VectorXd derivative(double t) const { return evaluate_derivative(mesh, nodes, t); }
  // Constant orbit sitting at a configuration.
  static PeriodicOrbit constant(const DomainSpec& domain, const Configuration& config,
                                double T, const Mesh& mesh);
};

enum class PhaseKind { Integral, AxisPinning };
enum class AmplitudeMode { Monitored, Fixed };

struct ConstraintSet {
  PhaseKind phase = PhaseKind::Integral;
  bool rotation_removal = true;
  AmplitudeMode amplitude = AmplitudeMode::Monitored;
  std::optional<std::pair<int, int>> resonance;  // (l, m): T = (l/m) T0
  // The orbits carry symmetries beyond the unfolded ones (rigid rotations of
  // the sphere at integer rho), so the Jacobian is rank deficient along the
  // whole family; linear solves then take minimum-norm steps.
  bool degenerate = false;

  int scalar_count() const;
};

// One extra scalar equation appended to the system (continuation equation or
// event refinement).
struct ExtraEquation {
  enum class Kind { Linear, ParamValue, ResonanceRatio };
  Kind kind = Kind::Linear;
  // Linear: row . (x - x0) - rhs over the packed unknown vector.
  Eigen::VectorXd row;
  Eigen::VectorXd x0;
  double rhs = 0.0;
  // ParamValue: param - value.
  Param param = Param::Amplitude;
  double value = 0.0;
  // ResonanceRatio: T - ratio * T0(domain param).
  double ratio = 0.0;
};

struct SolverOptions {
  double tolerance = 1e-9;       // max-norm of the residual
  double step_tolerance = 1e-11; // max-norm of the Newton update
  int max_iterations = 12;
  int max_halvings = 6;
  double min_rcond = 1e-15;
};

struct NewtonReport {
  int iterations = 0;
  double residual = 0.0;
  double rcond = 0.0;
};

// Packed unknown vector: node states column-major, then free parameters.
Eigen::VectorXd pack(const PeriodicOrbit& orbit, const std::vector<Param>& free);
void unpack(const Eigen::VectorXd& x, const std::vector<Param>& free, PeriodicOrbit& orbit);

// Collocation discretization of the augmented equations together with the
// periodicity and scalar constraints.
class CollocationSystem {
 public:
  CollocationSystem(ConstraintSet constraints, std::vector<Param> free);

  const ConstraintSet& constraints() const { return constraints_; }
  const std::vector<Param>& free() const { return free_; }

  // Collocation defects (dim per Gauss point), periodicity, scalar constraints.
  Eigen::VectorXd residual(const PeriodicOrbit& orbit) const;
  // Residual with an extra equation appended.
  Eigen::VectorXd residual(const PeriodicOrbit& orbit, const ExtraEquation& extra) const;

  // Newton correction. With `extra` the system is square when the free
  // parameter count is scalar_count()+1, otherwise it must equal scalar_count().
  NewtonReport solve(PeriodicOrbit& orbit, const std::optional<ExtraEquation>& extra = {},
                     const SolverOptions& options = {}) const;

  // Null vector of the Jacobian (unit in the weighted norm, oriented along
  // `previous` when given); the free count must be scalar_count()+1.
  Eigen::VectorXd tangent(const PeriodicOrbit& orbit, const Eigen::VectorXd& weights,
                          const Eigen::VectorXd* previous = nullptr) const;

  // Gradient row of the extra equation over the packed unknowns.
  Eigen::VectorXd extra_row(const PeriodicOrbit& orbit, const ExtraEquation& extra) const;
  double extra_value(const PeriodicOrbit& orbit, const ExtraEquation& extra) const;

 private:
  ConstraintSet constraints_;
  std::vector<Param> free_;
};

NewtonReport newton_solve(PeriodicOrbit& orbit, const ConstraintSet& constraints,
                          const std::vector<Param>& free, const SolverOptions& options = {});

// Sum over ring vortices of the time average of |u_j - u_j^0|^2.
double amplitude(const PeriodicOrbit& orbit);

// Phase condition value Re int u_n conj(d/dt u~_n) against the stored reference.
double phase_integral(const PeriodicOrbit& orbit);

// Set the phase reference to the orbit itself.
void freeze_phase_reference(PeriodicOrbit& orbit);

struct MeshAdaptOptions {
  double uniform_weight = 0.1;  // fraction of the mean monitor added as floor
};

// Redistribute the mesh to equidistribute an interpolation-error monitor and
// re-solve.
PeriodicOrbit adapt_mesh(const PeriodicOrbit& orbit, const ConstraintSet& constraints,
                         const std::vector<Param>& free, const MeshAdaptOptions& options = {},
                         const SolverOptions& solver = {});
// Only the redistributed boundaries.
std::vector<double> equidistributed_boundaries(const PeriodicOrbit& orbit,
                                               const MeshAdaptOptions& options = {});

// Monodromy matrix of the rotating-frame field (lambda = 0) along the orbit.
Eigen::MatrixXd monodromy(const PeriodicOrbit& orbit);
// The same as a product of per-interval transfer matrices, first interval
// first. Strongly unstable orbits need the factors for accurate multipliers.
std::vector<Eigen::MatrixXd> monodromy_factors(const PeriodicOrbit& orbit);

// Largest deviation of u_n from the periodicity and constraint set; used for
// precondition checks.
double max_residual(const PeriodicOrbit& orbit, const ConstraintSet& constraints,
                    const std::vector<Param>& free);

}  // namespace vortex
