#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "vortex/bvp.hpp"
#include "vortex/equilibria.hpp"
#include "vortex/floquet.hpp"

namespace vortex {

struct LyapunovStart {
  PeriodicOrbit orbit;  // predictor (uncorrected)
  cplx eigenvalue;
  Eigen::VectorXcd eigenvector;  // phase-normalized
  double scale = 0.0;            // multiplier applied to the eigenvector
};

// Predictor u(t) = u_eq + eps Re(e^{2 pi i t} w) with T = 2 pi / Im(lambda).
// eps is chosen so that the amplitude of the predictor is amplitude_step^2.
// The eigenvector phase is rotated so that vortex n starts on the x-axis,
// displaced towards the origin. Throws MustPerturbError for a non-simple
// eigenvalue.
LyapunovStart branch_from_equilibrium(const Equilibrium& eq, int eigen_index, double amplitude_step,
                                      const Mesh& mesh);
// Index of the eigenvalue with positive imaginary part closest to i*frequency.
int find_mode(const Equilibrium& eq, double frequency);

struct StopConditions {
  std::optional<std::pair<Param, double>> target;
  int max_steps = 2000;
  double min_distance = 1e-3;
  double max_position = 10.0;
  std::optional<double> max_amplitude;
  std::optional<double> rho_min;
  std::optional<double> rho_max;
};

struct Schedule {
  ConstraintSet constraints;
  std::vector<Param> free;
  StopConditions stop;
  Param direction = Param::Amplitude;  // initial tangent orientation
  int direction_sign = +1;
  double initial_step = 0.02;
  double min_step = 1e-5;
  double max_step = 0.5;
  int adapt_every = 0;  // mesh adaptation period in steps (0 = never)
  bool floquet = true;
  std::vector<std::pair<int, int>> resonances;  // refined while continuing
  bool stop_when_resonances_found = false;
  // Parameter values refined and recorded as Target events without stopping.
  std::vector<std::pair<Param, double>> waypoints;
  std::string label;
};

struct BranchPoint {
  PeriodicOrbit orbit;
  double arclength = 0.0;
  double T = 0.0, T0 = 0.0, rho = 0.0, A = 0.0;
  double max_floquet = 0.0;
  bool stable = false;
  std::vector<cplx> multipliers;  // decreasing magnitude; empty without Floquet
  int iterations = 0;
  double residual = 0.0;
};

struct Event {
  enum class Kind { Resonance, StabilityChange, Fold, Target };
  Kind kind = Kind::Target;
  int l = 0, m = 0;
  Param param = Param::Amplitude;
  double value = 0.0;
  int after = 0;  // index of the bracketing point before the event
  BranchPoint point;
  double test = 0.0;
};

std::string to_string(Event::Kind k);

enum class StopReason {
  Target,
  MaxSteps,
  Collision,
  PositionBound,
  AmplitudeBound,
  RhoBound,
  DomainLimit,
  StepUnderflow,
  ResonancesFound
};

std::string to_string(StopReason r);

struct Branch {
  std::vector<BranchPoint> points;
  std::vector<Event> events;
  StopReason stop = StopReason::MaxSteps;
  std::string stop_message;
  int k = 0;  // symmetry index, 0 when not assigned
  ConstraintSet constraints;
  std::vector<Param> free;
  std::string provenance;
};

// Continuation progress callback (optional diagnostics).
using ProgressFn = std::function<void(const Branch&)>;

// Monitored scalars and Floquet data for a converged orbit.
BranchPoint make_point(const PeriodicOrbit& orbit, bool floquet, double arclength = 0.0);

// Correct a predictor at fixed amplitude (the phase reference is the
// predictor itself), then return the converged first point.
PeriodicOrbit correct_start(const LyapunovStart& start, const ConstraintSet& constraints,
                            const std::vector<Param>& free, const SolverOptions& options = {});

Branch continue_branch(const PeriodicOrbit& start, const Schedule& schedule,
                       const ProgressFn& progress = {});

// Refine the point where rho = l/m between two bracketing branch points.
Event detect_resonance(const Branch& branch, int l, int m);

struct ResonanceCandidate {
  int l = 0, m = 0;
  int after = 0;  // bracketing step (after, after+1)
};

std::vector<ResonanceCandidate> enumerate_resonances(const Branch& branch, int k, int n, int m_max,
                                                     int l_max);

// Max over vortices and sample times of |u_j(t) - e^{2 pi i j/n} u_n(t + j k/n)|
// on the ring (centre excluded).
double symmetry_residual(const PeriodicOrbit& orbit, int k, int samples = 64);
// k in 1..n minimizing the symmetry residual.
int symmetry_index(const PeriodicOrbit& orbit, double* residual = nullptr);

// Sphere chart switch of an orbit: maps every node through q -> 1/conj(q),
// flips the chart tag and the reference configuration.
PeriodicOrbit switch_chart(const PeriodicOrbit& orbit);

// Packed weights of the arclength inner product.
Eigen::VectorXd arclength_weights(const PeriodicOrbit& orbit, const std::vector<Param>& free);

}  // namespace vortex
