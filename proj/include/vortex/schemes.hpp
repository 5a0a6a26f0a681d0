#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "vortex/continuation.hpp"
#include "vortex/equilibria.hpp"
#include "vortex/errors.hpp"

namespace vortex {

// Failure inside a multi-stage scheme; the message names the stage.
class StageError : public VortexError {
 public:
  StageError(std::string stage, const std::string& what)
      : VortexError(stage + ": " + what), stage_(std::move(stage)) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

struct SchemeOptions {
  int intervals = 50;
  int degree = 4;
  double amplitude_step = 0.01;  // amplitude of the Lyapunov predictor
  double initial_step = 0.02;
  double min_step = 1e-5;
  double max_step = 0.5;
  int adapt_every = 5;
  int max_steps = 2000;
  // Located resonant orbits are re-solved on a mesh with this many times
  // more intervals before their Floquet multipliers are reported.
  int polish_factor = 2;
  int polish_degree = 6;
};

struct ResonantOrbit {
  int l = 0, m = 1;
  BranchPoint point;  // polished
  double arclength = 0.0;
  int stage = 0;
};

struct SchemeResult {
  std::vector<Branch> stages;
  std::vector<ResonantOrbit> resonances;  // first crossing of each requested pair
  std::vector<Event> waypoints;           // refined Target events of the last stage
  int k = 0;                              // symmetry index of the final family
  const Branch& final_branch() const { return stages.back(); }
};

struct ThreeStageConfig {
  int n = 5;
  double mode = 0.0;              // frequency of the Lyapunov mode at the start
  double kappa_perturbed = 1.2;   // ignored when the mode is simple at kappa_n = 1
  // A multiple mode splits under the perturbation; this picks the branch of
  // the split by its frequency at kappa_perturbed (default: nearest to `mode`).
  std::optional<double> perturbed_mode;
  double amplitude_target = 1e-2;
  std::vector<std::pair<int, int>> resonances;
  std::optional<double> max_amplitude;
  std::optional<double> rho_min, rho_max;
  int stage3_steps = 2000;
  bool degenerate = false;  // see ConstraintSet::degenerate
};

// Equilibrium, optional kappa_n perturbation, Lyapunov family to the
// amplitude target, return to kappa_n = 1 at fixed amplitude and the
// family of the unperturbed problem.
SchemeResult run_three_stage(const DomainSpec& domain, const ThreeStageConfig& config,
                             const SchemeOptions& options = {});

struct FixedRnConfig {
  int n = 5;
  double mode = 0.0;
  double r_n_target = 0.2;
  double R_stop = 1.0;  // lower bound for the continuation in R
  std::vector<std::pair<int, int>> resonances;
};

// Disk: Lyapunov family with the axis pinning of vortex n until r_n reaches
// its target, then continuation in R at fixed r_n.
SchemeResult run_fixed_rn(const DomainSpec& disk, const FixedRnConfig& config,
                          const SchemeOptions& options = {});

struct FixedResonanceConfig {
  int l = 0, m = 1;
  Param moving = Param::CenterCirculation;
  double target = 0.0;             // end value of the moving parameter
  std::vector<double> waypoints;   // intermediate values to record
};

// Continuation of a resonant orbit with T = (l/m) T0 imposed while the
// domain parameter moves.
SchemeResult run_fixed_resonance(const PeriodicOrbit& seed, const FixedResonanceConfig& config,
                                 const SchemeOptions& options = {});

// Re-solve a resonant orbit with the resonance imposed, every interval split
// into `factor` pieces and collocation degree `degree`.
BranchPoint polish_resonant(const PeriodicOrbit& orbit, const ConstraintSet& constraints,
                            const std::vector<Param>& free, int l, int m, int factor, int degree);

}  // namespace vortex
