#include "vortex/schemes.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "vortex/errors.hpp"

namespace vortex {

namespace {

Schedule base_schedule(const SchemeOptions& opt, std::string label) {
  Schedule s;
  s.initial_step = opt.initial_step;
  s.min_step = opt.min_step;
  s.max_step = opt.max_step;
  s.adapt_every = opt.adapt_every;
  s.stop.max_steps = opt.max_steps;
  s.label = std::move(label);
  return s;
}

template <class F>
auto in_stage(const std::string& stage, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(stage, e.what());
  }
}

void require_target(const Branch& b, const std::string& stage) {
  if (b.stop != StopReason::Target) throw StageError(stage, "target not reached (" + b.stop_message + ")");
}

Mesh refined(const Mesh& m, int factor, int degree) {
  std::vector<double> b;
  const auto& old = m.boundaries();
  for (std::size_t i = 0; i + 1 < old.size(); ++i)
    for (int k = 0; k < factor; ++k) b.push_back(old[i] + (old[i + 1] - old[i]) * k / factor);
  b.push_back(1.0);
  return Mesh(b, degree);
}

BranchPoint polish(const PeriodicOrbit& orbit, const ConstraintSet& cs, const std::vector<Param>& free,
                   const ExtraEquation& extra, int factor, int degree) {
  PeriodicOrbit o = orbit;
  if (factor > 1 || degree != orbit.mesh.degree()) {
    const Mesh fine = refined(orbit.mesh, factor, degree);
    o.nodes = remesh(orbit.mesh, orbit.nodes, fine);
    o.mesh = fine;
  }
  o.phase_reference = PhaseReference{orbit.mesh, orbit.nodes};
  SolverOptions so;
  so.tolerance = 1e-10;
  so.max_iterations = 20;
  CollocationSystem(cs, free).solve(o, extra, so);
  return make_point(o, true);
}

// First located crossing of every requested pair, polished.
std::vector<ResonantOrbit> collect(const Branch& b, const std::vector<std::pair<int, int>>& wanted,
                                   int stage, const SchemeOptions& opt) {
  std::vector<ResonantOrbit> out;
  for (const auto& [l, m] : wanted) {
    const auto it = std::find_if(b.events.begin(), b.events.end(), [&](const Event& e) {
      return e.kind == Event::Kind::Resonance && e.l == l && e.m == m;
    });
    if (it == b.events.end()) continue;
    ResonantOrbit r;
    r.l = l;
    r.m = m;
    r.stage = stage;
    r.arclength = it->point.arclength;
    try {
      r.point = polish_resonant(it->point.orbit, b.constraints, b.free, l, m, opt.polish_factor,
                                opt.polish_degree);
    } catch (const VortexError&) {
      r.point = it->point;  // keep the unpolished orbit
    }
    r.point.arclength = it->point.arclength;
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace

BranchPoint polish_resonant(const PeriodicOrbit& orbit, const ConstraintSet& constraints,
                            const std::vector<Param>& free, int l, int m, int factor, int degree) {
  ExtraEquation e;
  e.kind = ExtraEquation::Kind::ResonanceRatio;
  e.ratio = static_cast<double>(l) / m;
  return polish(orbit, constraints, free, e, factor, degree);
}

SchemeResult run_three_stage(const DomainSpec& domain, const ThreeStageConfig& cfg,
                             const SchemeOptions& opt) {
  SchemeResult res;
  const Mesh mesh = Mesh::uniform(opt.intervals, opt.degree);
  const Equilibrium eq = in_stage("equilibrium", [&] {
    return solve_equilibrium(domain, domain_polygon(domain, cfg.n), 1.0);
  });

  // A simple mode needs no perturbation.
  bool simple = true;
  {
    const int idx = in_stage("equilibrium", [&] { return find_mode(eq, cfg.mode); });
    for (std::size_t i = 0; i < eq.spectrum.size(); ++i)
      if (static_cast<int>(i) != idx && std::abs(eq.spectrum[i].value - eq.spectrum[static_cast<std::size_t>(idx)].value) < 1e-6)
        simple = false;
  }

  const std::vector<Param> amp_free{Param::Amplitude, Param::Period, Param::Lambda1, Param::Lambda2};
  ConstraintSet cs;
  cs.degenerate = cfg.degenerate;
  PeriodicOrbit start;

  if (!simple) {
    const Equilibrium pert = in_stage("perturbation", [&] {
      return continue_equilibrium_in_kappa(domain, eq, cfg.kappa_perturbed);
    });
    const PeriodicOrbit first = in_stage("stage 1", [&] {
      const LyapunovStart ls = branch_from_equilibrium(pert, find_mode(pert, cfg.perturbed_mode.value_or(cfg.mode)), opt.amplitude_step, mesh);
      return correct_start(ls, cs, amp_free);
    });
    Schedule s1 = base_schedule(opt, "stage 1");
    s1.constraints = cs;
    s1.free = amp_free;
    s1.stop.target = std::make_pair(Param::Amplitude, cfg.amplitude_target);
    s1.direction_sign = first.A < cfg.amplitude_target ? 1 : -1;
    res.stages.push_back(in_stage("stage 1", [&] { return continue_branch(first, s1); }));
    require_target(res.stages.back(), "stage 1");

    Schedule s2 = base_schedule(opt, "stage 2");
    s2.constraints = cs;
    s2.constraints.amplitude = AmplitudeMode::Fixed;
    s2.free = {Param::KappaN, Param::Period, Param::Lambda1, Param::Lambda2};
    s2.direction = Param::KappaN;
    s2.direction_sign = cfg.kappa_perturbed > 1.0 ? -1 : 1;
    s2.stop.target = std::make_pair(Param::KappaN, 1.0);
    res.stages.push_back(in_stage("stage 2", [&] { return continue_branch(res.stages.back().points.back().orbit, s2); }));
    require_target(res.stages.back(), "stage 2");
    start = res.stages.back().points.back().orbit;
    start.kappa_n = 1.0;
  } else {
    start = in_stage("stage 1", [&] {
      const LyapunovStart ls = branch_from_equilibrium(eq, find_mode(eq, cfg.mode), opt.amplitude_step, mesh);
      return correct_start(ls, cs, amp_free);
    });
  }

  Schedule s3 = base_schedule(opt, "stage 3");
  s3.constraints = cs;
  s3.free = amp_free;
  s3.stop.max_steps = cfg.stage3_steps;
  s3.stop.max_amplitude = cfg.max_amplitude;
  s3.stop.rho_min = cfg.rho_min;
  s3.stop.rho_max = cfg.rho_max;
  s3.resonances = cfg.resonances;
  s3.stop_when_resonances_found = !cfg.resonances.empty();
  Branch b3 = in_stage("stage 3", [&] { return continue_branch(start, s3); });
  if (b3.points.size() > 1) b3.k = symmetry_index(b3.points[1].orbit);
  res.k = b3.k;
  res.stages.push_back(std::move(b3));
  res.resonances = collect(res.stages.back(), cfg.resonances, 3, opt);
  return res;
}

SchemeResult run_fixed_rn(const DomainSpec& disk, const FixedRnConfig& cfg, const SchemeOptions& opt) {
  if (disk.kind != DomainKind::Disk) throw PreconditionError("the fixed-r_n scheme needs a disk domain");
  SchemeResult res;
  const Mesh mesh = Mesh::uniform(opt.intervals, opt.degree);
  ConstraintSet cs;
  cs.phase = PhaseKind::AxisPinning;
  const std::vector<Param> rn_free{Param::PinRadius, Param::Amplitude, Param::Period, Param::Lambda1,
                                   Param::Lambda2};
  const PeriodicOrbit first = in_stage("stage 1", [&] {
    const Equilibrium eq = solve_equilibrium(disk, domain_polygon(disk, cfg.n), 1.0);
    const LyapunovStart ls = branch_from_equilibrium(eq, find_mode(eq, cfg.mode), opt.amplitude_step, mesh);
    return correct_start(ls, cs, rn_free);
  });

  PeriodicOrbit seed = first;
  if (std::abs(first.r_n - cfg.r_n_target) > 1e-12) {
    Schedule s1 = base_schedule(opt, "stage 1");
    s1.constraints = cs;
    s1.free = rn_free;
    s1.direction = Param::PinRadius;
    s1.direction_sign = cfg.r_n_target < first.r_n ? -1 : 1;
    s1.stop.target = std::make_pair(Param::PinRadius, cfg.r_n_target);
    res.stages.push_back(in_stage("stage 1", [&] { return continue_branch(first, s1); }));
    require_target(res.stages.back(), "stage 1");
    seed = res.stages.back().points.back().orbit;
  }

  Schedule s2 = base_schedule(opt, "stage 2");
  s2.constraints = cs;
  s2.free = {Param::DiskRadius, Param::Amplitude, Param::Period, Param::Lambda1, Param::Lambda2};
  s2.direction = Param::DiskRadius;
  s2.direction_sign = cfg.R_stop < disk.R ? -1 : 1;
  s2.stop.target = std::make_pair(Param::DiskRadius, cfg.R_stop);
  s2.resonances = cfg.resonances;
  s2.stop_when_resonances_found = !cfg.resonances.empty();
  Branch b2 = in_stage("stage 2", [&] { return continue_branch(seed, s2); });
  if (b2.points.size() > 1) b2.k = symmetry_index(b2.points[1].orbit);
  res.k = b2.k;
  res.stages.push_back(std::move(b2));
  res.resonances = collect(res.stages.back(), cfg.resonances, 2, opt);
  return res;
}

SchemeResult run_fixed_resonance(const PeriodicOrbit& seed, const FixedResonanceConfig& cfg,
                                 const SchemeOptions& opt) {
  if (cfg.m <= 0 || std::gcd(cfg.l, cfg.m) != 1)
    throw NotResonantError("fixed resonance needs coprime l, m with m > 0");
  const auto dp = domain_param(seed.domain.kind);
  if (!dp || *dp != cfg.moving)
    throw PreconditionError("moving parameter " + to_string(cfg.moving) + " does not belong to the " +
                            seed.domain.name() + " domain");
  const double ratio = static_cast<double>(cfg.l) / cfg.m;
  if (std::abs(seed.rho() - ratio) > 1e-10)
    throw PreconditionError("seed orbit is not " + std::to_string(cfg.l) + ":" + std::to_string(cfg.m) +
                            " resonant (rho = " + std::to_string(seed.rho()) + ")");
  SchemeResult res;
  ConstraintSet cs;
  cs.resonance = std::make_pair(cfg.l, cfg.m);
  Schedule s = base_schedule(opt, "fixed resonance");
  s.constraints = cs;
  s.free = {cfg.moving, Param::Amplitude, Param::Period, Param::Lambda1, Param::Lambda2};
  s.direction = cfg.moving;
  s.direction_sign = cfg.target < seed.get(cfg.moving) ? -1 : 1;
  s.stop.target = std::make_pair(cfg.moving, cfg.target);
  for (double w : cfg.waypoints) s.waypoints.emplace_back(cfg.moving, w);
  Branch b = in_stage("fixed resonance", [&] { return continue_branch(seed, s); });
  b.k = symmetry_index(seed);
  res.k = b.k;

  // The seed, every waypoint and the end point are reported, re-solved on the
  // refined mesh at their parameter value.
  auto at_value = [&](const PeriodicOrbit& o, double v) {
    ExtraEquation e;
    e.kind = ExtraEquation::Kind::ParamValue;
    e.param = cfg.moving;
    e.value = v;
    ResonantOrbit r;
    r.l = cfg.l;
    r.m = cfg.m;
    r.stage = 1;
    try {
      r.point = polish(o, cs, s.free, e, opt.polish_factor, opt.polish_degree);
    } catch (const VortexError&) {
      r.point = make_point(o, true);
    }
    return r;
  };
  res.resonances.push_back(at_value(b.points.front().orbit, seed.get(cfg.moving)));
  for (const Event& e : b.events)
    if (e.kind == Event::Kind::Target && e.value != cfg.target) {
      res.waypoints.push_back(e);
      res.resonances.push_back(at_value(e.point.orbit, e.value));
    }
  if (b.stop == StopReason::Target) res.resonances.push_back(at_value(b.points.back().orbit, cfg.target));
  for (ResonantOrbit& r : res.resonances) r.arclength = r.point.arclength;
  res.stages.push_back(std::move(b));
  return res;
}

}  // namespace vortex
