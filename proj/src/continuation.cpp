#include "vortex/continuation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "vortex/errors.hpp"

namespace vortex {

std::string to_string(Event::Kind k) {
  switch (k) {
    case Event::Kind::Resonance: return "resonance";
    case Event::Kind::StabilityChange: return "stability-change";
    case Event::Kind::Fold: return "fold";
    case Event::Kind::Target: return "target";
  }
  return "?";
}

std::string to_string(StopReason r) {
  switch (r) {
    case StopReason::Target: return "target reached";
    case StopReason::MaxSteps: return "maximum number of steps";
    case StopReason::Collision: return "vortex collision";
    case StopReason::PositionBound: return "position bound";
    case StopReason::AmplitudeBound: return "amplitude bound";
    case StopReason::RhoBound: return "resonance-ratio bound";
    case StopReason::DomainLimit: return "domain parameter limit";
    case StopReason::StepUnderflow: return "step-size underflow";
    case StopReason::ResonancesFound: return "all requested resonances located";
  }
  return "?";
}

int find_mode(const Equilibrium& eq, double frequency) {
  int best = -1;
  double err = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < eq.spectrum.size(); ++i) {
    const cplx v = eq.spectrum[i].value;
    if (v.imag() <= 0.0) continue;
    const double e = std::abs(v.imag() - frequency) + std::abs(v.real());
    if (e < err) {
      err = e;
      best = static_cast<int>(i);
    }
  }
  if (best < 0) throw NotFoundError("no eigenvalue with positive imaginary part");
  return best;
}

LyapunovStart branch_from_equilibrium(const Equilibrium& eq, int eigen_index, double amplitude_step,
                                      const Mesh& mesh) {
  if (eigen_index < 0 || eigen_index >= static_cast<int>(eq.spectrum.size()))
    throw PreconditionError("eigenvalue index out of range");
  const Eigenpair& ep = eq.spectrum[static_cast<std::size_t>(eigen_index)];
  if (!(ep.value.imag() > 0.0) || std::abs(ep.value.real()) > 1e-8)
    throw PreconditionError("Lyapunov start needs a purely imaginary eigenvalue with positive imaginary part");
  for (std::size_t i = 0; i < eq.spectrum.size(); ++i) {
    if (static_cast<int>(i) == eigen_index) continue;
    if (std::abs(eq.spectrum[i].value - ep.value) < 1e-6)
      throw MustPerturbError("eigenvalue " + std::to_string(ep.value.imag()) +
                             "i is not simple; perturb the circulation kappa_n first");
  }
  const int n = eq.n();
  const int a = 2 * (n - 1);
  Eigen::VectorXcd w = ep.vector;
  // Rotate the phase so that vortex n is displaced along the x-axis towards
  // the origin at t = 0.
  cplx rot = 1.0;
  if (std::abs(w[a + 1]) > 1e-12 * w.norm())
    rot = std::polar(1.0, 0.5 * std::numbers::pi - std::arg(w[a + 1]));
  else
    rot = std::polar(1.0, -std::arg(w[a]));
  w *= rot;
  if ((w[a].real() > 0.0) == (eq.config.positions.back().x > 0.0)) w = -w;

  LyapunovStart s;
  s.eigenvalue = ep.value;
  const double ring = w.head(2 * n).norm();
  s.scale = amplitude_step * std::sqrt(2.0) / ring;
  s.eigenvector = w;
  const double T = 2.0 * std::numbers::pi / ep.value.imag();
  PeriodicOrbit o = PeriodicOrbit::constant(eq.domain, eq.config, T, mesh);
  o.kappa_n = eq.kappa_n;
  o.lambda1 = eq.lambda1;
  for (int k = 0; k < mesh.node_count(); ++k) {
    const cplx e = std::polar(1.0, 2.0 * std::numbers::pi * mesh.node_time(k));
    o.nodes.col(k) += s.scale * (e * w).real();
  }
  o.nodes.col(mesh.node_count() - 1) = o.nodes.col(0);
  o.A = amplitude(o);
  o.r_n = o.nodes(a, 0);
  freeze_phase_reference(o);
  s.orbit = std::move(o);
  return s;
}

PeriodicOrbit correct_start(const LyapunovStart& start, const ConstraintSet& constraints,
                            const std::vector<Param>& free, const SolverOptions& options) {
  PeriodicOrbit o = start.orbit;
  const CollocationSystem sys(constraints, free);
  ExtraEquation e;
  e.kind = ExtraEquation::Kind::ParamValue;
  e.param = Param::Amplitude;
  e.value = o.A;
  if (std::find(free.begin(), free.end(), Param::Amplitude) == free.end())
    throw PreconditionError("branch start needs the amplitude as a free parameter");
  sys.solve(o, e, options);
  return o;
}

BranchPoint make_point(const PeriodicOrbit& orbit, bool floquet, double arclength) {
  BranchPoint p;
  p.orbit = orbit;
  p.orbit.phase_reference.reset();
  p.arclength = arclength;
  p.T = orbit.T;
  p.T0 = orbit.T0();
  p.rho = orbit.rho();
  p.A = orbit.A;
  p.max_floquet = std::numeric_limits<double>::quiet_NaN();
  if (floquet) {
    try {
      const FloquetSpectrum fs = multipliers(monodromy_factors(orbit));
      p.max_floquet = fs.max_magnitude;
      p.stable = fs.stable;
      p.multipliers = fs.multipliers;
    } catch (const VortexError&) {
    }
  }
  return p;
}

Eigen::VectorXd arclength_weights(const PeriodicOrbit& orbit, const std::vector<Param>& free) {
  const int d = orbit.dim();
  const Eigen::VectorXd nw = orbit.mesh.node_weights();
  Eigen::VectorXd w(orbit.nodes.size() + static_cast<Eigen::Index>(free.size()));
  for (Eigen::Index k = 0; k < nw.size(); ++k) w.segment(k * d, d).setConstant(nw[k]);
  for (std::size_t k = 0; k < free.size(); ++k) {
    const double v = std::max(1.0, std::abs(orbit.get(free[k])));
    w[orbit.nodes.size() + static_cast<Eigen::Index>(k)] = 1.0 / (v * v);
  }
  return w;
}

PeriodicOrbit switch_chart(const PeriodicOrbit& orbit) {
  if (orbit.domain.kind != DomainKind::Sphere) throw PreconditionError("chart switch needs a sphere orbit");
  PeriodicOrbit o = orbit;
  auto flip = [&](Eigen::MatrixXd& nodes) {
    for (Eigen::Index c = 0; c < nodes.cols(); ++c)
      for (int j = 0; j < o.n; ++j) {
        const double x = nodes(2 * j, c), y = nodes(2 * j + 1, c);
        const double r2 = x * x + y * y;
        if (r2 < 1e-300) throw SingularInputError("vortex at the projection pole");
        nodes(2 * j, c) = x / r2;
        nodes(2 * j + 1, c) = y / r2;
      }
  };
  flip(o.nodes);
  if (o.phase_reference) flip(o.phase_reference->nodes);
  o.reference_config = chart_switch(o.reference_config);
  o.domain.chart = opposite(o.domain.chart);
  return o;
}

namespace {

Eigen::VectorXd remesh_packed(const Eigen::VectorXd& v, const PeriodicOrbit& from, const Mesh& to,
                              std::size_t nfree) {
  const int d = from.dim();
  const Eigen::Map<const Eigen::MatrixXd> nodes(v.data(), d, from.mesh.node_count());
  const Eigen::MatrixXd rn = remesh(from.mesh, nodes, to);
  Eigen::VectorXd out(rn.size() + static_cast<Eigen::Index>(nfree));
  out.head(rn.size()) = Eigen::Map<const Eigen::VectorXd>(rn.data(), rn.size());
  out.tail(static_cast<Eigen::Index>(nfree)) = v.tail(static_cast<Eigen::Index>(nfree));
  return out;
}

double max_abs_position(const PeriodicOrbit& o) {
  double m = 0.0;
  for (Eigen::Index c = 0; c < o.nodes.cols(); ++c)
    for (int j = 0; j < o.n; ++j) m = std::max(m, std::hypot(o.nodes(2 * j, c), o.nodes(2 * j + 1, c)));
  return m;
}

double min_distance(const PeriodicOrbit& o) {
  double m = std::numeric_limits<double>::infinity();
  const bool wc = o.domain.has_center();
  for (Eigen::Index c = 0; c < o.nodes.cols(); ++c)
    m = std::min(m, min_pairwise_distance(o.n, wc, {o.nodes.col(c).data(), static_cast<std::size_t>(o.dim())}));
  if (o.domain.kind == DomainKind::Disk)
    m = std::min(m, o.domain.R - max_abs_position(o));
  return m;
}

// Refine the zero of `extra` between two converged orbits.
PeriodicOrbit refine_between(const CollocationSystem& sys, const PeriodicOrbit& a, const PeriodicOrbit& b,
                             double fa, double fb, const ExtraEquation& extra) {
  const double frac = fa / (fa - fb);
  Eigen::VectorXd xa = pack(a, sys.free());
  Eigen::VectorXd xb = pack(b, sys.free());
  if (a.mesh.boundaries() != b.mesh.boundaries()) xb = remesh_packed(xb, b, a.mesh, sys.free().size());
  PeriodicOrbit o = a;
  unpack((1.0 - frac) * xa + frac * xb, sys.free(), o);
  o.phase_reference = PhaseReference{a.mesh, a.nodes};
  SolverOptions opt;
  opt.tolerance = 1e-10;
  opt.max_iterations = 20;
  sys.solve(o, extra, opt);
  return o;
}

bool domain_ok(const PeriodicOrbit& o, double omega_start) {
  const DomainSpec& d = o.domain;
  if (d.kind == DomainKind::Disk && !(d.R > 1.0 + 1e-6)) return false;
  if (d.kind == DomainKind::Sphere && !(d.theta > 1e-6 && d.theta < std::numbers::pi - 1e-6)) return false;
  const double w = o.omega();
  return w * omega_start > 0.0;
}

}  // namespace

Branch continue_branch(const PeriodicOrbit& start, const Schedule& sch, const ProgressFn& progress) {
  const CollocationSystem sys(sch.constraints, sch.free);
  Branch br;
  br.constraints = sch.constraints;
  br.free = sch.free;
  br.provenance = sch.label;

  PeriodicOrbit cur = start;
  if (!cur.phase_reference) freeze_phase_reference(cur);
  const auto dir_it = std::find(sch.free.begin(), sch.free.end(), sch.direction);
  if (dir_it == sch.free.end()) throw PreconditionError("direction parameter must be free");
  const Eigen::Index dir = cur.nodes.size() + (dir_it - sch.free.begin());

  if (sys.residual(cur).lpNorm<Eigen::Infinity>() > SolverOptions{}.tolerance) {
    ExtraEquation hold;
    hold.kind = ExtraEquation::Kind::ParamValue;
    hold.param = sch.direction;
    hold.value = cur.get(sch.direction);
    sys.solve(cur, hold);
    freeze_phase_reference(cur);
  }

  Eigen::VectorXd W = arclength_weights(cur, sch.free);
  const Eigen::VectorXd param_w = W.tail(static_cast<Eigen::Index>(sch.free.size()));
  Eigen::VectorXd hint = Eigen::VectorXd::Zero(W.size());
  hint[dir] = sch.direction_sign >= 0 ? 1.0 : -1.0;
  Eigen::VectorXd tau = sys.tangent(cur, W, &hint);

  br.points.push_back(make_point(cur, sch.floquet, 0.0));
  const double omega_start = cur.omega();
  double ds = sch.initial_step;
  double s = 0.0;
  auto finish = [&](StopReason r, std::string msg) {
    br.stop = r;
    br.stop_message = std::move(msg);
  };

  for (int step = 1;; ++step) {
    if (step > sch.stop.max_steps) {
      finish(StopReason::MaxSteps, "stopped after " + std::to_string(sch.stop.max_steps) + " steps");
      break;
    }
    const Eigen::VectorXd x = pack(cur, sch.free);
    PeriodicOrbit trial = cur;
    unpack(x + ds * tau, sch.free, trial);
    trial.phase_reference = PhaseReference{cur.mesh, cur.nodes};
    ExtraEquation arc;
    arc.kind = ExtraEquation::Kind::Linear;
    arc.row = W.cwiseProduct(tau);
    arc.x0 = x;
    arc.rhs = ds;
    NewtonReport rep;
    try {
      rep = sys.solve(trial, arc);
    } catch (const VortexError& e) {
      ds *= 0.5;
      if (ds < sch.min_step) {
        finish(StopReason::StepUnderflow, "step " + std::to_string(step) + ": " + e.what());
        break;
      }
      --step;
      continue;
    }
    Eigen::VectorXd tau_new;
    try {
      tau_new = sys.tangent(trial, W, &tau);
    } catch (const VortexError& e) {
      ds *= 0.5;
      if (ds < sch.min_step) {
        finish(StopReason::StepUnderflow, "step " + std::to_string(step) + ": " + e.what());
        break;
      }
      --step;
      continue;
    }
    s += ds;
    BranchPoint pt = make_point(trial, sch.floquet, s);
    pt.iterations = rep.iterations;
    pt.residual = rep.residual;
    const BranchPoint& prev = br.points.back();
    const int after = static_cast<int>(br.points.size()) - 1;

    for (const auto& [l, m] : sch.resonances) {
      const double r = static_cast<double>(l) / m;
      const double fa = prev.T - r * prev.T0, fb = trial.T - r * trial.T0();
      if (fa == 0.0 || (fa < 0.0) == (fb < 0.0)) continue;
      if (prev.orbit.domain.chart != trial.domain.chart) continue;
      ExtraEquation e;
      e.kind = ExtraEquation::Kind::ResonanceRatio;
      e.ratio = r;
      try {
        PeriodicOrbit a = prev.orbit;
        const PeriodicOrbit ro = refine_between(sys, a, trial, fa, fb, e);
        Event ev;
        ev.kind = Event::Kind::Resonance;
        ev.l = l;
        ev.m = m;
        ev.value = r;
        ev.after = after;
        ev.point = make_point(ro, true, prev.arclength + ds * fa / (fa - fb));
        ev.test = ro.rho() - r;
        br.events.push_back(std::move(ev));
      } catch (const VortexError&) {
      }
    }
    if (after > 0 && prev.stable != pt.stable && sch.floquet) {
      Event ev;
      ev.kind = Event::Kind::StabilityChange;
      ev.after = after;
      ev.point = pt;
      br.events.push_back(std::move(ev));
    }
    if (tau_new[dir] * tau[dir] < 0.0) {
      Event ev;
      ev.kind = Event::Kind::Fold;
      ev.param = sch.direction;
      ev.value = trial.get(sch.direction);
      ev.after = after;
      ev.point = pt;
      br.events.push_back(std::move(ev));
    }

    for (const auto& [q, value] : sch.waypoints) {
      const double fa = prev.orbit.get(q) - value, fb = trial.get(q) - value;
      if (fa == 0.0 || (fa < 0.0) == (fb < 0.0) || prev.orbit.domain.chart != trial.domain.chart) continue;
      ExtraEquation e;
      e.kind = ExtraEquation::Kind::ParamValue;
      e.param = q;
      e.value = value;
      try {
        const PeriodicOrbit ro = refine_between(sys, prev.orbit, trial, fa, fb, e);
        Event ev;
        ev.kind = Event::Kind::Target;
        ev.param = q;
        ev.value = value;
        ev.after = after;
        ev.point = make_point(ro, true, prev.arclength + ds * fa / (fa - fb));
        ev.test = ro.get(q) - value;
        br.events.push_back(std::move(ev));
      } catch (const VortexError&) {
      }
    }

    if (sch.stop.target) {
      const auto [q, target] = *sch.stop.target;
      const double fa = prev.orbit.get(q) - target, fb = trial.get(q) - target;
      if (fb == 0.0 || (fa < 0.0) != (fb < 0.0)) {
        ExtraEquation e;
        e.kind = ExtraEquation::Kind::ParamValue;
        e.param = q;
        e.value = target;
        PeriodicOrbit a = prev.orbit;
        const PeriodicOrbit ro = fb == 0.0 ? trial : refine_between(sys, a, trial, fa, fb, e);
        BranchPoint tp = make_point(ro, sch.floquet, prev.arclength + ds * (fb == 0.0 ? 1.0 : fa / (fa - fb)));
        Event ev;
        ev.kind = Event::Kind::Target;
        ev.param = q;
        ev.value = target;
        ev.after = after;
        ev.point = tp;
        ev.test = ro.get(q) - target;
        br.events.push_back(ev);
        br.points.push_back(std::move(tp));
        finish(StopReason::Target, to_string(q) + " reached " + std::to_string(target));
        break;
      }
    }

    br.points.push_back(std::move(pt));
    cur = std::move(trial);
    tau = tau_new;
    if (progress) progress(br);

    if (sch.stop_when_resonances_found && !sch.resonances.empty() &&
        std::all_of(sch.resonances.begin(), sch.resonances.end(), [&](const auto& lm) {
          return std::any_of(br.events.begin(), br.events.end(), [&](const Event& e) {
            return e.kind == Event::Kind::Resonance && e.l == lm.first && e.m == lm.second;
          });
        })) {
      finish(StopReason::ResonancesFound, "step " + std::to_string(step) + ": all requested resonances located");
      break;
    }
    if (min_distance(cur) < sch.stop.min_distance) {
      finish(StopReason::Collision, "step " + std::to_string(step) + ": vortices closer than " +
                                        std::to_string(sch.stop.min_distance));
      break;
    }
    if (!domain_ok(cur, omega_start)) {
      finish(StopReason::DomainLimit, "step " + std::to_string(step) + ": domain parameter left its valid range");
      break;
    }
    if (sch.stop.max_amplitude && cur.A > *sch.stop.max_amplitude) {
      finish(StopReason::AmplitudeBound, "amplitude bound reached");
      break;
    }
    if ((sch.stop.rho_min && cur.rho() < *sch.stop.rho_min) ||
        (sch.stop.rho_max && cur.rho() > *sch.stop.rho_max)) {
      finish(StopReason::RhoBound, "resonance ratio left the requested range");
      break;
    }
    if (max_abs_position(cur) > sch.stop.max_position) {
      if (cur.domain.kind != DomainKind::Sphere) {
        finish(StopReason::PositionBound, "step " + std::to_string(step) + ": |u| exceeds bound");
        break;
      }
      // switch the stereographic chart and restart the tangent from the
      // parameter components
      cur = switch_chart(cur);
      freeze_phase_reference(cur);
      Eigen::VectorXd h = Eigen::VectorXd::Zero(tau.size());
      h.tail(static_cast<Eigen::Index>(sch.free.size())) = tau.tail(static_cast<Eigen::Index>(sch.free.size()));
      tau = sys.tangent(cur, W, &h);
      br.points.back().orbit = cur;
      br.points.back().orbit.phase_reference.reset();
    }

    if (sch.adapt_every > 0 && step % sch.adapt_every == 0) {
      try {
        PeriodicOrbit adapted = adapt_mesh(cur, sch.constraints, sch.free);
        tau = remesh_packed(tau, cur, adapted.mesh, sch.free.size());
        cur = std::move(adapted);
        W = arclength_weights(cur, sch.free);
        W.tail(param_w.size()) = param_w;
        tau /= std::sqrt(tau.dot(W.cwiseProduct(tau)));
      } catch (const VortexError&) {
      }
    }

    if (rep.iterations <= 3) ds = std::min(sch.max_step, ds * 1.5);
    else if (rep.iterations >= 8) ds = std::max(sch.min_step, ds * 0.5);
  }
  return br;
}

Event detect_resonance(const Branch& br, int l, int m) {
  if (m <= 0 || std::gcd(l, m) != 1) throw NotResonantError("resonance needs coprime l, m with m > 0");
  const double r = static_cast<double>(l) / m;
  const CollocationSystem sys(br.constraints, br.free);
  for (std::size_t i = 0; i + 1 < br.points.size(); ++i) {
    const BranchPoint& a = br.points[i];
    const BranchPoint& b = br.points[i + 1];
    const double fa = a.T - r * a.T0, fb = b.T - r * b.T0;
    if (fa == 0.0) {
      Event ev;
      ev.kind = Event::Kind::Resonance;
      ev.l = l;
      ev.m = m;
      ev.value = r;
      ev.after = static_cast<int>(i);
      ev.point = a;
      ev.test = a.rho - r;
      return ev;
    }
    if ((fa < 0.0) == (fb < 0.0) || a.orbit.domain.chart != b.orbit.domain.chart) continue;
    ExtraEquation e;
    e.kind = ExtraEquation::Kind::ResonanceRatio;
    e.ratio = r;
    const PeriodicOrbit ro = refine_between(sys, a.orbit, b.orbit, fa, fb, e);
    Event ev;
    ev.kind = Event::Kind::Resonance;
    ev.l = l;
    ev.m = m;
    ev.value = r;
    ev.after = static_cast<int>(i);
    ev.point = make_point(ro, true, a.arclength + (b.arclength - a.arclength) * fa / (fa - fb));
    ev.test = ro.rho() - r;
    if (std::abs(ev.test) > 1e-10) throw ConvergenceError("resonance refinement missed tolerance", ev.test, 0);
    return ev;
  }
  throw NotFoundError("no bracketing pair for resonance " + std::to_string(l) + ":" + std::to_string(m));
}

std::vector<ResonanceCandidate> enumerate_resonances(const Branch& br, int k, int n, int m_max, int l_max) {
  std::vector<ResonanceCandidate> out;
  for (std::size_t i = 0; i + 1 < br.points.size(); ++i) {
    const double r0 = std::min(br.points[i].rho, br.points[i + 1].rho);
    const double r1 = std::max(br.points[i].rho, br.points[i + 1].rho);
    if (!(r1 > r0)) continue;
    for (int m = 1; m <= m_max; ++m) {
      const int lo = static_cast<int>(std::ceil(r0 * m));
      const int hi = static_cast<int>(std::floor(r1 * m));
      for (int l = lo; l <= hi; ++l) {
        if (std::abs(l) > l_max || std::gcd(l, m) != 1) continue;
        if (((k * l - m) % n + n) % n != 0) continue;
        const double r = static_cast<double>(l) / m;
        if (r <= r0 || r > r1) continue;
        out.push_back({l, m, static_cast<int>(i)});
      }
    }
  }
  return out;
}

double symmetry_residual(const PeriodicOrbit& o, int k, int samples) {
  const int n = o.n;
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    const double t = static_cast<double>(s) / samples;
    const Eigen::VectorXd u = o.state(t);
    for (int j = 1; j < n; ++j) {
      const Eigen::VectorXd v = o.state(t + static_cast<double>(j) * k / n);
      const cplx un(v[2 * (n - 1)], v[2 * (n - 1) + 1]);
      const cplx pred = std::polar(1.0, 2.0 * std::numbers::pi * j / n) * un;
      worst = std::max(worst, std::abs(cplx(u[2 * (j - 1)], u[2 * (j - 1) + 1]) - pred));
    }
  }
  return worst;
}

int symmetry_index(const PeriodicOrbit& o, double* residual) {
  int best = 1;
  double br = std::numeric_limits<double>::infinity();
  for (int k = 1; k <= o.n; ++k) {
    const double r = symmetry_residual(o, k);
    if (r < br) {
      br = r;
      best = k;
    }
  }
  if (residual) *residual = br;
  return best;
}

}  // namespace vortex
