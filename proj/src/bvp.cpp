#include "vortex/bvp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "vortex/bordered_solver.hpp"
#include "vortex/equilibria.hpp"
#include "vortex/errors.hpp"

namespace vortex {

std::string to_string(Param p) {
  switch (p) {
    case Param::Amplitude: return "A";
    case Param::Period: return "T";
    case Param::Lambda1: return "lambda1";
    case Param::Lambda2: return "lambda2";
    case Param::KappaN: return "kappa_n";
    case Param::DiskRadius: return "R";
    case Param::CenterCirculation: return "mu";
    case Param::SphereAngle: return "theta";
    case Param::PinRadius: return "r_n";
  }
  return "?";
}

Param param_from_string(const std::string& s) {
  for (Param p : {Param::Amplitude, Param::Period, Param::Lambda1, Param::Lambda2, Param::KappaN,
                  Param::DiskRadius, Param::CenterCirculation, Param::SphereAngle, Param::PinRadius})
    if (to_string(p) == s) return p;
  throw VortexError("unknown parameter '" + s + "'");
}

std::optional<Param> domain_param(DomainKind kind) {
  switch (kind) {
    case DomainKind::Disk: return Param::DiskRadius;
    case DomainKind::CenterVortex: return Param::CenterCirculation;
    case DomainKind::Sphere: return Param::SphereAngle;
    case DomainKind::Plane: break;
  }
  return std::nullopt;
}

double PeriodicOrbit::get(Param p) const {
  switch (p) {
    case Param::Amplitude: return A;
    case Param::Period: return T;
    case Param::Lambda1: return lambda1;
    case Param::Lambda2: return lambda2;
    case Param::KappaN: return kappa_n;
    case Param::DiskRadius: return domain.R;
    case Param::CenterCirculation: return domain.mu;
    case Param::SphereAngle: return domain.theta;
    case Param::PinRadius: return r_n;
  }
  return 0.0;
}

void PeriodicOrbit::set(Param p, double v) {
  switch (p) {
    case Param::Amplitude: A = v; return;
    case Param::Period: T = v; return;
    case Param::Lambda1: lambda1 = v; return;
    case Param::Lambda2: lambda2 = v; return;
    case Param::KappaN: kappa_n = v; return;
    case Param::DiskRadius: domain.R = v; return;
    case Param::CenterCirculation: domain.mu = v; return;
    case Param::SphereAngle: domain.theta = v; return;
    case Param::PinRadius: r_n = v; return;
  }
}

std::vector<double> PeriodicOrbit::circulations() const {
  std::vector<double> k(static_cast<std::size_t>(n), 1.0);
  k.back() = kappa_n;
  return k;
}

PeriodicOrbit PeriodicOrbit::constant(const DomainSpec& domain, const Configuration& config,
                                      double T, const Mesh& mesh) {
  PeriodicOrbit o;
  o.domain = domain;
  o.n = config.n();
  o.mesh = mesh;
  const Eigen::VectorXd s = config.state();
  o.nodes = s.replicate(1, mesh.node_count());
  o.T = T;
  o.kappa_n = config.circulations.empty() ? 1.0 : config.circulations.back();
  o.reference_config = config;
  o.r_n = config.positions.back().x;
  return o;
}

int ConstraintSet::scalar_count() const {
  return (phase == PhaseKind::Integral ? 1 : 2) + (rotation_removal ? 1 : 0) + 1 +
         (resonance ? 1 : 0);
}

Eigen::VectorXd pack(const PeriodicOrbit& orbit, const std::vector<Param>& free) {
  const Eigen::Index ns = orbit.nodes.size();
  Eigen::VectorXd x(ns + static_cast<Eigen::Index>(free.size()));
  x.head(ns) = Eigen::Map<const Eigen::VectorXd>(orbit.nodes.data(), ns);
  for (std::size_t k = 0; k < free.size(); ++k) x[ns + static_cast<Eigen::Index>(k)] = orbit.get(free[k]);
  return x;
}

void unpack(const Eigen::VectorXd& x, const std::vector<Param>& free, PeriodicOrbit& orbit) {
  const Eigen::Index ns = orbit.nodes.size();
  Eigen::Map<Eigen::VectorXd>(orbit.nodes.data(), ns) = x.head(ns);
  for (std::size_t k = 0; k < free.size(); ++k) orbit.set(free[k], x[ns + static_cast<Eigen::Index>(k)]);
}

namespace {

using RowRef = Eigen::Ref<Eigen::RowVectorXd, 0, Eigen::InnerStride<>>;

inline Eigen::Vector2d cmul(cplx c, double x, double y) {
  return {c.real() * x - c.imag() * y, c.real() * y + c.imag() * x};
}

// Collocation-point data of an orbit.
struct PointData {
  Eigen::MatrixXd x;   // dim x (N p) states
  Eigen::MatrixXd dx;  // dim x (N p) time derivatives (unit-interval time)
  Eigen::VectorXd w;   // quadrature weights
  Eigen::VectorXd t;   // times
};

PointData collocation_points(const PeriodicOrbit& o) {
  const Mesh& m = o.mesh;
  const int N = m.intervals(), p = m.degree();
  PointData pd;
  pd.x.resize(o.dim(), N * p);
  pd.dx.resize(o.dim(), N * p);
  pd.w.resize(N * p);
  pd.t.resize(N * p);
  for (int i = 0; i < N; ++i) {
    const auto U = o.nodes.middleCols(i * p, p + 1);
    pd.x.middleCols(i * p, p) = U * m.gauss_values();
    pd.dx.middleCols(i * p, p) = U * m.gauss_derivatives() / m.h(i);
    for (int c = 0; c < p; ++c) {
      pd.w[i * p + c] = m.h(i) * m.gauss().weights[static_cast<std::size_t>(c)];
      pd.t[i * p + c] = m.boundaries()[static_cast<std::size_t>(i)] +
                        m.h(i) * m.gauss().nodes[static_cast<std::size_t>(c)];
    }
  }
  return pd;
}

void check_points(const PeriodicOrbit& o, const PointData& pd) {
  const int p = o.mesh.degree();
  for (Eigen::Index c = 0; c < pd.x.cols(); ++c) {
    try {
      validate_state(o.domain, o.n, {pd.x.col(c).data(), static_cast<std::size_t>(o.dim())});
    } catch (const DomainError& e) {
      throw DomainError("orbit interval " + std::to_string(c / p) + ": " + e.what());
    }
  }
}

// Derivative of the reference solution's vortex n at the collocation times.
Eigen::MatrixXd reference_derivative(const PeriodicOrbit& o, const PointData& pd) {
  if (!o.phase_reference) throw PreconditionError("integral phase condition needs a reference orbit");
  const PhaseReference& ref = *o.phase_reference;
  const int a = 2 * (o.n - 1);
  Eigen::MatrixXd out(2, pd.t.size());
  const bool same = ref.mesh.boundaries() == o.mesh.boundaries() &&
                    ref.mesh.degree() == o.mesh.degree() && ref.nodes.rows() == o.dim();
  if (same) {
    const Mesh& m = o.mesh;
    const int p = m.degree();
    for (int i = 0; i < m.intervals(); ++i)
      out.middleCols(i * p, p) =
          ref.nodes.block(a, i * p, 2, p + 1) * m.gauss_derivatives() / m.h(i);
    return out;
  }
  for (Eigen::Index c = 0; c < pd.t.size(); ++c)
    out.col(c) = evaluate_derivative(ref.mesh, ref.nodes, pd.t[c]).segment(a, 2);
  return out;
}

// d T0 / d(domain parameter)
double dT0_dparam(const PeriodicOrbit& o) {
  const double w = o.omega();
  return -2.0 * std::numbers::pi * omega_parameter_derivative(o.domain, o.n) / (w * w);
}

struct Evaluator {
  const ConstraintSet& cs;
  const std::vector<Param>& free;
  const PeriodicOrbit& o;
  VortexField vf;
  SystemParams sp;
  PointData pd;
  int d, N, p, nodes, P;
  Eigen::VectorXd u0, du0;  // amplitude reference and its kappa_n derivative
  int col_of(Param q) const {
    for (std::size_t k = 0; k < free.size(); ++k)
      if (free[k] == q) return nodes * d + static_cast<int>(k);
    return -1;
  }

  Evaluator(const ConstraintSet& c, const std::vector<Param>& f, const PeriodicOrbit& orbit)
      : cs(c), free(f), o(orbit), vf(orbit.domain, orbit.n, orbit.circulations()),
        sp(orbit.system_params()), pd(collocation_points(orbit)), d(orbit.dim()),
        N(orbit.mesh.intervals()), p(orbit.mesh.degree()), nodes(orbit.mesh.node_count()),
        P(static_cast<int>(f.size())) {
    o.domain.validate();
    check_points(o, pd);
    if (col_of(Param::KappaN) >= 0) {
      // the reference equilibrium moves with kappa_n
      const EquilibriumSensitivity es = equilibrium_sensitivity(o.domain, o.reference_config, o.kappa_n);
      u0 = es.config.state();
      du0 = es.d_kappa;
    } else {
      u0 = o.reference_config.state();
    }
  }

  Eigen::VectorXd scalar_values() const {
    Eigen::VectorXd v(cs.scalar_count());
    int r = 0;
    const int a = 2 * (o.n - 1);
    if (cs.phase == PhaseKind::Integral) {
      const Eigen::MatrixXd ref = reference_derivative(o, pd);
      double s = 0.0;
      for (Eigen::Index c = 0; c < pd.t.size(); ++c)
        s += pd.w[c] * (pd.x(a, c) * ref(0, c) + pd.x(a + 1, c) * ref(1, c));
      v[r++] = s;
    } else {
      v[r++] = o.nodes(a + 1, 0);
      v[r++] = o.nodes(a, 0) - o.r_n;
    }
    if (cs.rotation_removal) v[r++] = pd.w.dot(pd.x.row(a + 1).transpose());
    v[r++] = amplitude_value() - o.A;
    if (cs.resonance) {
      const double ratio = static_cast<double>(cs.resonance->first) / cs.resonance->second;
      v[r++] = o.T - ratio * o.T0();
    }
    return v;
  }

  double amplitude_value() const {
    double s = 0.0;
    for (Eigen::Index c = 0; c < pd.t.size(); ++c)
      s += pd.w[c] * (pd.x.col(c).head(2 * o.n) - u0.head(2 * o.n)).squaredNorm();
    return s;
  }

  Eigen::VectorXd collocation_residual() const {
    Eigen::MatrixXd V;
    vf.interaction_batch(pd.x, V);
    Eigen::MatrixXd f(d, pd.x.cols());
    for (Eigen::Index c = 0; c < pd.x.cols(); ++c)
      vf.field_from_interaction({pd.x.col(c).data(), static_cast<std::size_t>(d)},
                                {V.col(c).data(), static_cast<std::size_t>(d)}, sp,
                                {f.col(c).data(), static_cast<std::size_t>(d)});
    const Eigen::MatrixXd defect = pd.dx - f;
    return Eigen::Map<const Eigen::VectorXd>(defect.data(), defect.size());
  }

  Eigen::VectorXd residual() const {
    const Eigen::VectorXd col = collocation_residual();
    Eigen::VectorXd r(col.size() + d + cs.scalar_count());
    r << col, o.nodes.col(nodes - 1) - o.nodes.col(0), scalar_values();
    return r;
  }

  // -d f / d q at one collocation point.
  Eigen::VectorXd param_column(Param q, Eigen::Index c) const {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(d);
    const std::span<const double> s{pd.x.col(c).data(), static_cast<std::size_t>(d)};
    std::vector<double> V(static_cast<std::size_t>(d)), dV(static_cast<std::size_t>(d));
    const cplx c1 = cplx(sp.lambda1, -1.0) * sp.omega;
    const cplx c2 = sp.T * cplx(sp.lambda2, -1.0);
    auto emit = [&](auto fn) {
      for (int j = 0; j < d / 2; ++j) out.segment(2 * j, 2) = -fn(j);
    };
    switch (q) {
      case Param::Period:
        vf.interaction(s, V);
        emit([&](int j) {
          return Eigen::Vector2d(cmul(c1, s[2 * j], s[2 * j + 1]) -
                                 cmul(cplx(sp.lambda2, -1.0), V[2 * j], V[2 * j + 1]));
        });
        break;
      case Param::Lambda1:
        emit([&](int j) { return Eigen::Vector2d(sp.T * sp.omega * s[2 * j], sp.T * sp.omega * s[2 * j + 1]); });
        break;
      case Param::Lambda2:
        vf.interaction(s, V);
        emit([&](int j) { return Eigen::Vector2d(-sp.T * V[2 * j], -sp.T * V[2 * j + 1]); });
        break;
      case Param::KappaN:
        vf.interaction_kappa_derivative(s, dV);
        emit([&](int j) { return Eigen::Vector2d(-cmul(c2, dV[2 * j], dV[2 * j + 1])); });
        break;
      case Param::DiskRadius:
      case Param::CenterCirculation:
      case Param::SphereAngle: {
        if (domain_param(o.domain.kind) != q) break;
        vf.interaction_domain_derivative(s, dV);
        const cplx a = sp.T * cplx(sp.lambda1, -1.0) * omega_parameter_derivative(o.domain, o.n);
        emit([&](int j) {
          return Eigen::Vector2d(cmul(a, s[2 * j], s[2 * j + 1]) - cmul(c2, dV[2 * j], dV[2 * j + 1]));
        });
        break;
      }
      case Param::Amplitude:
      case Param::PinRadius: break;
    }
    return out;
  }

  BlockSystem linearize() const {
    BlockSystem bs;
    bs.intervals = N;
    bs.degree = p;
    bs.dim = d;
    bs.params = P;
    const Eigen::VectorXd res = residual();
    const Mesh& m = o.mesh;
    Eigen::MatrixXd Jf(d, d);
    for (int i = 0; i < N; ++i) {
      Eigen::MatrixXd L = Eigen::MatrixXd::Zero(p * d, (p + 1) * d + P);
      for (int c = 0; c < p; ++c) {
        const Eigen::Index pc = i * p + c;
        vf.field_jacobian({pd.x.col(pc).data(), static_cast<std::size_t>(d)}, sp, Jf);
        for (int k = 0; k <= p; ++k) {
          auto blk = L.block(c * d, k * d, d, d);
          blk = -m.gauss_values()(k, c) * Jf;
          blk.diagonal().array() += m.gauss_derivatives()(k, c) / m.h(i);
        }
        for (int q = 0; q < P; ++q)
          L.block(c * d, (p + 1) * d + q, d, 1) = param_column(free[static_cast<std::size_t>(q)], pc);
      }
      bs.local.push_back(std::move(L));
      bs.local_rhs.push_back(-res.segment(i * p * d, p * d));
    }
    const int g = d + cs.scalar_count();
    bs.border = Eigen::MatrixXd::Zero(g, bs.unknowns());
    bs.border_rhs = -res.tail(g);
    for (int k = 0; k < d; ++k) {
      bs.border(k, (nodes - 1) * d + k) = 1.0;
      bs.border(k, k) -= 1.0;
    }
    scalar_rows(bs.border.bottomRows(cs.scalar_count()));
    return bs;
  }

  // Accumulate quadrature gradient rows: coef(c) is the per-point gradient
  // with respect to the state at Gauss point c.
  template <class Coef>
  void quadrature_row(RowRef row, Coef coef) const {
    const Mesh& m = o.mesh;
    for (int i = 0; i < N; ++i)
      for (int c = 0; c < p; ++c) {
        const Eigen::Index pc = i * p + c;
        const Eigen::VectorXd g = pd.w[pc] * coef(pc);
        for (int k = 0; k <= p; ++k)
          row.segment((i * p + k) * d, d) += m.gauss_values()(k, c) * g.transpose();
      }
  }

  void scalar_rows(Eigen::Ref<Eigen::MatrixXd> rows) const {
    int r = 0;
    const int a = 2 * (o.n - 1);
    if (cs.phase == PhaseKind::Integral) {
      const Eigen::MatrixXd ref = reference_derivative(o, pd);
      quadrature_row(rows.row(r++), [&](Eigen::Index c) {
        Eigen::VectorXd g = Eigen::VectorXd::Zero(d);
        g.segment(a, 2) = ref.col(c);
        return g;
      });
    } else {
      rows(r++, a + 1) = 1.0;
      rows(r, a) = 1.0;
      if (const int pc = col_of(Param::PinRadius); pc >= 0) rows(r, pc) = -1.0;
      ++r;
    }
    if (cs.rotation_removal) {
      quadrature_row(rows.row(r++), [&](Eigen::Index) {
        Eigen::VectorXd g = Eigen::VectorXd::Zero(d);
        g[a + 1] = 1.0;
        return g;
      });
    }
    {
      quadrature_row(rows.row(r), [&](Eigen::Index c) {
        Eigen::VectorXd g = Eigen::VectorXd::Zero(d);
        g.head(2 * o.n) = 2.0 * (pd.x.col(c).head(2 * o.n) - u0.head(2 * o.n));
        return g;
      });
      if (const int pc = col_of(Param::Amplitude); pc >= 0) rows(r, pc) = -1.0;
      if (const int pc = col_of(Param::KappaN); pc >= 0) {
        double s = 0.0;
        for (Eigen::Index c = 0; c < pd.t.size(); ++c)
          s -= 2.0 * pd.w[c] * (pd.x.col(c).head(2 * o.n) - u0.head(2 * o.n)).dot(du0.head(2 * o.n));
        rows(r, pc) = s;
      }
      ++r;
    }
    if (cs.resonance) {
      const double ratio = static_cast<double>(cs.resonance->first) / cs.resonance->second;
      resonance_row(rows.row(r++), ratio);
    }
  }

  void resonance_row(RowRef row, double ratio) const {
    if (const int pc = col_of(Param::Period); pc >= 0) row[pc] = 1.0;
    if (auto dp = domain_param(o.domain.kind))
      if (const int pc = col_of(*dp); pc >= 0) row[pc] = -ratio * dT0_dparam(o);
  }
};

void check_balance(const ConstraintSet& cs, const std::vector<Param>& free, bool extra) {
  const int need = cs.scalar_count() + (extra ? 1 : 0);
  if (static_cast<int>(free.size()) != need)
    throw PreconditionError("dimension balance violated: " + std::to_string(free.size()) +
                            " free parameters for " + std::to_string(need) +
                            " scalar equations");
  const bool a_free = std::find(free.begin(), free.end(), Param::Amplitude) != free.end();
  if ((cs.amplitude == AmplitudeMode::Monitored) != a_free)
    throw PreconditionError(a_free ? "amplitude is fixed but listed as free"
                                   : "monitored amplitude must be a free parameter");
}

}  // namespace

CollocationSystem::CollocationSystem(ConstraintSet constraints, std::vector<Param> free)
    : constraints_(constraints), free_(std::move(free)) {
  const int q = constraints_.scalar_count();
  const int P = static_cast<int>(free_.size());
  if (P != q && P != q + 1)
    throw PreconditionError("dimension balance violated: " + std::to_string(P) +
                            " free parameters for " + std::to_string(q) + " scalar constraints");
  check_balance(constraints_, free_, P == q + 1);
  for (std::size_t i = 0; i < free_.size(); ++i)
    for (std::size_t j = i + 1; j < free_.size(); ++j)
      if (free_[i] == free_[j]) throw PreconditionError("parameter listed twice: " + to_string(free_[i]));
}

Eigen::VectorXd CollocationSystem::residual(const PeriodicOrbit& orbit) const {
  return Evaluator(constraints_, free_, orbit).residual();
}

double CollocationSystem::extra_value(const PeriodicOrbit& orbit, const ExtraEquation& e) const {
  switch (e.kind) {
    case ExtraEquation::Kind::Linear:
      return e.row.dot(pack(orbit, free_) - e.x0) - e.rhs;
    case ExtraEquation::Kind::ParamValue:
      return orbit.get(e.param) - e.value;
    case ExtraEquation::Kind::ResonanceRatio:
      return orbit.T - e.ratio * orbit.T0();
  }
  return 0.0;
}

Eigen::VectorXd CollocationSystem::extra_row(const PeriodicOrbit& orbit, const ExtraEquation& e) const {
  const int n = static_cast<int>(orbit.nodes.size() + static_cast<Eigen::Index>(free_.size()));
  Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(n);
  switch (e.kind) {
    case ExtraEquation::Kind::Linear: row = e.row.transpose(); break;
    case ExtraEquation::Kind::ParamValue: {
      const auto it = std::find(free_.begin(), free_.end(), e.param);
      if (it == free_.end()) throw PreconditionError("target parameter " + to_string(e.param) + " is not free");
      row[static_cast<Eigen::Index>(orbit.nodes.size() + (it - free_.begin()))] = 1.0;
      break;
    }
    case ExtraEquation::Kind::ResonanceRatio: {
      Evaluator ev(constraints_, free_, orbit);
      ev.resonance_row(row, e.ratio);
      break;
    }
  }
  return row.transpose();
}

Eigen::VectorXd CollocationSystem::residual(const PeriodicOrbit& orbit, const ExtraEquation& extra) const {
  const Eigen::VectorXd r = residual(orbit);
  Eigen::VectorXd out(r.size() + 1);
  out << r, extra_value(orbit, extra);
  return out;
}

namespace {

constexpr double kDegenerateRcond = 1e-10;

BlockSystem with_extra(BlockSystem bs, const Eigen::VectorXd& row, double rhs) {
  const Eigen::Index g = bs.border.rows();
  bs.border.conservativeResize(g + 1, Eigen::NoChange);
  bs.border.row(g) = row.transpose();
  bs.border_rhs.conservativeResize(g + 1);
  bs.border_rhs[g] = rhs;
  return bs;
}

}  // namespace

NewtonReport CollocationSystem::solve(PeriodicOrbit& orbit, const std::optional<ExtraEquation>& extra,
                                      const SolverOptions& opt) const {
  const bool has_extra = extra.has_value();
  if (static_cast<int>(free_.size()) != constraints_.scalar_count() + (has_extra ? 1 : 0))
    throw PreconditionError("dimension balance violated: " + std::to_string(free_.size()) +
                            " free parameters, " + std::to_string(constraints_.scalar_count()) +
                            " constraints" + (has_extra ? " plus one extra equation" : ""));
  auto full_residual = [&](const PeriodicOrbit& o) {
    return has_extra ? residual(o, *extra) : residual(o);
  };
  NewtonReport rep;
  Eigen::VectorXd F = full_residual(orbit);
  rep.residual = F.lpNorm<Eigen::Infinity>();
  double last_step = std::numeric_limits<double>::infinity();
  while (!(rep.residual < opt.tolerance)) {
    if (rep.iterations >= opt.max_iterations)
      throw ConvergenceError("collocation Newton did not converge in " +
                                 std::to_string(rep.iterations) + " iterations (residual " +
                                 std::to_string(rep.residual) + ")",
                             rep.residual, rep.iterations);
    ++rep.iterations;
    BlockSystem bs = Evaluator(constraints_, free_, orbit).linearize();
    if (has_extra) bs = with_extra(std::move(bs), extra_row(orbit, *extra), -extra_value(orbit, *extra));
    const BlockSolution sol =
        solve_block_system(bs, opt.min_rcond, constraints_.degenerate ? kDegenerateRcond : 0.0);
    rep.rcond = sol.rcond;
    const Eigen::VectorXd x = pack(orbit, free_);
    double step = 1.0;
    const double f0 = F.norm();
    for (int h = 0;; ++h) {
      PeriodicOrbit trial = orbit;
      unpack(x + step * sol.x, free_, trial);
      bool accepted = false;
      try {
        const Eigen::VectorXd Ft = full_residual(trial);
        if (Ft.allFinite() && Ft.norm() < f0) {
          orbit = std::move(trial);
          F = Ft;
          accepted = true;
        }
      } catch (const DomainError&) {
        if (h >= opt.max_halvings) throw;
      }
      if (accepted) break;
      if (h >= opt.max_halvings)
        throw ConvergenceError("collocation Newton: no residual decrease after damping",
                               rep.residual, rep.iterations);
      step *= 0.5;
    }
    last_step = step * sol.x.lpNorm<Eigen::Infinity>();
    rep.residual = F.lpNorm<Eigen::Infinity>();
    if (last_step < opt.step_tolerance && rep.residual < 100.0 * opt.tolerance) break;
  }
  if (std::find(free_.begin(), free_.end(), Param::KappaN) != free_.end())
    orbit.reference_config = equilibrium_sensitivity(orbit.domain, orbit.reference_config, orbit.kappa_n).config;
  return rep;
}

Eigen::VectorXd CollocationSystem::tangent(const PeriodicOrbit& orbit, const Eigen::VectorXd& weights,
                                           const Eigen::VectorXd* previous) const {
  if (static_cast<int>(free_.size()) != constraints_.scalar_count() + 1)
    throw PreconditionError("tangent needs one more free parameter than constraints");
  BlockSystem bs = Evaluator(constraints_, free_, orbit).linearize();
  bs.border_rhs.setZero();
  for (auto& r : bs.local_rhs) r.setZero();
  Eigen::VectorXd dir;
  if (previous) {
    dir = weights.cwiseProduct(*previous);
  } else {
    throw PreconditionError("tangent needs a reference direction");
  }
  bs = with_extra(std::move(bs), dir, 1.0);
  Eigen::VectorXd t = solve_block_system(bs, 1e-15, constraints_.degenerate ? kDegenerateRcond : 0.0).x;
  t /= std::sqrt(t.dot(weights.cwiseProduct(t)));
  if (t.dot(weights.cwiseProduct(*previous)) < 0.0) t = -t;
  return t;
}

NewtonReport newton_solve(PeriodicOrbit& orbit, const ConstraintSet& constraints,
                          const std::vector<Param>& free, const SolverOptions& options) {
  return CollocationSystem(constraints, free).solve(orbit, std::nullopt, options);
}

double amplitude(const PeriodicOrbit& orbit) {
  const PointData pd = collocation_points(orbit);
  const Eigen::VectorXd u0 = orbit.reference_config.state();
  double s = 0.0;
  for (Eigen::Index c = 0; c < pd.t.size(); ++c)
    s += pd.w[c] * (pd.x.col(c).head(2 * orbit.n) - u0.head(2 * orbit.n)).squaredNorm();
  return s;
}

double phase_integral(const PeriodicOrbit& orbit) {
  const PointData pd = collocation_points(orbit);
  const Eigen::MatrixXd ref = reference_derivative(orbit, pd);
  const int a = 2 * (orbit.n - 1);
  double s = 0.0;
  for (Eigen::Index c = 0; c < pd.t.size(); ++c)
    s += pd.w[c] * (pd.x(a, c) * ref(0, c) + pd.x(a + 1, c) * ref(1, c));
  return s;
}

void freeze_phase_reference(PeriodicOrbit& orbit) {
  orbit.phase_reference = PhaseReference{orbit.mesh, orbit.nodes};
}

std::vector<double> equidistributed_boundaries(const PeriodicOrbit& o, const MeshAdaptOptions& opt) {
  const Mesh& m = o.mesh;
  const int N = m.intervals(), p = m.degree();
  std::vector<Eigen::VectorXd> D(static_cast<std::size_t>(N));
  for (int i = 0; i < N; ++i)
    D[static_cast<std::size_t>(i)] =
        o.nodes.middleCols(i * p, p + 1) * m.basis().top_derivatives() / std::pow(m.h(i), p);
  Eigen::VectorXd mon(N);
  for (int i = 0; i < N; ++i) {
    const int ip = (i + 1) % N, im = (i + N - 1) % N;
    const auto& Di = D[static_cast<std::size_t>(i)];
    const double fwd = (D[static_cast<std::size_t>(ip)] - Di).lpNorm<Eigen::Infinity>() / (0.5 * (m.h(i) + m.h(ip)));
    const double bwd = (Di - D[static_cast<std::size_t>(im)]).lpNorm<Eigen::Infinity>() / (0.5 * (m.h(i) + m.h(im)));
    mon[i] = std::pow(0.5 * (fwd + bwd), 1.0 / (p + 1));
  }
  // average the monitor with its neighbours to suppress odd-even noise
  Eigen::VectorXd sm(N);
  for (int i = 0; i < N; ++i) sm[i] = 0.25 * mon[(i + N - 1) % N] + 0.5 * mon[i] + 0.25 * mon[(i + 1) % N];
  double total = 0.0;
  for (int i = 0; i < N; ++i) total += sm[i] * m.h(i);
  const double floor = opt.uniform_weight * std::max(total, 1e-300);
  Eigen::VectorXd cum(N + 1);
  cum[0] = 0.0;
  for (int i = 0; i < N; ++i) cum[i + 1] = cum[i] + (sm[i] + floor) * m.h(i);
  std::vector<double> t(static_cast<std::size_t>(N) + 1);
  t.front() = 0.0;
  t.back() = 1.0;
  int j = 0;
  for (int k = 1; k < N; ++k) {
    const double target = cum[N] * k / N;
    while (cum[j + 1] < target) ++j;
    const double frac = (target - cum[j]) / (cum[j + 1] - cum[j]);
    t[static_cast<std::size_t>(k)] = m.boundaries()[static_cast<std::size_t>(j)] + frac * m.h(j);
  }
  return t;
}

PeriodicOrbit adapt_mesh(const PeriodicOrbit& orbit, const ConstraintSet& constraints,
                         const std::vector<Param>& free, const MeshAdaptOptions& options,
                         const SolverOptions& solver) {
  PeriodicOrbit out = orbit;
  out.mesh = Mesh(equidistributed_boundaries(orbit, options), orbit.mesh.degree());
  out.nodes = remesh(orbit.mesh, orbit.nodes, out.mesh);
  const CollocationSystem sys(constraints, free);
  std::optional<ExtraEquation> extra;
  if (static_cast<int>(free.size()) == constraints.scalar_count() + 1) {
    // hold the first free parameter so the re-solve stays on the same orbit
    ExtraEquation e;
    e.kind = ExtraEquation::Kind::ParamValue;
    e.param = free.front();
    e.value = orbit.get(free.front());
    extra = e;
  }
  sys.solve(out, extra, solver);
  return out;
}

std::vector<Eigen::MatrixXd> monodromy_factors(const PeriodicOrbit& orbit) {
  if (std::abs(orbit.lambda1) > 1e-6 || std::abs(orbit.lambda2) > 1e-6)
    throw PreconditionError("monodromy needs vanishing unfolding parameters");
  PeriodicOrbit o = orbit;
  o.lambda1 = 0.0;
  o.lambda2 = 0.0;
  const ConstraintSet none{PhaseKind::AxisPinning, false, AmplitudeMode::Fixed, std::nullopt};
  static const std::vector<Param> no_params;
  Evaluator ev(none, no_params, o);
  const Eigen::VectorXd col = ev.collocation_residual();
  const double periodicity = (o.nodes.col(o.nodes.cols() - 1) - o.nodes.col(0)).lpNorm<Eigen::Infinity>();
  if (col.lpNorm<Eigen::Infinity>() > 1e-6 || periodicity > 1e-6)
    throw PreconditionError("monodromy needs a converged orbit (collocation defect " +
                            std::to_string(col.lpNorm<Eigen::Infinity>()) + ")");
  return interval_transfers(ev.linearize());
}

Eigen::MatrixXd monodromy(const PeriodicOrbit& orbit) {
  Eigen::MatrixXd M = Eigen::MatrixXd::Identity(orbit.dim(), orbit.dim());
  for (const auto& Mi : monodromy_factors(orbit)) M = Mi * M;
  return M;
}

double max_residual(const PeriodicOrbit& orbit, const ConstraintSet& constraints,
                    const std::vector<Param>& free) {
  return Evaluator(constraints, free, orbit).residual().lpNorm<Eigen::Infinity>();
}

}  // namespace vortex
