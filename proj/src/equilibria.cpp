#include "vortex/equilibria.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "vortex/dynamics.hpp"
#include "vortex/errors.hpp"

namespace vortex {

std::vector<cplx> Equilibrium::eigenvalues() const {
  std::vector<cplx> v;
  v.reserve(spectrum.size());
  for (const auto& e : spectrum) v.push_back(e.value);
  return v;
}

NormalModes normal_modes(int n, double omega) {
  if (n < 2) throw DomainError("normal modes need n >= 2");
  NormalModes m;
  m.n = n;
  m.omega = omega;
  for (int k = 1; k < n; ++k) {
    const double s = 0.5 * k * (n - k);
    const double rad = s * (2.0 * omega - s);
    if (rad < 0.0) {
      m.unstable_k.push_back(k);
      continue;
    }
    m.k.push_back(k);
    m.s.push_back(s);
    m.nu.push_back(std::sqrt(rad));
  }
  return m;
}

Configuration polygon(int n, double radius) {
  if (n < 2) throw DomainError("a polygon needs n >= 2");
  if (!(radius > 0.0)) throw DomainError("polygon radius must be positive");
  Configuration c;
  c.positions.resize(static_cast<std::size_t>(n));
  for (int j = 1; j <= n; ++j) {
    if (j == n) {
      c.positions[static_cast<std::size_t>(j - 1)] = {radius, 0.0};
      continue;
    }
    const double a = 2.0 * std::numbers::pi * j / n;
    c.positions[static_cast<std::size_t>(j - 1)] = {radius * std::cos(a), radius * std::sin(a)};
  }
  c.circulations.assign(static_cast<std::size_t>(n), 1.0);
  return c;
}

Configuration domain_polygon(const DomainSpec& domain, int n) {
  domain.validate();
  Configuration c = polygon(n, domain.polygon_radius());
  if (domain.has_center()) c.center = Point{0.0, 0.0};
  return c;
}

namespace {

struct StationarySystem {
  VortexField field;
  double omega;
  int n;
  int dim;

  StationarySystem(const DomainSpec& d, int n_, double kappa_n)
      : field(d, n_, ring(n_, kappa_n)), omega(omega_equilibrium(d, n_)), n(n_),
        dim(state_dim(d, n_)) {}

  static std::vector<double> ring(int n, double kappa_n) {
    std::vector<double> k(static_cast<std::size_t>(n), 1.0);
    k.back() = kappa_n;
    return k;
  }

  Eigen::VectorXd residual(const Eigen::VectorXd& x) const {
    Eigen::VectorXd F(dim + 1);
    field.field({x.data(), static_cast<std::size_t>(dim)}, {omega, 1.0, x[dim], 0.0},
                {F.data(), static_cast<std::size_t>(dim)});
    F[dim] = x[2 * (n - 1) + 1];
    return F;
  }

  Eigen::MatrixXd jacobian(const Eigen::VectorXd& x) const {
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(dim + 1, dim + 1);
    field.field_jacobian({x.data(), static_cast<std::size_t>(dim)}, {omega, 1.0, x[dim], 0.0},
                         J.topLeftCorner(dim, dim));
    J.block(0, dim, dim, 1) = omega * x.head(dim);
    J(dim, 2 * (n - 1) + 1) = 1.0;
    return J;
  }
};

bool state_ok(const DomainSpec& d, int n, const Eigen::VectorXd& x) {
  try {
    validate_state(d, n, {x.data(), static_cast<std::size_t>(state_dim(d, n))});
    return true;
  } catch (const DomainError&) {
    return false;
  }
}

Eigen::VectorXd newton(const StationarySystem& sys, const DomainSpec& d, Eigen::VectorXd x,
                       const NewtonOptions& opt, double& res_out) {
  Eigen::VectorXd F = sys.residual(x);
  double res = F.lpNorm<Eigen::Infinity>();
  int it = 0;
  while (res >= opt.tolerance) {
    if (it++ >= opt.max_iterations)
      throw ConvergenceError("equilibrium Newton did not converge", res, it - 1);
    const Eigen::MatrixXd J = sys.jacobian(x);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(J);
    if (lu.rcond() < 1e-14) throw SingularJacobianError("singular equilibrium Jacobian", lu.rcond());
    const Eigen::VectorXd dx = lu.solve(-F);
    double step = 1.0;
    Eigen::VectorXd xn;
    double rn = 0.0;
    for (int h = 0;; ++h) {
      xn = x + step * dx;
      if (state_ok(d, sys.n, xn)) {
        rn = sys.residual(xn).lpNorm<Eigen::Infinity>();
        if (rn < res || h >= opt.max_halvings) break;
      } else if (h >= opt.max_halvings) {
        throw DomainError("equilibrium Newton step leaves the valid configuration set");
      }
      step *= 0.5;
    }
    x = xn;
    F = sys.residual(x);
    res = F.lpNorm<Eigen::Infinity>();
    if (!std::isfinite(res)) throw ConvergenceError("equilibrium Newton diverged", res, it);
  }
  res_out = res;
  return x;
}

Equilibrium finish(const DomainSpec& d, const StationarySystem& sys, const Eigen::VectorXd& x,
                   double kappa_n, double res) {
  Equilibrium e;
  e.domain = d;
  e.config = Configuration::from_state({x.data(), static_cast<std::size_t>(sys.dim)}, sys.n,
                                       d.has_center(), StationarySystem::ring(sys.n, kappa_n));
  e.omega = sys.omega;
  e.lambda1 = x[sys.dim];
  e.kappa_n = kappa_n;
  e.residual = res;
  e.jacobian.resize(sys.dim, sys.dim);
  sys.field.field_jacobian({x.data(), static_cast<std::size_t>(sys.dim)},
                           {sys.omega, 1.0, e.lambda1, 0.0}, e.jacobian);
  e.spectrum = eigenpairs(e.jacobian);
  return e;
}

Eigen::VectorXd pack(const Equilibrium& e) {
  const Eigen::VectorXd s = e.config.state();
  Eigen::VectorXd x(s.size() + 1);
  x << s, e.lambda1;
  return x;
}

}  // namespace

Equilibrium solve_equilibrium(const DomainSpec& domain, const Configuration& guess,
                              double kappa_n, const NewtonOptions& options) {
  validate_configuration(domain, guess);
  const StationarySystem sys(domain, guess.n(), kappa_n);
  Eigen::VectorXd x(sys.dim + 1);
  x << guess.state(), 0.0;
  double res = 0.0;
  x = newton(sys, domain, x, options, res);
  return finish(domain, sys, x, kappa_n, res);
}

Equilibrium continue_equilibrium_in_kappa(const DomainSpec& domain, const Equilibrium& start,
                                          double kappa_target, double max_step,
                                          const NewtonOptions& options) {
  const double span = kappa_target - start.kappa_n;
  if (span == 0.0) return start;
  const int steps = std::max(1, static_cast<int>(std::ceil(std::abs(span) / max_step)));
  Eigen::VectorXd x = pack(start), x_prev = x;
  double res = start.residual;
  for (int s = 1; s <= steps; ++s) {
    const double k = start.kappa_n + span * s / steps;
    const StationarySystem sys(domain, start.n(), k);
    Eigen::VectorXd guess = x;
    if (s > 1) guess += x - x_prev;  // uniform steps
    try {
      const Eigen::VectorXd xn = newton(sys, domain, guess, options, res);
      x_prev = x;
      x = xn;
    } catch (const VortexError& e) {
      throw ConvergenceError("kappa_n continuation failed at step " + std::to_string(s) +
                                 " (kappa_n = " + std::to_string(k) + "): " + e.what(),
                             res, s);
    }
  }
  const StationarySystem sys(domain, start.n(), kappa_target);
  return finish(domain, sys, x, kappa_target, res);
}

EquilibriumSensitivity equilibrium_sensitivity(const DomainSpec& domain, const Configuration& guess,
                                               double kappa_n) {
  const StationarySystem sys(domain, guess.n(), kappa_n);
  Eigen::VectorXd x(sys.dim + 1);
  x << guess.state(), 0.0;
  double res = 0.0;
  x = newton(sys, domain, x, NewtonOptions{}, res);
  // d/dkappa of the field is i dV/dkappa (T = 1, lambda2 = 0)
  std::vector<double> dV(static_cast<std::size_t>(sys.dim));
  sys.field.interaction_kappa_derivative({x.data(), static_cast<std::size_t>(sys.dim)}, dV);
  Eigen::VectorXd dF = Eigen::VectorXd::Zero(sys.dim + 1);
  for (int j = 0; j < sys.dim / 2; ++j) {
    dF[2 * j] = -dV[static_cast<std::size_t>(2 * j + 1)];
    dF[2 * j + 1] = dV[static_cast<std::size_t>(2 * j)];
  }
  const Eigen::VectorXd dx = sys.jacobian(x).fullPivLu().solve(-dF);
  EquilibriumSensitivity out;
  out.config = Configuration::from_state({x.data(), static_cast<std::size_t>(sys.dim)}, sys.n,
                                         domain.has_center(), StationarySystem::ring(sys.n, kappa_n));
  out.d_kappa = dx.head(sys.dim);
  return out;
}

std::vector<Eigenpair> eigenpairs(const Eigen::MatrixXd& m) {
  Eigen::EigenSolver<Eigen::MatrixXd> es(m, true);
  std::vector<Eigenpair> out;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Eigen::VectorXcd v = es.eigenvectors().col(i);
    v.normalize();
    out.push_back({es.eigenvalues()[i], v});
  }
  std::stable_sort(out.begin(), out.end(), [](const Eigenpair& a, const Eigenpair& b) {
    if (a.value.imag() != b.value.imag()) return a.value.imag() > b.value.imag();
    return a.value.real() > b.value.real();
  });
  return out;
}

SpectrumClassification classify_spectrum(const std::vector<cplx>& spectrum,
                                          const SpectrumTolerances& tol) {
  SpectrumClassification c;
  std::vector<double> freqs;
  int zero_real = 0;
  for (const cplx& z : spectrum) {
    if (std::abs(z) < tol.zero) {
      ++c.zero_multiplicity;
      if (std::abs(z.real()) >= tol.imaginary_axis) ++zero_real;
      continue;
    }
    if (std::abs(z.real()) < tol.imaginary_axis) {
      if (z.imag() > 0.0) freqs.push_back(z.imag());
    } else {
      c.unstable.push_back(z);
    }
  }
  c.near_zero_real_pair = zero_real >= 2;
  std::sort(freqs.begin(), freqs.end(), std::greater<>());
  for (double f : freqs) {
    if (!c.imaginary.empty() && c.imaginary.back().frequency - f < tol.multiplicity) {
      ++c.imaginary.back().multiplicity;
      continue;
    }
    c.imaginary.push_back({f, 1});
  }
  return c;
}

}  // namespace vortex
