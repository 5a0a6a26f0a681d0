#include "vortex/dynamics.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "vortex/errors.hpp"
#include "vortex/kernels.hpp"

namespace vortex {

namespace {

inline cplx at(std::span<const double> s, int j) { return {s[2 * j], s[2 * j + 1]}; }

inline void put(std::span<double> s, int j, cplx v) {
  s[2 * j] = v.real();
  s[2 * j + 1] = v.imag();
}

// Real 2x2 block of the map dz -> a dz + b conj(dz), accumulated.
inline void add_block(Eigen::Ref<Eigen::MatrixXd> m, int j, int k, cplx a, cplx b) {
  m(2 * j, 2 * k) += a.real() + b.real();
  m(2 * j, 2 * k + 1) += -a.imag() + b.imag();
  m(2 * j + 1, 2 * k) += a.imag() + b.imag();
  m(2 * j + 1, 2 * k + 1) += a.real() - b.real();
}

double sphere_r(const DomainSpec& d) { return 1.0 / std::tan(0.5 * d.theta); }

}  // namespace

double omega_equilibrium(const DomainSpec& domain, int n) {
  const double s1 = 0.5 * (n - 1);
  switch (domain.kind) {
    case DomainKind::Plane: return s1;
    case DomainKind::Disk: return n / (1.0 - std::pow(domain.R, -2.0 * n)) - 0.5 * (n + 1);
    case DomainKind::CenterVortex: return domain.mu + s1;
    case DomainKind::Sphere: {
      // Same value in both charts: it depends on the colatitude only.
      const double r = sphere_r(domain);
      const double r2 = r * r;
      return s1 * (1.0 - r2 * r2) / (4.0 * r2);
    }
  }
  return s1;
}

double omega_parameter_derivative(const DomainSpec& domain, int n) {
  switch (domain.kind) {
    case DomainKind::Plane: return 0.0;
    case DomainKind::Disk: {
      const double q = std::pow(domain.R, -2.0 * n);
      const double den = 1.0 - q;
      return -2.0 * n * n * q / (domain.R * den * den);
    }
    case DomainKind::CenterVortex: return 1.0;
    case DomainKind::Sphere: {
      const double s1 = 0.5 * (n - 1);
      const double r = sphere_r(domain);
      const double domega_dr = -0.5 * s1 * (1.0 / (r * r * r) + r);
      const double dr_dtheta = -0.5 * (1.0 + r * r);
      return domega_dr * dr_dtheta;
    }
  }
  return 0.0;
}

double rotating_period(const DomainSpec& domain, int n) {
  const double w = omega_equilibrium(domain, n);
  if (w == 0.0) return std::numeric_limits<double>::infinity();
  return 2.0 * std::numbers::pi / w;
}

VortexField::VortexField(const DomainSpec& domain, int n, std::vector<double> ring_circulations)
    : domain_(domain), n_(n), dim_(state_dim(domain, n)) {
  if (n < 1) throw DomainError("at least one vortex is required");
  if (ring_circulations.empty()) ring_circulations.assign(static_cast<std::size_t>(n), 1.0);
  if (static_cast<int>(ring_circulations.size()) != n)
    throw DomainError("circulation list length does not match the vortex count");
  kappa_ = std::move(ring_circulations);
  if (domain.has_center()) kappa_.push_back(domain.mu);
  if (domain.kind == DomainKind::Sphere && domain.chart == Chart::South) sign_ = -1.0;
}

void VortexField::interaction(std::span<const double> s, std::span<double> out) const {
  const int m = n_ + (domain_.has_center() ? 1 : 0);
  for (int j = 0; j < m; ++j) {
    const cplx uj = at(s, j);
    cplx P = 0.0;
    for (int k = 0; k < m; ++k)
      if (k != j) P += kappa_[static_cast<std::size_t>(k)] / std::conj(uj - at(s, k));
    if (domain_.kind == DomainKind::Disk) {
      const double R2 = domain_.R * domain_.R;
      for (int k = 0; k < n_; ++k)
        P -= kappa_[static_cast<std::size_t>(k)] / (std::conj(uj) - R2 / at(s, k));
    } else if (domain_.kind == DomainKind::Sphere) {
      double K = 0.0;
      for (int k = 0; k < n_; ++k)
        if (k != j) K += kappa_[static_cast<std::size_t>(k)];
      const double sj = 1.0 + std::norm(uj);
      P = sign_ * (0.25 * sj * sj * P - 0.25 * sj * K * uj);
    }
    put(out, j, P);
  }
}

void VortexField::interaction_jacobian(std::span<const double> s,
                                       Eigen::Ref<Eigen::MatrixXd> out) const {
  out.setZero();
  const int m = n_ + (domain_.has_center() ? 1 : 0);
  if (domain_.kind == DomainKind::Sphere) {
    for (int j = 0; j < n_; ++j) {
      const cplx uj = at(s, j);
      const double sj = 1.0 + std::norm(uj);
      cplx P = 0.0, dP = 0.0;
      double K = 0.0;
      for (int k = 0; k < n_; ++k) {
        if (k == j) continue;
        const double kk = kappa_[static_cast<std::size_t>(k)];
        const cplx w = std::conj(uj - at(s, k));
        P += kk / w;
        dP += kk / (w * w);
        K += kk;
        add_block(out, j, k, 0.0, sign_ * 0.25 * sj * sj * kk / (w * w));
      }
      const cplx a = 0.5 * sj * std::conj(uj) * P - 0.25 * (std::norm(uj) + sj) * K;
      const cplx b = 0.5 * sj * uj * P - 0.25 * sj * sj * dP - 0.25 * uj * uj * K;
      add_block(out, j, j, sign_ * a, sign_ * b);
    }
    return;
  }
  for (int j = 0; j < m; ++j) {
    const cplx uj = at(s, j);
    for (int k = 0; k < m; ++k) {
      if (k == j) continue;
      const double kk = kappa_[static_cast<std::size_t>(k)];
      const cplx w = std::conj(uj - at(s, k));
      const cplx g = kk / (w * w);
      add_block(out, j, j, 0.0, -g);
      add_block(out, j, k, 0.0, g);
    }
    if (domain_.kind == DomainKind::Disk) {
      const double R2 = domain_.R * domain_.R;
      for (int k = 0; k < n_; ++k) {
        const double kk = kappa_[static_cast<std::size_t>(k)];
        const cplx uk = at(s, k);
        const cplx w = std::conj(uj) - R2 / uk;
        const cplx w2 = w * w;
        add_block(out, j, j, 0.0, kk / w2);
        add_block(out, j, k, kk * R2 / (uk * uk * w2), 0.0);
      }
    }
  }
}

void VortexField::interaction_kappa_derivative(std::span<const double> s,
                                               std::span<double> out) const {
  const int m = n_ + (domain_.has_center() ? 1 : 0);
  const int last = n_ - 1;
  const cplx ul = at(s, last);
  for (int j = 0; j < m; ++j) {
    const cplx uj = at(s, j);
    cplx d = 0.0;
    if (j != last) d = 1.0 / std::conj(uj - ul);
    if (domain_.kind == DomainKind::Disk && j < n_)
      d -= 1.0 / (std::conj(uj) - domain_.R * domain_.R / ul);
    if (domain_.kind == DomainKind::Sphere) {
      const double sj = 1.0 + std::norm(uj);
      d = (j == last) ? cplx{0.0} : sign_ * (0.25 * sj * sj * d - 0.25 * sj * uj);
    }
    put(out, j, d);
  }
}

void VortexField::interaction_domain_derivative(std::span<const double> s,
                                                std::span<double> out) const {
  std::fill(out.begin(), out.begin() + dim_, 0.0);
  if (domain_.kind == DomainKind::Disk) {
    const double R = domain_.R;
    for (int j = 0; j < n_; ++j) {
      const cplx uj = at(s, j);
      cplx d = 0.0;
      for (int k = 0; k < n_; ++k) {
        const cplx uk = at(s, k);
        const cplx w = std::conj(uj) - R * R / uk;
        d -= kappa_[static_cast<std::size_t>(k)] * 2.0 * R / (uk * w * w);
      }
      put(out, j, d);
    }
  } else if (domain_.kind == DomainKind::CenterVortex) {
    const cplx u0 = at(s, n_);
    for (int j = 0; j < n_; ++j) put(out, j, 1.0 / std::conj(at(s, j) - u0));
  }
}

void VortexField::interaction_batch(const Eigen::MatrixXd& states, Eigen::MatrixXd& out) const {
  const int m = n_ + (domain_.has_center() ? 1 : 0);
  const std::size_t B = static_cast<std::size_t>(states.cols());
  out.resize(dim_, states.cols());
  // Structure-of-arrays staging for the kernels.
  std::vector<double> x(static_cast<std::size_t>(m) * B), y(x.size()), re(x.size()), im(x.size());
  for (std::size_t b = 0; b < B; ++b)
    for (int j = 0; j < m; ++j) {
      x[j * B + b] = states(2 * j, static_cast<Eigen::Index>(b));
      y[j * B + b] = states(2 * j + 1, static_cast<Eigen::Index>(b));
    }
  kernels::SoaBatch batch{m, B, x.data(), y.data()};
  kernels::pair_sums(batch, kappa_.data(), re.data(), im.data());
  if (domain_.kind == DomainKind::Disk) {
    std::vector<double> ire(x.size()), iim(x.size());
    kernels::image_sums(kernels::SoaBatch{n_, B, x.data(), y.data()}, kappa_.data(),
                        domain_.R * domain_.R, ire.data(), iim.data());
    for (std::size_t i = 0; i < x.size(); ++i) {
      re[i] -= ire[i];
      im[i] -= iim[i];
    }
  } else if (domain_.kind == DomainKind::Sphere) {
    double total = 0.0;
    for (int k = 0; k < n_; ++k) total += kappa_[static_cast<std::size_t>(k)];
    for (int j = 0; j < n_; ++j) {
      const double K = total - kappa_[static_cast<std::size_t>(j)];
      for (std::size_t b = 0; b < B; ++b) {
        const std::size_t i = j * B + b;
        const double sj = 1.0 + x[i] * x[i] + y[i] * y[i];
        const double a = 0.25 * sj * sj, c = 0.25 * sj * K;
        re[i] = sign_ * (a * re[i] - c * x[i]);
        im[i] = sign_ * (a * im[i] - c * y[i]);
      }
    }
  }
  for (std::size_t b = 0; b < B; ++b)
    for (int j = 0; j < m; ++j) {
      out(2 * j, static_cast<Eigen::Index>(b)) = re[j * B + b];
      out(2 * j + 1, static_cast<Eigen::Index>(b)) = im[j * B + b];
    }
}

void VortexField::field_from_interaction(std::span<const double> s, std::span<const double> V,
                                         const SystemParams& p, std::span<double> out) const {
  const cplx c1 = p.T * cplx(p.lambda1, -1.0) * p.omega;
  const cplx c2 = p.T * cplx(p.lambda2, -1.0);
  const int m = dim_ / 2;
  for (int j = 0; j < m; ++j) put(out, j, c1 * at(s, j) - c2 * at(V, j));
}

void VortexField::field(std::span<const double> s, const SystemParams& p,
                        std::span<double> out) const {
  std::vector<double> V(static_cast<std::size_t>(dim_));
  interaction(s, V);
  field_from_interaction(s, V, p, out);
}

void VortexField::field_jacobian(std::span<const double> s, const SystemParams& p,
                                 Eigen::Ref<Eigen::MatrixXd> out) const {
  Eigen::MatrixXd JV(dim_, dim_);
  interaction_jacobian(s, JV);
  const cplx c1 = p.T * cplx(p.lambda1, -1.0) * p.omega;
  const cplx c2 = p.T * cplx(p.lambda2, -1.0);
  for (int j = 0; j < dim_ / 2; ++j) {
    const auto r0 = JV.row(2 * j);
    const auto r1 = JV.row(2 * j + 1);
    out.row(2 * j) = -(c2.real() * r0 - c2.imag() * r1);
    out.row(2 * j + 1) = -(c2.imag() * r0 + c2.real() * r1);
    out(2 * j, 2 * j) += c1.real();
    out(2 * j, 2 * j + 1) += -c1.imag();
    out(2 * j + 1, 2 * j) += c1.imag();
    out(2 * j + 1, 2 * j + 1) += c1.real();
  }
}

double hamiltonian(const DomainSpec& domain, const Configuration& config) {
  domain.validate();
  const Eigen::VectorXd s = config.state();
  const std::span<const double> st{s.data(), static_cast<std::size_t>(s.size())};
  validate_state(domain, config.n(), st);
  const int n = config.n();
  double H = 0.0;
  if (domain.kind == DomainKind::Sphere) {
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        if (k == j) continue;
        const cplx qj = at(st, j), qk = at(st, k);
        H -= 0.5 * config.kappa(j) * config.kappa(k) *
             std::log(std::norm(qj - qk) / ((1.0 + std::norm(qj)) * (1.0 + std::norm(qk))));
      }
    return H;
  }
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < j; ++k)
      H -= 0.5 * config.kappa(j) * config.kappa(k) * std::log(std::norm(at(st, j) - at(st, k)));
  if (domain.kind == DomainKind::Disk) {
    const double R2 = domain.R * domain.R;
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        H += 0.25 * config.kappa(j) * config.kappa(k) *
             std::log(std::norm(R2 - at(st, j) * std::conj(at(st, k))));
  } else if (domain.kind == DomainKind::CenterVortex) {
    const cplx q0 = at(st, n);
    for (int j = 0; j < n; ++j)
      H -= 0.5 * domain.mu * config.kappa(j) * std::log(std::norm(q0 - at(st, j)));
  }
  return H;
}

double angular_impulse(const DomainSpec& domain, const Configuration& config) {
  domain.validate();
  double G = 0.0;
  for (int j = 0; j < config.n(); ++j) {
    const double r2 = std::norm(config.positions[static_cast<std::size_t>(j)].z());
    G += config.kappa(j) * (domain.kind == DomainKind::Sphere ? r2 / (1.0 + r2) : 0.5 * r2);
  }
  if (domain.kind == DomainKind::CenterVortex && config.center)
    G += 0.5 * domain.mu * std::norm(config.center->z());
  return G;
}

std::vector<Point> augmented_field(const DomainSpec& domain, const SystemParams& params,
                                   const Configuration& config) {
  validate_configuration(domain, config);
  const VortexField vf(domain, config.n(), config.circulations);
  const Eigen::VectorXd s = config.state();
  std::vector<double> out(static_cast<std::size_t>(s.size()));
  if (domain.kind == DomainKind::Disk) {
    // image points must not coincide with vortices
    for (int j = 0; j < config.n(); ++j)
      for (int k = 0; k < config.n(); ++k) {
        const Point img = image_vortex(config.positions[static_cast<std::size_t>(k)], domain.R);
        if (std::abs(config.positions[static_cast<std::size_t>(j)].z() - img.z()) < kCollisionGuard)
          throw DomainError("vortex coincides with an image point");
      }
  }
  vf.field({s.data(), static_cast<std::size_t>(s.size())}, params, out);
  std::vector<Point> v(out.size() / 2);
  for (std::size_t j = 0; j < v.size(); ++j) v[j] = {out[2 * j], out[2 * j + 1]};
  return v;
}

std::vector<Point> rotating_field(const DomainSpec& domain, double omega,
                                  const Configuration& config) {
  return augmented_field(domain, SystemParams{omega, 1.0, 0.0, 0.0}, config);
}

Eigen::MatrixXd field_jacobian(const DomainSpec& domain, double omega,
                               const Configuration& config) {
  validate_configuration(domain, config);
  const VortexField vf(domain, config.n(), config.circulations);
  const Eigen::VectorXd s = config.state();
  Eigen::MatrixXd J(s.size(), s.size());
  vf.field_jacobian({s.data(), static_cast<std::size_t>(s.size())}, SystemParams{omega, 1.0, 0.0, 0.0},
                    J);
  return J;
}

Point image_vortex(Point q, double R) {
  const cplx z = q.z();
  if (z == cplx{0.0}) throw SingularInputError("image of the disk center is at infinity");
  return Point::from(R * R / std::conj(z));
}

Eigen::Vector3d sphere_lift(Point q, Chart chart) {
  const double r2 = q.x * q.x + q.y * q.y;
  const double inv = 1.0 / (1.0 + r2);
  Eigen::Vector3d v(2.0 * q.x * inv, 2.0 * q.y * inv, (r2 - 1.0) * inv);
  if (chart == Chart::South) v.z() = -v.z();
  return v;
}

Chart opposite(Chart chart) { return chart == Chart::North ? Chart::South : Chart::North; }

Configuration chart_switch(const Configuration& config) {
  Configuration out = config;
  for (auto& p : out.positions) {
    const cplx z = p.z();
    if (std::abs(z) < 1e-300) throw SingularInputError("vortex at the projection pole of the chart");
    p = Point::from(1.0 / std::conj(z));
  }
  return out;
}

}  // namespace vortex
