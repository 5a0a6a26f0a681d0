#include "vortex/choreography.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <string>
#include <utility>

#include <unsupported/Eigen/FFT>

#include "vortex/errors.hpp"

namespace vortex {

namespace {

long long floor_mod(long long a, long long b) { return ((a % b) + b) % b; }

cplx at(const Eigen::VectorXd& x, int j) { return {x[2 * j], x[2 * j + 1]}; }

}  // namespace

int modular_inverse(int a, int m) {
  if (m <= 0) throw NotResonantError("modulus must be positive");
  if (m == 1) return 0;
  // extended Euclid on (a mod m, m)
  long long r0 = floor_mod(a, m), r1 = m, s0 = 1, s1 = 0;
  while (r1 != 0) {
    const long long q = r0 / r1;
    r0 = std::exchange(r1, r0 - q * r1);
    s0 = std::exchange(s1, s0 - q * s1);
  }
  if (r0 != 1) throw NotResonantError(std::to_string(a) + " has no inverse modulo " + std::to_string(m));
  return static_cast<int>(floor_mod(s0, m));
}

ResonanceSpec resonance_data(int k, int l, int m, int n) {
  if (n < 2) throw PreconditionError("resonance data needs n >= 2");
  if (k < 1 || k > n) throw PreconditionError("symmetry index k must lie in 1..n");
  if (m <= 0 || std::gcd(l, m) != 1)
    throw NotResonantError(std::to_string(l) + ":" + std::to_string(m) + " is not a reduced ratio");
  const long long kl = static_cast<long long>(k) * l - m;
  if (kl % n != 0)
    throw NotResonantError("k l - m = " + std::to_string(kl) + " is not a multiple of n = " + std::to_string(n));
  ResonanceSpec s;
  s.n = n;
  s.k = k;
  s.l = l;
  s.m = m;
  s.l_star = modular_inverse(l, m);
  const long long raw = k - kl * s.l_star;
  s.k_tilde = static_cast<int>(floor_mod(raw, n));
  s.shift = static_cast<int>(floor_mod(raw, static_cast<long long>(n) * m));
  s.d = std::gcd(k, n);
  return s;
}

ChoreographyPaths inertial_paths(const PeriodicOrbit& orbit, int periods, int spp) {
  if (periods < 1 || spp < 8) throw PreconditionError("need at least one period and 8 samples per period");
  if (!(orbit.T > 0.0)) throw PreconditionError("inertial reconstruction needs a positive period");
  const int n = orbit.n;
  ChoreographyPaths p;
  p.T = orbit.T;
  p.omega = orbit.omega();
  p.periods = periods;
  const int total = periods * spp;
  p.times.resize(static_cast<std::size_t>(total));
  p.rotating.assign(static_cast<std::size_t>(n), std::vector<cplx>(static_cast<std::size_t>(total)));
  p.paths = p.rotating;
  const bool center = orbit.domain.has_center();
  if (center) {
    p.center_rotating.emplace(static_cast<std::size_t>(total));
    p.center_path.emplace(static_cast<std::size_t>(total));
  }
  std::vector<Eigen::VectorXd> period(static_cast<std::size_t>(spp));
  for (int i = 0; i < spp; ++i) period[static_cast<std::size_t>(i)] = orbit.state(static_cast<double>(i) / spp);
  for (int i = 0; i < total; ++i) {
    const auto ii = static_cast<std::size_t>(i);
    const double t = orbit.T * i / spp;
    p.times[ii] = t;
    const cplx rot = std::polar(1.0, p.omega * t);
    const Eigen::VectorXd& x = period[static_cast<std::size_t>(i % spp)];
    for (int j = 0; j < n; ++j) {
      p.rotating[static_cast<std::size_t>(j)][ii] = at(x, j);
      p.paths[static_cast<std::size_t>(j)][ii] = rot * at(x, j);
    }
    if (center) {
      (*p.center_rotating)[ii] = at(x, n);
      (*p.center_path)[ii] = rot * at(x, n);
    }
  }
  if (orbit.domain.kind == DomainKind::Sphere) {
    auto& lifted = p.sphere_paths.emplace(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
      auto& dst = lifted[static_cast<std::size_t>(j)];
      dst.reserve(static_cast<std::size_t>(total));
      for (const cplx& q : p.paths[static_cast<std::size_t>(j)])
        dst.push_back(sphere_lift(Point::from(q), orbit.domain.chart));
    }
  }
  return p;
}

ChoreographyPaths reconstruct_inertial(const PeriodicOrbit& orbit, const ResonanceSpec& spec, int spp) {
  const double ratio = static_cast<double>(spec.l) / spec.m;
  if (std::abs(orbit.rho() - ratio) > 1e-8)
    throw PreconditionError("orbit has rho = " + std::to_string(orbit.rho()) + ", not " +
                            std::to_string(spec.l) + ":" + std::to_string(spec.m));
  return inertial_paths(orbit, spec.m, spp);
}

PeriodicInterpolant::PeriodicInterpolant(const std::vector<cplx>& samples) {
  if (samples.empty()) throw PreconditionError("empty signal");
  Eigen::FFT<double> fft;
  fft.fwd(coeffs_, samples);
  const double M = static_cast<double>(samples.size());
  for (cplx& c : coeffs_) c /= M;
}

cplx PeriodicInterpolant::operator()(double x) const {
  const int M = static_cast<int>(coeffs_.size());
  cplx s = 0.0;
  for (int k = 0; k < M; ++k) {
    if (2 * k == M) {
      s += coeffs_[static_cast<std::size_t>(k)] * std::cos(std::numbers::pi * x);
      continue;
    }
    const int f = 2 * k < M ? k : k - M;
    s += coeffs_[static_cast<std::size_t>(k)] * std::polar(1.0, 2.0 * std::numbers::pi * f * x / M);
  }
  return s;
}

std::vector<cplx> PeriodicInterpolant::shifted(double shift) const {
  const int M = static_cast<int>(coeffs_.size());
  std::vector<cplx> c(coeffs_);
  for (int k = 0; k < M; ++k) {
    auto& ck = c[static_cast<std::size_t>(k)];
    if (2 * k == M) {
      // on the grid the Nyquist term is (-1)^i cos(pi (i + shift))
      ck *= std::cos(std::numbers::pi * shift);
      continue;
    }
    const int f = 2 * k < M ? k : k - M;
    ck *= std::polar(1.0, 2.0 * std::numbers::pi * f * shift / M);
  }
  Eigen::FFT<double> fft;
  fft.SetFlag(Eigen::FFT<double>::Unscaled);
  std::vector<cplx> out;
  fft.inv(out, c);
  return out;
}

ChoreographyReport verify_choreography(const ChoreographyPaths& p, const ResonanceSpec& spec) {
  const int n = p.n();
  if (n != spec.n) throw PreconditionError("resonance data and paths disagree on n");
  ChoreographyReport r;
  r.d = spec.d;
  r.full = spec.d == 1;
  const int spp = p.samples() / p.periods;
  const PeriodicInterpolant qn(p.paths.back());
  for (int j = 1; j < n; ++j) {
    const double shift = static_cast<double>(j) * spec.shift * spp / n;
    const std::vector<cplx> s = qn.shifted(shift);
    const auto& qj = p.paths[static_cast<std::size_t>(j - 1)];
    for (std::size_t i = 0; i < s.size(); ++i) r.residual = std::max(r.residual, std::abs(qj[i] - s[i]));
  }
  const cplx turn = std::polar(1.0, p.omega * p.duration());
  for (const auto& u : p.rotating) r.closure = std::max(r.closure, std::abs((turn - 1.0) * u.front()));
  return r;
}

int winding_number(const std::vector<cplx>& path, cplx center) {
  if (path.size() < 3) throw PreconditionError("winding number needs at least three samples");
  double total = 0.0;
  for (std::size_t i = 0; i < path.size(); ++i) {
    const cplx a = path[i] - center;
    const cplx b = path[(i + 1) % path.size()] - center;
    if (std::abs(a) < 1e-8) throw SingularInputError("path passes through the winding center");
    const double d = std::arg(b / a);
    if (std::abs(d) > 0.5 * std::numbers::pi)
      throw PreconditionError("path is undersampled for a winding count around this center");
    total += d;
  }
  const double w = total / (2.0 * std::numbers::pi);
  const double r = std::round(w);
  if (std::abs(w - r) > 0.1) throw PreconditionError("winding count is not close to an integer");
  return static_cast<int>(r);
}

cplx centroid(const std::vector<cplx>& path) {
  cplx s = 0.0;
  for (const cplx& z : path) s += z;
  return path.empty() ? s : s / static_cast<double>(path.size());
}

double rotation_symmetry_residual(const ChoreographyPaths& p, const ResonanceSpec& spec) {
  if (spec.m == 1) return 0.0;
  const int spp = p.samples() / p.periods;
  const auto& qn = p.paths.back();
  const std::vector<cplx> s =
      PeriodicInterpolant(qn).shifted(static_cast<double>(spec.l_star) * spp);
  const cplx back = std::polar(1.0, -2.0 * std::numbers::pi / spec.m);
  double worst = 0.0;
  for (std::size_t i = 0; i < qn.size(); ++i) worst = std::max(worst, std::abs(s[i] * back - qn[i]));
  return worst;
}

}  // namespace vortex
