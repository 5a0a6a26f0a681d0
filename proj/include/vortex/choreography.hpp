#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "vortex/bvp.hpp"

namespace vortex {

struct ResonanceSpec {
  int n = 0;
  int k = 0;
  int l = 0;
  int m = 1;
  int k_tilde = 0;  // in [0, n)
  int l_star = 0;   // in [0, m)
  int d = 1;        // gcd(k, n)
  // k - (k l - m) l* reduced modulo n m: vortex j runs q_n shifted by
  // j * shift * T / n. Reducing modulo n alone would change the shift by whole
  // periods T, which rotate q_n by e^{2 pi i l/m}.
  int shift = 0;
};

// Resonance arithmetic of an l:m orbit on a family with symmetry index k.
// Throws NotResonantError unless gcd(l, m) = 1, m > 0 and k l - m is a
// multiple of n.
ResonanceSpec resonance_data(int k, int l, int m, int n);

// Multiplicative inverse of a modulo m in [0, m); 0 for m = 1. Throws
// NotResonantError when gcd(a, m) != 1.
int modular_inverse(int a, int m);

struct ChoreographyPaths {
  double T = 0.0;      // rotating-frame period of the orbit
  double omega = 0.0;  // frame frequency 2 pi / T0
  int periods = 1;     // samples cover [0, periods * T)
  std::vector<double> times;
  std::vector<std::vector<cplx>> rotating;  // u_j(t), ring vortices
  std::vector<std::vector<cplx>> paths;     // q_j(t) = e^{i omega t} u_j(t)
  std::optional<std::vector<cplx>> center_rotating;
  std::optional<std::vector<cplx>> center_path;
  std::optional<std::vector<std::vector<Eigen::Vector3d>>> sphere_paths;

  int n() const { return static_cast<int>(paths.size()); }
  int samples() const { return static_cast<int>(times.size()); }
  double duration() const { return periods * T; }
};

// Samples of the inertial-frame motion over `periods` rotating-frame
// periods, `samples_per_period` points per period (uniform, endpoint
// excluded). No resonance check.
ChoreographyPaths inertial_paths(const PeriodicOrbit& orbit, int periods, int samples_per_period);

// Same over m periods after checking |rho - l/m| < 1e-8.
ChoreographyPaths reconstruct_inertial(const PeriodicOrbit& orbit, const ResonanceSpec& spec,
                                       int samples_per_period = 256);

// Value of a uniformly sampled periodic signal at fractional sample
// position `shift` (trigonometric interpolation).
class PeriodicInterpolant {
 public:
  explicit PeriodicInterpolant(const std::vector<cplx>& samples);
  cplx operator()(double position) const;
  // The whole signal shifted by `shift` samples.
  std::vector<cplx> shifted(double shift) const;

 private:
  std::vector<cplx> coeffs_;
};

struct ChoreographyReport {
  double residual = 0.0;  // max_j,t |q_j(t) - q_n(t + j k~ T / n)|
  double closure = 0.0;   // max_j |q_j(periods T) - q_j(0)|, from the interpolant
  int d = 1;
  bool full = true;       // all ring vortices share one curve (d = 1)
};

ChoreographyReport verify_choreography(const ChoreographyPaths& paths, const ResonanceSpec& spec);

// Winding number of a closed sampled curve around `center`. Throws
// SingularInputError when the curve passes within 1e-8 of the center and
// PreconditionError when the increments cannot be resolved.
int winding_number(const std::vector<cplx>& path, cplx center = 0.0);
cplx centroid(const std::vector<cplx>& path);

// Max over t of |q_n(t + l* T) e^{-2 pi i/m} - q_n(t)|.
double rotation_symmetry_residual(const ChoreographyPaths& paths, const ResonanceSpec& spec);

}  // namespace vortex
