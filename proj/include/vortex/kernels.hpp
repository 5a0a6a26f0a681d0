#pragma once

// Batched vortex interaction sums.
//
// Layout is structure-of-arrays over a batch of B configurations of n vortices:
// coordinate x of vortex j in configuration b lives at x[j * B + b]. The
// outputs use the same layout. All kernels compute, per (j, b),
//
//   pair:  P_j = sum_{k != j} kappa_k / conj(u_j - u_k)
//   image: Q_j = sum_k kappa_k / conj(u_j - R^2 / conj(u_k))
//
// The scalar versions are the reference; the AVX2 versions vectorise over the
// batch index and must agree with them to rounding (FMA contraction allowed).

#include <cstddef>
#include <string_view>

namespace vortex::kernels {

struct SoaBatch {
  int n = 0;               // vortices per configuration
  std::size_t batch = 0;   // number of configurations
  const double* x = nullptr;
  const double* y = nullptr;
};

enum class Isa { Scalar, Avx2 };

std::string_view isa_name(Isa isa);

// Best instruction set supported by this CPU and build. The environment
// variable VORTEX_SIMD=scalar forces the reference path.
Isa detected_isa();
Isa active_isa();
// Override for tests; returns the previous setting.
Isa set_active_isa(Isa isa);
bool isa_available(Isa isa);

void pair_sums(const SoaBatch& in, const double* kappa, double* out_re, double* out_im);
void image_sums(const SoaBatch& in, const double* kappa, double radius_sq, double* out_re,
                double* out_im);

namespace scalar {
void pair_sums(const SoaBatch& in, const double* kappa, double* out_re, double* out_im);
void image_sums(const SoaBatch& in, const double* kappa, double radius_sq, double* out_re,
                double* out_im);
}  // namespace scalar

namespace avx2 {
void pair_sums(const SoaBatch& in, const double* kappa, double* out_re, double* out_im);
void image_sums(const SoaBatch& in, const double* kappa, double radius_sq, double* out_re,
                double* out_im);
}  // namespace avx2

}  // namespace vortex::kernels
