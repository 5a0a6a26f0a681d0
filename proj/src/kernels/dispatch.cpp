#include <atomic>
#include <cstdlib>
#include <cstring>

#include "vortex/kernels.hpp"

namespace vortex::kernels {

namespace {

bool cpu_has_avx2() {
#if defined(VORTEX_BUILD_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Isa initial_isa() {
  const char* env = std::getenv("VORTEX_SIMD");
  if (env && std::strcmp(env, "scalar") == 0) return Isa::Scalar;
  return detected_isa();
}

std::atomic<Isa>& current() {
  static std::atomic<Isa> isa{initial_isa()};
  return isa;
}

}  // namespace

std::string_view isa_name(Isa isa) { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

Isa detected_isa() {
  static const bool avx2 = cpu_has_avx2();
  return avx2 ? Isa::Avx2 : Isa::Scalar;
}

bool isa_available(Isa isa) { return isa == Isa::Scalar || detected_isa() == Isa::Avx2; }

Isa active_isa() { return current().load(std::memory_order_relaxed); }

Isa set_active_isa(Isa isa) {
  if (!isa_available(isa)) isa = Isa::Scalar;
  return current().exchange(isa);
}

void pair_sums(const SoaBatch& in, const double* kappa, double* out_re, double* out_im) {
#if defined(VORTEX_BUILD_AVX2)
  if (active_isa() == Isa::Avx2) return avx2::pair_sums(in, kappa, out_re, out_im);
#endif
  scalar::pair_sums(in, kappa, out_re, out_im);
}

void image_sums(const SoaBatch& in, const double* kappa, double radius_sq, double* out_re,
                double* out_im) {
#if defined(VORTEX_BUILD_AVX2)
  if (active_isa() == Isa::Avx2) return avx2::image_sums(in, kappa, radius_sq, out_re, out_im);
#endif
  scalar::image_sums(in, kappa, radius_sq, out_re, out_im);
}

}  // namespace vortex::kernels
