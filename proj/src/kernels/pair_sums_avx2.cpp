#include <immintrin.h>

#include "vortex/kernels.hpp"

namespace vortex::kernels::avx2 {

namespace {

// Remainder lanes fall back to the reference arithmetic.
inline void pair_tail(double xj, double yj, double xk, double yk, double kk, double& re,
                      double& im) {
  const double dx = xj - xk;
  const double dy = yj - yk;
  const double s = kk / (dx * dx + dy * dy);
  re += dx * s;
  im += dy * s;
}

}  // namespace

void pair_sums(const SoaBatch& in, const double* kappa, double* out_re, double* out_im) {
  const std::size_t B = in.batch;
  const std::size_t Bv = B & ~std::size_t{3};
  for (int j = 0; j < in.n; ++j) {
    const double* xj = in.x + j * B;
    const double* yj = in.y + j * B;
    double* re = out_re + j * B;
    double* im = out_im + j * B;
    for (std::size_t b = 0; b < Bv; b += 4) {
      const __m256d vxj = _mm256_loadu_pd(xj + b);
      const __m256d vyj = _mm256_loadu_pd(yj + b);
      __m256d acc_re = _mm256_setzero_pd();
      __m256d acc_im = _mm256_setzero_pd();
      for (int k = 0; k < in.n; ++k) {
        if (k == j) continue;
        const __m256d dx = _mm256_sub_pd(vxj, _mm256_loadu_pd(in.x + k * B + b));
        const __m256d dy = _mm256_sub_pd(vyj, _mm256_loadu_pd(in.y + k * B + b));
        const __m256d r2 = _mm256_fmadd_pd(dx, dx, _mm256_mul_pd(dy, dy));
        const __m256d s = _mm256_div_pd(_mm256_set1_pd(kappa[k]), r2);
        acc_re = _mm256_fmadd_pd(dx, s, acc_re);
        acc_im = _mm256_fmadd_pd(dy, s, acc_im);
      }
      _mm256_storeu_pd(re + b, acc_re);
      _mm256_storeu_pd(im + b, acc_im);
    }
    for (std::size_t b = Bv; b < B; ++b) {
      double r = 0.0, i = 0.0;
      for (int k = 0; k < in.n; ++k)
        if (k != j) pair_tail(xj[b], yj[b], in.x[k * B + b], in.y[k * B + b], kappa[k], r, i);
      re[b] = r;
      im[b] = i;
    }
  }
}

void image_sums(const SoaBatch& in, const double* kappa, double radius_sq, double* out_re,
                double* out_im) {
  const std::size_t B = in.batch;
  const std::size_t Bv = B & ~std::size_t{3};
  const __m256d vR2 = _mm256_set1_pd(radius_sq);
  for (int j = 0; j < in.n; ++j) {
    const double* xj = in.x + j * B;
    const double* yj = in.y + j * B;
    double* re = out_re + j * B;
    double* im = out_im + j * B;
    for (std::size_t b = 0; b < Bv; b += 4) {
      const __m256d vxj = _mm256_loadu_pd(xj + b);
      const __m256d vyj = _mm256_loadu_pd(yj + b);
      __m256d acc_re = _mm256_setzero_pd();
      __m256d acc_im = _mm256_setzero_pd();
      for (int k = 0; k < in.n; ++k) {
        const __m256d xk = _mm256_loadu_pd(in.x + k * B + b);
        const __m256d yk = _mm256_loadu_pd(in.y + k * B + b);
        const __m256d f =
            _mm256_div_pd(vR2, _mm256_fmadd_pd(xk, xk, _mm256_mul_pd(yk, yk)));
        const __m256d dx = _mm256_fnmadd_pd(f, xk, vxj);
        const __m256d dy = _mm256_fnmadd_pd(f, yk, vyj);
        const __m256d r2 = _mm256_fmadd_pd(dx, dx, _mm256_mul_pd(dy, dy));
        const __m256d s = _mm256_div_pd(_mm256_set1_pd(kappa[k]), r2);
        acc_re = _mm256_fmadd_pd(dx, s, acc_re);
        acc_im = _mm256_fmadd_pd(dy, s, acc_im);
      }
      _mm256_storeu_pd(re + b, acc_re);
      _mm256_storeu_pd(im + b, acc_im);
    }
    for (std::size_t b = Bv; b < B; ++b) {
      double r = 0.0, i = 0.0;
      for (int k = 0; k < in.n; ++k) {
        const double xk = in.x[k * B + b];
        const double yk = in.y[k * B + b];
        const double f = radius_sq / (xk * xk + yk * yk);
        pair_tail(xj[b], yj[b], f * xk, f * yk, kappa[k], r, i);
      }
      re[b] = r;
      im[b] = i;
    }
  }
}

}  // namespace vortex::kernels::avx2
