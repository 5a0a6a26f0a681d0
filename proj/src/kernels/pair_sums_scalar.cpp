#include "vortex/kernels.hpp"

namespace vortex::kernels::scalar {

void pair_sums(const SoaBatch& in, const double* kappa, double* out_re, double* out_im) {
  const std::size_t B = in.batch;
  for (int j = 0; j < in.n; ++j) {
    const double* xj = in.x + j * B;
    const double* yj = in.y + j * B;
    double* re = out_re + j * B;
    double* im = out_im + j * B;
    for (std::size_t b = 0; b < B; ++b) {
      re[b] = 0.0;
      im[b] = 0.0;
    }
    for (int k = 0; k < in.n; ++k) {
      if (k == j) continue;
      const double* xk = in.x + k * B;
      const double* yk = in.y + k * B;
      const double kk = kappa[k];
      for (std::size_t b = 0; b < B; ++b) {
        const double dx = xj[b] - xk[b];
        const double dy = yj[b] - yk[b];
        const double s = kk / (dx * dx + dy * dy);
        re[b] += dx * s;
        im[b] += dy * s;
      }
    }
  }
}

void image_sums(const SoaBatch& in, const double* kappa, double radius_sq, double* out_re,
                double* out_im) {
  const std::size_t B = in.batch;
  for (int j = 0; j < in.n; ++j) {
    const double* xj = in.x + j * B;
    const double* yj = in.y + j * B;
    double* re = out_re + j * B;
    double* im = out_im + j * B;
    for (std::size_t b = 0; b < B; ++b) {
      re[b] = 0.0;
      im[b] = 0.0;
    }
    for (int k = 0; k < in.n; ++k) {
      const double* xk = in.x + k * B;
      const double* yk = in.y + k * B;
      const double kk = kappa[k];
      for (std::size_t b = 0; b < B; ++b) {
        // image point R^2 u_k / |u_k|^2
        const double f = radius_sq / (xk[b] * xk[b] + yk[b] * yk[b]);
        const double dx = xj[b] - f * xk[b];
        const double dy = yj[b] - f * yk[b];
        const double s = kk / (dx * dx + dy * dy);
        re[b] += dx * s;
        im[b] += dy * s;
      }
    }
  }
}

}  // namespace vortex::kernels::scalar
