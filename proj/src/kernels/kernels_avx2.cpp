#include <immintrin.h>

#include "dualrail/kernels.hpp"

namespace dualrail::kernels {

namespace {

void apply_minus_i_avx2(const cplx* h, int n, const cplx* x, cplx* y) {
  const auto* hd = reinterpret_cast<const double*>(h);
  const auto* xd = reinterpret_cast<const double*>(x);
  auto* yd = reinterpret_cast<double*>(y);
  const __m256d flip = _mm256_set_pd(-0.0, 0.0, -0.0, 0.0);
  int i = 0;
  for (; i + 1 < n; i += 2) {
    __m256d acc = _mm256_setzero_pd();
    for (int j = 0; j < n; ++j) {
      const __m256d a = _mm256_loadu_pd(hd + 2 * (j * n + i));
      const __m256d xr = _mm256_broadcast_sd(xd + 2 * j);
      const __m256d xi = _mm256_broadcast_sd(xd + 2 * j + 1);
      const __m256d cross = _mm256_mul_pd(_mm256_permute_pd(a, 0b0101), xi);
      acc = _mm256_add_pd(acc, _mm256_fmaddsub_pd(a, xr, cross));
    }
    // -i (re + i im) = im - i re
    _mm256_storeu_pd(yd + 2 * i, _mm256_xor_pd(_mm256_permute_pd(acc, 0b0101), flip));
  }
  for (; i < n; ++i) {
    double re = 0.0;
    double im = 0.0;
    for (int j = 0; j < n; ++j) {
      const double ar = hd[2 * (j * n + i)];
      const double ai = hd[2 * (j * n + i) + 1];
      re += ar * xd[2 * j] - ai * xd[2 * j + 1];
      im += ai * xd[2 * j] + ar * xd[2 * j + 1];
    }
    yd[2 * i] = im;
    yd[2 * i + 1] = -re;
  }
}

void combine_avx2(int n, const cplx* y0, double step, int terms, const double* coeffs, const cplx* const* ks,
                  cplx* out) {
  const auto* y0d = reinterpret_cast<const double*>(y0);
  auto* od = reinterpret_cast<double*>(out);
  const int m = 2 * n;
  const __m256d hv = _mm256_set1_pd(step);
  int i = 0;
  for (; i + 3 < m; i += 4) {
    __m256d acc = _mm256_setzero_pd();
    for (int j = 0; j < terms; ++j) {
      acc = _mm256_fmadd_pd(_mm256_set1_pd(coeffs[j]), _mm256_loadu_pd(reinterpret_cast<const double*>(ks[j]) + i), acc);
    }
    _mm256_storeu_pd(od + i, _mm256_fmadd_pd(hv, acc, _mm256_loadu_pd(y0d + i)));
  }
  for (; i < m; ++i) {
    double acc = 0.0;
    for (int j = 0; j < terms; ++j) acc += coeffs[j] * reinterpret_cast<const double*>(ks[j])[i];
    od[i] = y0d[i] + step * acc;
  }
}

}  // namespace

const KernelSet& avx2_kernel_set() {
  static const KernelSet set{"avx2", apply_minus_i_avx2, combine_avx2};
  return set;
}

}  // namespace dualrail::kernels
