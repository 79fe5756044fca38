#include "dualrail/kernels.hpp"

namespace dualrail::kernels {

namespace {

void apply_minus_i_scalar(const cplx* h, int n, const cplx* x, cplx* y) {
  const auto* hd = reinterpret_cast<const double*>(h);
  const auto* xd = reinterpret_cast<const double*>(x);
  auto* yd = reinterpret_cast<double*>(y);
  for (int i = 0; i < n; ++i) {
    double re = 0.0;
    double im = 0.0;
    for (int j = 0; j < n; ++j) {
      const double ar = hd[2 * (j * n + i)];
      const double ai = hd[2 * (j * n + i) + 1];
      const double xr = xd[2 * j];
      const double xi = xd[2 * j + 1];
      re += ar * xr - ai * xi;
      im += ai * xr + ar * xi;
    }
    yd[2 * i] = im;
    yd[2 * i + 1] = -re;
  }
}

void combine_scalar(int n, const cplx* y0, double step, int terms, const double* coeffs, const cplx* const* ks,
                    cplx* out) {
  const auto* y0d = reinterpret_cast<const double*>(y0);
  auto* od = reinterpret_cast<double*>(out);
  for (int i = 0; i < 2 * n; ++i) {
    double acc = 0.0;
    for (int j = 0; j < terms; ++j) acc += coeffs[j] * reinterpret_cast<const double*>(ks[j])[i];
    od[i] = y0d[i] + step * acc;
  }
}

}  // namespace

const KernelSet& scalar_kernels() {
  static const KernelSet set{"scalar", apply_minus_i_scalar, combine_scalar};
  return set;
}

}  // namespace dualrail::kernels
