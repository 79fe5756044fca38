#pragma once

#include <complex>

namespace dualrail::kernels {

using cplx = std::complex<double>;

/// y = -i H x for a column-major n x n complex matrix.
using ApplyFn = void (*)(const cplx* h, int n, const cplx* x, cplx* y);

/// out = y0 + step * sum_j coeffs[j] * ks[j] over n complex entries.
using CombineFn = void (*)(int n, const cplx* y0, double step, int terms, const double* coeffs,
                           const cplx* const* ks, cplx* out);

struct KernelSet {
  const char* name;
  ApplyFn apply_minus_i;
  CombineFn combine;
};

/// Portable reference implementation.
const KernelSet& scalar_kernels();

/// AVX2+FMA implementation, or nullptr when it was not built or the CPU lacks
/// the instructions.
const KernelSet* avx2_kernels();

/// Kernels used by the propagator. Chosen once per process: AVX2 when
/// available unless the environment variable DUALRAIL_KERNELS=scalar.
const KernelSet& active_kernels();

}  // namespace dualrail::kernels
