#include <cstdlib>
#include <string_view>

#include "dualrail/kernels.hpp"

namespace dualrail::kernels {

#if defined(DUALRAIL_BUILD_AVX2)
const KernelSet& avx2_kernel_set();
#endif

const KernelSet* avx2_kernels() {
#if defined(DUALRAIL_BUILD_AVX2) && (defined(__GNUC__) || defined(__clang__))
  static const bool supported = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return supported ? &avx2_kernel_set() : nullptr;
#else
  return nullptr;
#endif
}

const KernelSet& active_kernels() {
  static const KernelSet& chosen = [] () -> const KernelSet& {
    const char* env = std::getenv("DUALRAIL_KERNELS");
    if (env != nullptr && std::string_view(env) == "scalar") return scalar_kernels();
    const KernelSet* fast = avx2_kernels();
    return fast != nullptr ? *fast : scalar_kernels();
  }();
  return chosen;
}

}  // namespace dualrail::kernels
