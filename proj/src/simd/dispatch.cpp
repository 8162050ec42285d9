#include <cstdlib>
#include <cstring>

#include "cohprop/simd/kernels.hpp"

namespace cohprop::simd {

const KernelTable& scalar_kernels() {
  static const KernelTable table{"scalar", detail::dotc_scalar, detail::dotu_scalar, detail::triple_scalar};
  return table;
}

const KernelTable* avx2_kernels() {
#if defined(COHPROP_HAVE_AVX2)
  static const bool supported = [] {
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  }();
  static const KernelTable table{"avx2", detail::dotc_avx2, detail::dotu_avx2, detail::triple_avx2};
  return supported ? &table : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable& active() {
  static const KernelTable& chosen = []() -> const KernelTable& {
    const char* env = std::getenv("COHPROP_SIMD");
    if (env != nullptr && std::strcmp(env, "scalar") == 0) return scalar_kernels();
    if (const KernelTable* t = avx2_kernels()) return *t;
    return scalar_kernels();
  }();
  return chosen;
}

void adjoint_times(std::span<const cplx> matrix, std::size_t rows, std::size_t cols,
                   std::span<const cplx> x, std::span<cplx> y, const KernelTable& k) {
  for (std::size_t j = 0; j < cols; ++j) {
    y[j] = k.dotc(matrix.subspan(j * rows, rows), x.first(rows));
  }
}

}  // namespace cohprop::simd
