// Compiled with -mavx2 -mfma; only reached after a CPUID check.
#include <immintrin.h>

#include "cohprop/simd/kernels.hpp"

namespace cohprop::simd::detail {

namespace {

// Two interleaved complex doubles per register: [re0, im0, re1, im1].
inline __m256d cmul(__m256d x, __m256d y) {
  const __m256d yr = _mm256_movedup_pd(y);
  const __m256d yi = _mm256_permute_pd(y, 0xF);
  const __m256d xs = _mm256_permute_pd(x, 0x5);
  return _mm256_fmaddsub_pd(x, yr, _mm256_mul_pd(xs, yi));
}

inline __m256d conj(__m256d x) {
  return _mm256_xor_pd(x, _mm256_set_pd(-0.0, 0.0, -0.0, 0.0));
}

inline __m256d load(const cplx* p) { return _mm256_loadu_pd(reinterpret_cast<const double*>(p)); }

inline cplx hsum(__m256d acc) {
  const __m128d s = _mm_add_pd(_mm256_castpd256_pd128(acc), _mm256_extractf128_pd(acc, 1));
  alignas(16) double out[2];
  _mm_store_pd(out, s);
  return {out[0], out[1]};
}

}  // namespace

cplx dotc_avx2(std::span<const cplx> a, std::span<const cplx> b) {
  const std::size_t n = a.size();
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_add_pd(acc0, cmul(conj(load(&a[i])), load(&b[i])));
    acc1 = _mm256_add_pd(acc1, cmul(conj(load(&a[i + 2])), load(&b[i + 2])));
  }
  for (; i + 2 <= n; i += 2) acc0 = _mm256_add_pd(acc0, cmul(conj(load(&a[i])), load(&b[i])));
  cplx r = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) r += std::conj(a[i]) * b[i];
  return r;
}

cplx dotu_avx2(std::span<const cplx> a, std::span<const cplx> b) {
  const std::size_t n = a.size();
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_add_pd(acc0, cmul(load(&a[i]), load(&b[i])));
    acc1 = _mm256_add_pd(acc1, cmul(load(&a[i + 2]), load(&b[i + 2])));
  }
  for (; i + 2 <= n; i += 2) acc0 = _mm256_add_pd(acc0, cmul(load(&a[i]), load(&b[i])));
  cplx r = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) r += a[i] * b[i];
  return r;
}

cplx triple_avx2(std::span<const cplx> a, std::span<const cplx> b, std::span<const cplx> w) {
  const std::size_t n = a.size();
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_add_pd(acc0, cmul(cmul(conj(load(&a[i])), load(&b[i])), load(&w[i])));
    acc1 = _mm256_add_pd(acc1, cmul(cmul(conj(load(&a[i + 2])), load(&b[i + 2])), load(&w[i + 2])));
  }
  for (; i + 2 <= n; i += 2) {
    acc0 = _mm256_add_pd(acc0, cmul(cmul(conj(load(&a[i])), load(&b[i])), load(&w[i])));
  }
  cplx r = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) r += std::conj(a[i]) * b[i] * w[i];
  return r;
}

}  // namespace cohprop::simd::detail
