#pragma once

// Complex inner-product kernels used by the Fock-space oracle.
// Every kernel has a portable scalar reference and, on x86-64, an AVX2/FMA
// variant; active() picks one at runtime from CPUID.
// Setting COHPROP_SIMD=scalar in the environment forces the scalar path.

#include <complex>
#include <span>
#include <string_view>

namespace cohprop::simd {

using cplx = std::complex<double>;

// sum conj(a_i) b_i
using DotFn = cplx (*)(std::span<const cplx> a, std::span<const cplx> b);
// sum conj(a_i) b_i w_i
using TripleFn = cplx (*)(std::span<const cplx> a, std::span<const cplx> b, std::span<const cplx> w);

struct KernelTable {
  std::string_view name;
  DotFn dotc;  // conjugated dot
  DotFn dotu;  // plain dot: sum a_i b_i
  TripleFn triple;
};

const KernelTable& scalar_kernels();
// nullptr when not compiled in or not supported by this CPU.
const KernelTable* avx2_kernels();
const KernelTable& active();

// y_j = sum_i conj(M_ij) x_i for a column-major rows x cols matrix.
void adjoint_times(std::span<const cplx> matrix, std::size_t rows, std::size_t cols,
                   std::span<const cplx> x, std::span<cplx> y, const KernelTable& k = active());

namespace detail {
cplx dotc_scalar(std::span<const cplx> a, std::span<const cplx> b);
cplx dotu_scalar(std::span<const cplx> a, std::span<const cplx> b);
cplx triple_scalar(std::span<const cplx> a, std::span<const cplx> b, std::span<const cplx> w);
#if defined(COHPROP_HAVE_AVX2)
cplx dotc_avx2(std::span<const cplx> a, std::span<const cplx> b);
cplx dotu_avx2(std::span<const cplx> a, std::span<const cplx> b);
cplx triple_avx2(std::span<const cplx> a, std::span<const cplx> b, std::span<const cplx> w);
#endif
}  // namespace detail

}  // namespace cohprop::simd
