#include <cassert>

#include "cohprop/simd/kernels.hpp"

namespace cohprop::simd::detail {

cplx dotc_scalar(std::span<const cplx> a, std::span<const cplx> b) {
  assert(a.size() == b.size());
  double re = 0.0;
  double im = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    re += a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
    im += a[i].real() * b[i].imag() - a[i].imag() * b[i].real();
  }
  return {re, im};
}

cplx dotu_scalar(std::span<const cplx> a, std::span<const cplx> b) {
  assert(a.size() == b.size());
  double re = 0.0;
  double im = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    re += a[i].real() * b[i].real() - a[i].imag() * b[i].imag();
    im += a[i].real() * b[i].imag() + a[i].imag() * b[i].real();
  }
  return {re, im};
}

cplx triple_scalar(std::span<const cplx> a, std::span<const cplx> b, std::span<const cplx> w) {
  assert(a.size() == b.size() && a.size() == w.size());
  double re = 0.0;
  double im = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double cr = a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
    const double ci = a[i].real() * b[i].imag() - a[i].imag() * b[i].real();
    re += cr * w[i].real() - ci * w[i].imag();
    im += cr * w[i].imag() + ci * w[i].real();
  }
  return {re, im};
}

}  // namespace cohprop::simd::detail
