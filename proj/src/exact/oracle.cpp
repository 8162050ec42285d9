#include <cmath>

#include <lapacke.h>

#include "cohprop/exact.hpp"
#include "cohprop/simd/kernels.hpp"

namespace cohprop {

Spectrum diagonalize(const OperatorPoly& op, int n_max) {
  FockOperator fm = fock_matrix(op, n_max);
  Spectrum s;
  s.n_max = n_max;
  s.asymmetry = (fm.matrix - fm.matrix.adjoint()).cwiseAbs().maxCoeff();
  const Eigen::MatrixXcd sym = 0.5 * (fm.matrix + fm.matrix.adjoint());
  const lapack_int n = static_cast<lapack_int>(sym.rows());
  s.energies.resize(n);
  if (sym.imag().cwiseAbs().maxCoeff() == 0.0) {
    Eigen::MatrixXd a = sym.real();
    const lapack_int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'U', n, a.data(), n, s.energies.data());
    if (info != 0) throw Error("diagonalize: eigensolver failed (info " + std::to_string(info) + ")");
    s.vectors = a.cast<cplx>();
  } else {
    s.vectors = sym;
    const lapack_int info = LAPACKE_zheevd(LAPACK_COL_MAJOR, 'V', 'U', n,
                                           reinterpret_cast<lapack_complex_double*>(s.vectors.data()), n,
                                           s.energies.data());
    if (info != 0) throw Error("diagonalize: eigensolver failed (info " + std::to_string(info) + ")");
  }
  return s;
}

ExactOracle::ExactOracle(OperatorPoly op) : op_(std::move(op)) {
  if (!op_.is_hermitian()) throw NotHermitianError("exact propagator requires a Hermitian operator");
}

std::shared_ptr<const Spectrum> ExactOracle::spectrum(int n_max) const {
  {
    std::lock_guard lock(mutex_);
    if (auto it = cache_.find(n_max); it != cache_.end()) return it->second;
  }
  auto s = std::make_shared<const Spectrum>(diagonalize(op_, n_max));
  std::lock_guard lock(mutex_);
  return cache_.try_emplace(n_max, std::move(s)).first->second;
}

cplx ExactOracle::propagator(cplx z1, cplx z2, double T, int n_max) const {
  const auto s = spectrum(n_max);
  const std::size_t dim = static_cast<std::size_t>(n_max) + 1;
  const FockVector c1 = coherent_vector(z1, n_max, op_.scales());
  const FockVector c2 = coherent_vector(z2, n_max, op_.scales());
  const std::span<const cplx> vecs(s->vectors.data(), dim * dim);
  std::vector<cplx> p1(dim), p2(dim), phase(dim);
  simd::adjoint_times(vecs, dim, dim, c1.coefficients, p1);
  simd::adjoint_times(vecs, dim, dim, c2.coefficients, p2);
  const double rate = T / op_.scales().hbar();
  for (std::size_t j = 0; j < dim; ++j) phase[j] = std::polar(1.0, -s->energies[static_cast<Eigen::Index>(j)] * rate);
  return simd::active().triple(p2, p1, phase);
}

ConvergedValue ExactOracle::converged(cplx z1, cplx z2, double T, const TruncationOptions& opts) const {
  if (!(opts.tol > 0.0)) throw Error("auto_truncate: tol must be positive");
  int n = std::max(opts.start, op_.degree());
  cplx k_n = propagator(z1, z2, T, n);
  while (2 * n <= opts.cap) {
    const cplx k_2n = propagator(z1, z2, T, 2 * n);
    if (std::abs(k_n - k_2n) <= opts.tol * std::max(std::abs(k_2n), 1e-12)) return {k_2n, n};
    n *= 2;
    k_n = k_2n;
  }
  throw TruncationError("auto_truncate: no convergence up to n_max = " + std::to_string(opts.cap) +
                        " (is the spectrum bounded below?)");
}

cplx exact_propagator(const OperatorPoly& op, cplx z1, cplx z2, double T, int n_max) {
  return ExactOracle(op).propagator(z1, z2, T, n_max);
}

int auto_truncate(const OperatorPoly& op, cplx z1, cplx z2, double T, double tol, int cap) {
  return ExactOracle(op).converged(z1, z2, T, TruncationOptions{tol, 32, cap}).n_max;
}

}  // namespace cohprop
