#include <cmath>

#include "cohprop/exact.hpp"
#include "cohprop/simd/kernels.hpp"

namespace cohprop {

double FockVector::norm() const {
  return std::sqrt(std::abs(simd::active().dotc(coefficients, coefficients)));
}

FockVector coherent_vector(cplx z, int n_max, const ScaleParams& scales) {
  if (n_max < 0) throw Error("coherent_vector: n_max must be non-negative");
  FockVector out{std::vector<cplx>(static_cast<std::size_t>(n_max) + 1), scales, std::norm(z) > n_max};
  out.coefficients[0] = std::exp(-0.5 * std::norm(z));
  for (int k = 0; k < n_max; ++k) {
    out.coefficients[k + 1] = out.coefficients[k] * z / std::sqrt(static_cast<double>(k + 1));
  }
  return out;
}

cplx overlap(cplx z2, cplx z1) {
  return std::exp(-0.5 * std::norm(z2) + std::conj(z2) * z1 - 0.5 * std::norm(z1));
}

// <k| ad^m a^n |l> = sqrt(l!/(l-n)!) sqrt(k!/(l-n)!), k = l - n + m, l >= n.
FockOperator fock_matrix(const OperatorPoly& op, int n_max) {
  if (n_max < op.degree()) {
    throw DegreeError("fock_matrix: n_max " + std::to_string(n_max) + " is below the operator degree " +
                      std::to_string(op.degree()));
  }
  const int dim = n_max + 1;
  FockOperator out{Eigen::MatrixXcd::Zero(dim, dim), false};
  for (const auto& [mono, c] : op.terms()) {
    for (int l = mono.n; l < dim; ++l) {
      const int mid = l - mono.n;
      const int k = mid + mono.m;
      if (k >= dim) break;
      double w = 1.0;
      for (int i = mid + 1; i <= l; ++i) w *= std::sqrt(static_cast<double>(i));
      for (int i = mid + 1; i <= k; ++i) w *= std::sqrt(static_cast<double>(i));
      out.matrix(k, l) += c * w;
    }
  }
  const double scale = out.matrix.cwiseAbs().maxCoeff();
  const double asym = (out.matrix - out.matrix.adjoint()).cwiseAbs().maxCoeff();
  out.hermitian = asym <= 1e-12 * std::max(scale, 1e-300);
  return out;
}

}  // namespace cohprop
