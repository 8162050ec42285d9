#pragma once

// Ground-truth coherent-state propagator <z2| exp(-i H T / hbar) |z1> from a
// truncated Fock basis and a full Hermitian eigendecomposition.

#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include <Eigen/Dense>

#include "cohprop/symbols.hpp"

namespace cohprop {

struct FockVector {
  std::vector<cplx> coefficients;  // index = occupation number
  ScaleParams scales;
  bool truncation_risk = false;    // |z|^2 > n_max

  double norm() const;
};

// exp(-|z|^2/2) z^k / sqrt(k!) for k <= n_max, by multiplicative recurrence.
FockVector coherent_vector(cplx z, int n_max, const ScaleParams& scales = {});

// <z2|z1> = exp(-|z2|^2/2 + conj(z2) z1 - |z1|^2/2)
cplx overlap(cplx z2, cplx z1);

struct FockOperator {
  Eigen::MatrixXcd matrix;
  bool hermitian = false;
};

// Matrix of op on |0>..|n_max>. Throws DegreeError when n_max < op.degree().
FockOperator fock_matrix(const OperatorPoly& op, int n_max);

struct Spectrum {
  int n_max = 0;
  Eigen::VectorXd energies;
  Eigen::MatrixXcd vectors;  // column j is the eigenvector of energies[j]
  double asymmetry = 0.0;    // max |M - M^dagger| before symmetrization
};

Spectrum diagonalize(const OperatorPoly& op, int n_max);

struct TruncationOptions {
  double tol = 1e-8;
  int start = 32;
  int cap = 4096;
};

struct ConvergedValue {
  cplx value;      // evaluated at 2 * n_max
  int n_max = 0;   // smallest basis passing the doubling test
};

// Caches one spectrum per basis size; safe to share between threads.
class ExactOracle {
 public:
  // Throws NotHermitianError.
  explicit ExactOracle(OperatorPoly op);

  const OperatorPoly& op() const { return op_; }
  std::shared_ptr<const Spectrum> spectrum(int n_max) const;

  cplx propagator(cplx z1, cplx z2, double T, int n_max) const;
  // Throws TruncationError when the doubling sequence passes opts.cap.
  ConvergedValue converged(cplx z1, cplx z2, double T, const TruncationOptions& opts = {}) const;

 private:
  OperatorPoly op_;
  mutable std::mutex mutex_;
  mutable std::map<int, std::shared_ptr<const Spectrum>> cache_;
};

cplx exact_propagator(const OperatorPoly& op, cplx z1, cplx z2, double T, int n_max);

// Smallest n_max in 32, 64, ... with |K(n) - K(2n)| <= tol * max(|K|, 1e-12).
int auto_truncate(const OperatorPoly& op, cplx z1, cplx z2, double T, double tol, int cap = 4096);

}  // namespace cohprop
