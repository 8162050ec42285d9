#include <cmath>

#include "cohprop/discrete.hpp"

namespace cohprop {

BandedMatrix::BandedMatrix(int n, int kl, int ku)
    : n_(n), kl_(kl), ku_(ku), width_(2 * kl + ku + 1), data_(static_cast<std::size_t>(n) * (2 * kl + ku + 1)) {
  if (n < 1 || kl < 0 || ku < 0) throw Error("BandedMatrix: invalid dimensions");
}

cplx& BandedMatrix::at(int i, int j) {
  if (i < 0 || i >= n_ || j < 0 || j >= n_ || !in_band(i, j)) throw Error("BandedMatrix: index outside band");
  return data_[static_cast<std::size_t>(i) * width_ + (j - i + kl_)];
}

cplx BandedMatrix::at(int i, int j) const {
  if (i < 0 || i >= n_ || j < 0 || j >= n_) throw Error("BandedMatrix: index out of range");
  if (!in_band(i, j)) return 0.0;
  return data_[static_cast<std::size_t>(i) * width_ + (j - i + kl_)];
}

std::vector<cplx> banded_solve(BandedMatrix A, std::vector<cplx> b) {
  const int n = A.size();
  const int kl = A.lower();
  const int reach = A.lower() + A.upper();
  if (static_cast<int>(b.size()) != n) throw Error("banded_solve: size mismatch");

  for (int k = 0; k < n; ++k) {
    const int last_row = std::min(n - 1, k + kl);
    const int last_col = std::min(n - 1, k + reach);
    int p = k;
    double best = std::abs(A.at(k, k));
    for (int i = k + 1; i <= last_row; ++i) {
      const double m = std::abs(A.at(i, k));
      if (m > best) {
        best = m;
        p = i;
      }
    }
    if (best == 0.0) throw Error("banded_solve: singular matrix");
    if (p != k) {
      for (int j = k; j <= last_col; ++j) std::swap(A.at(k, j), A.at(p, j));
      std::swap(b[k], b[p]);
    }
    const cplx pivot = A.at(k, k);
    for (int i = k + 1; i <= last_row; ++i) {
      const cplx f = A.at(i, k) / pivot;
      if (f == cplx{}) continue;
      A.at(i, k) = 0.0;
      for (int j = k + 1; j <= last_col; ++j) A.at(i, j) -= f * A.at(k, j);
      b[i] -= f * b[k];
    }
  }
  for (int k = n - 1; k >= 0; --k) {
    cplx s = b[k];
    const int last_col = std::min(n - 1, k + reach);
    for (int j = k + 1; j <= last_col; ++j) s -= A.at(k, j) * b[j];
    b[k] = s / A.at(k, k);
  }
  return b;
}

}  // namespace cohprop
