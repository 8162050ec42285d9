#pragma once

// Small random generators shared by the unit tests. Seeds are fixed so a
// failing case can be replayed.

#include <cmath>
#include <random>

#include "cohprop/symbols.hpp"

namespace testing_support {

using cohprop::cplx;

inline cplx random_complex(std::mt19937_64& rng, double scale = 1.0) {
  std::uniform_real_distribution<double> d(-scale, scale);
  return {d(rng), d(rng)};
}

// Random normal-ordered operator of total degree <= max_degree. When
// hermitian, c_{nm} = conj(c_{mn}).
inline cohprop::OperatorPoly random_operator(std::mt19937_64& rng, const cohprop::ScaleParams& scales,
                                             int max_degree, bool hermitian = true) {
  cohprop::OperatorPoly::Terms terms;
  for (int m = 0; m <= max_degree; ++m) {
    for (int n = 0; n + m <= max_degree; ++n) {
      if (hermitian && n < m) continue;
      cplx c = random_complex(rng);
      if (hermitian && m == n) c = c.real();
      terms[{m, n}] = c;
      if (hermitian && m != n) terms[{n, m}] = std::conj(c);
    }
  }
  return cohprop::OperatorPoly(scales, std::move(terms));
}

inline cohprop::SymbolPoly random_symbol(std::mt19937_64& rng, const cohprop::ScaleParams& scales, int max_degree) {
  cohprop::SymbolPoly::Terms terms;
  for (int m = 0; m <= max_degree; ++m)
    for (int n = 0; n + m <= max_degree; ++n) terms[{m, n}] = random_complex(rng);
  return cohprop::SymbolPoly(scales, std::move(terms));
}

}  // namespace testing_support
