#include "cohprop/symbols.hpp"

namespace cohprop {

namespace {

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

double factorial(int n) {
  double r = 1.0;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

}  // namespace

SymbolPoly q_symbol(const OperatorPoly& op) {
  SymbolPoly out(op.scales());
  for (const auto& [mono, c] : op.terms()) out.accumulate(mono, c);
  out.prune();
  return out;
}

// Anti-normal rewrite of each normal-ordered monomial:
//   ad^m a^n = sum_k (-1)^k k! C(m,k) C(n,k) a^(n-k) ad^(m-k)
// then a -> u, ad -> v.
SymbolPoly p_symbol(const OperatorPoly& op) {
  SymbolPoly out(op.scales());
  for (const auto& [mono, c] : op.terms()) {
    const int kmax = std::min(mono.m, mono.n);
    for (int k = 0; k <= kmax; ++k) {
      const double w = (k % 2 == 0 ? 1.0 : -1.0) * factorial(k) * binomial(mono.m, k) * binomial(mono.n, k);
      out.accumulate(Monomial{mono.m - k, mono.n - k}, w * c);
    }
  }
  out.prune();
  return out;
}

SymbolPoly weyl_symbol(const OperatorPoly& op) { return apply_delta_exp(q_symbol(op), -0.5); }

// cosh(delta/2) H_W rather than (H_Q + H_P)/2: the two agree to rounding,
// but this form leaves H_W untouched bit for bit when delta^2 H_W = 0.
SymbolPoly effective_symbol(const OperatorPoly& op) { return apply_delta_cosh(weyl_symbol(op), 0.5); }

SymbolPoly apply_delta(const SymbolPoly& sym) {
  SymbolPoly out(sym.scales());
  for (const auto& [mono, c] : sym.terms()) {
    if (mono.m == 0 || mono.n == 0) continue;
    out.accumulate(Monomial{mono.m - 1, mono.n - 1}, static_cast<double>(mono.m * mono.n) * c);
  }
  out.prune();
  return out;
}

SymbolPoly apply_delta_exp(const SymbolPoly& sym, cplx lambda) {
  SymbolPoly result = sym;
  SymbolPoly term = sym;
  cplx weight = 1.0;
  for (int k = 1; !term.empty(); ++k) {
    term = apply_delta(term);
    weight *= lambda / static_cast<double>(k);
    for (const auto& [mono, c] : term.terms()) result.accumulate(mono, weight * c);
  }
  result.prune();
  return result;
}

SymbolPoly apply_delta_cosh(const SymbolPoly& sym, cplx lambda) {
  SymbolPoly result = sym;
  SymbolPoly term = sym;
  cplx weight = 1.0;
  for (int k = 2; !term.empty(); k += 2) {
    term = apply_delta(apply_delta(term));
    weight *= lambda * lambda / static_cast<double>(k * (k - 1));
    for (const auto& [mono, c] : term.terms()) result.accumulate(mono, weight * c);
  }
  result.prune();
  return result;
}

}  // namespace cohprop
