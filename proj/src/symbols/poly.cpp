#include <cmath>
#include <numbers>

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

std::vector<cplx> powers(cplx x, int up_to) {
  std::vector<cplx> p(static_cast<std::size_t>(up_to) + 1, cplx{1.0, 0.0});
  for (int k = 1; k <= up_to; ++k) p[k] = p[k - 1] * x;
  return p;
}

}  // namespace

OperatorPoly annihilation(const ScaleParams& scales) { return OperatorPoly::monomial(scales, 0, 1); }

OperatorPoly creation(const ScaleParams& scales) { return OperatorPoly::monomial(scales, 1, 0); }

OperatorPoly position_operator(const ScaleParams& scales) {
  const double k = scales.b() / std::numbers::sqrt2;
  return OperatorPoly(scales, {{Monomial{0, 1}, k}, {Monomial{1, 0}, k}});
}

OperatorPoly momentum_operator(const ScaleParams& scales) {
  const cplx k = cplx{0.0, -1.0} * scales.c() / std::numbers::sqrt2;
  return OperatorPoly(scales, {{Monomial{0, 1}, k}, {Monomial{1, 0}, -k}});
}

// (ad^m1 a^n1)(ad^m2 a^n2) = sum_k k! C(n1,k) C(m2,k) ad^(m1+m2-k) a^(n1+n2-k),
// the closed form of repeatedly commuting a past ad^m with a ad^m = ad^m a + m ad^(m-1).
OperatorPoly op_multiply(const OperatorPoly& lhs, const OperatorPoly& rhs, int max_degree) {
  if (!(lhs.scales() == rhs.scales())) {
    throw ScaleMismatchError("op_multiply: operands carry different scale parameters");
  }
  if (lhs.degree() + rhs.degree() > max_degree && !lhs.empty() && !rhs.empty()) {
    throw DegreeError("op_multiply: product degree " + std::to_string(lhs.degree() + rhs.degree()) +
                      " exceeds the supported maximum " + std::to_string(max_degree));
  }
  OperatorPoly out(lhs.scales());
  for (const auto& [x, cx] : lhs.terms()) {
    for (const auto& [y, cy] : rhs.terms()) {
      const int kmax = std::min(x.n, y.m);
      for (int k = 0; k <= kmax; ++k) {
        const double w = factorial(k) * binomial(x.n, k) * binomial(y.m, k);
        out.accumulate(Monomial{x.m + y.m - k, x.n + y.n - k}, w * cx * cy);
      }
    }
  }
  out.prune();
  return out;
}

OperatorPoly op_power(const OperatorPoly& base, int exponent, int max_degree) {
  if (exponent < 0) throw Error("op_power: negative exponent");
  OperatorPoly result = OperatorPoly::constant(base.scales(), 1.0);
  for (int k = 0; k < exponent; ++k) result = op_multiply(result, base, max_degree);
  return result;
}

cplx symbol_eval(const SymbolPoly& sym, cplx u, cplx v) {
  const int d = sym.degree();
  const auto up = powers(u, d);
  const auto vp = powers(v, d);
  cplx acc{};
  for (const auto& [mono, c] : sym.terms()) acc += c * vp[mono.m] * up[mono.n];
  return acc;
}

SymbolPoly symbol_derivative(const SymbolPoly& sym, Variable wrt, int order) {
  if (order < 1) throw Error("symbol_derivative: order must be positive");
  SymbolPoly out(sym.scales());
  for (const auto& [mono, c] : sym.terms()) {
    const int p = wrt == Variable::U ? mono.n : mono.m;
    if (p < order) continue;
    const double w = factorial(p) / factorial(p - order);
    const Monomial reduced = wrt == Variable::U ? Monomial{mono.m, mono.n - order}
                                                : Monomial{mono.m - order, mono.n};
    out.accumulate(reduced, w * c);
  }
  out.prune();
  return out;
}

PhaseSpacePoly to_phase_space(const SymbolPoly& sym) {
  const ScaleParams& s = sym.scales();
  // u = alpha q + beta p, v = alpha q - beta p
  const double alpha = 1.0 / (s.b() * std::numbers::sqrt2);
  const cplx beta{0.0, 1.0 / (s.c() * std::numbers::sqrt2)};
  PhaseSpacePoly out(s);
  for (const auto& [mono, c] : sym.terms()) {
    for (int l = 0; l <= mono.m; ++l) {      // p-power drawn from v^m
      for (int k = 0; k <= mono.n; ++k) {    // p-power drawn from u^n
        const cplx w = binomial(mono.m, l) * binomial(mono.n, k) *
                       std::pow(alpha, mono.m - l + mono.n - k) * std::pow(-beta, l) *
                       std::pow(beta, k);
        out.accumulate(Monomial{mono.m - l + mono.n - k, l + k}, c * w);
      }
    }
  }
  out.prune();
  return out;
}

CompiledSymbol::CompiledSymbol(const SymbolPoly& sym) {
  terms_.reserve(sym.size());
  for (const auto& [mono, c] : sym.terms()) {
    terms_.push_back(Term{mono.m, mono.n, c});
    degree_ = std::max(degree_, mono.degree());
  }
  if (degree_ > kDefaultMaxDegree * 4) throw DegreeError("CompiledSymbol: degree too large for evaluation");
}

cplx CompiledSymbol::value(cplx u, cplx v) const {
  cplx up[kDefaultMaxDegree * 4 + 1];
  cplx vp[kDefaultMaxDegree * 4 + 1];
  up[0] = vp[0] = 1.0;
  for (int k = 1; k <= degree_; ++k) {
    up[k] = up[k - 1] * u;
    vp[k] = vp[k - 1] * v;
  }
  cplx acc{};
  for (const Term& t : terms_) acc += t.c * vp[t.m] * up[t.n];
  return acc;
}

SymbolJet CompiledSymbol::jet(cplx u, cplx v) const {
  cplx up[kDefaultMaxDegree * 4 + 1];
  cplx vp[kDefaultMaxDegree * 4 + 1];
  up[0] = vp[0] = 1.0;
  for (int k = 1; k <= degree_; ++k) {
    up[k] = up[k - 1] * u;
    vp[k] = vp[k - 1] * v;
  }
  SymbolJet j{};
  for (const Term& t : terms_) {
    const int m = t.m;
    const int n = t.n;
    j.h += t.c * vp[m] * up[n];
    if (n >= 1) j.hu += t.c * static_cast<double>(n) * vp[m] * up[n - 1];
    if (m >= 1) j.hv += t.c * static_cast<double>(m) * vp[m - 1] * up[n];
    if (n >= 2) j.huu += t.c * static_cast<double>(n * (n - 1)) * vp[m] * up[n - 2];
    if (m >= 1 && n >= 1) j.huv += t.c * static_cast<double>(m * n) * vp[m - 1] * up[n - 1];
    if (m >= 2) j.hvv += t.c * static_cast<double>(m * (m - 1)) * vp[m - 2] * up[n];
  }
  return j;
}

}  // namespace cohprop
