#pragma once

// Polynomial operators in creation/annihilation operators and their
// phase-space symbols.
//
// OperatorPoly holds sum c_{mn} ad^m a^n in normal order; the key (m, n) is
// (power of ad, power of a). SymbolPoly holds sum c_{mn} v^m u^n with
// (u, v) the independent complexifications of (z, z*); the key (m, n) is
// (power of v, power of u). The Q symbol is therefore a relabelling of the
// normal-ordered coefficients.

#include <complex>
#include <compare>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "cohprop/scales.hpp"

namespace cohprop {

using cplx = std::complex<double>;

inline constexpr int kDefaultMaxDegree = 16;
inline constexpr double kCoefficientCleanup = 1e-14;

struct Monomial {
  int m = 0;
  int n = 0;
  int degree() const { return m + n; }
  auto operator<=>(const Monomial&) const = default;
};

template <class Tag>
class BasicPoly {
 public:
  using Terms = std::map<Monomial, cplx>;

  BasicPoly() = default;
  explicit BasicPoly(const ScaleParams& scales) : scales_(scales) {}
  BasicPoly(const ScaleParams& scales, Terms terms) : scales_(scales), terms_(std::move(terms)) {
    prune();
  }

  static BasicPoly constant(const ScaleParams& scales, cplx value) {
    return BasicPoly(scales, Terms{{Monomial{0, 0}, value}});
  }
  static BasicPoly monomial(const ScaleParams& scales, int m, int n, cplx value = 1.0) {
    return BasicPoly(scales, Terms{{Monomial{m, n}, value}});
  }

  const ScaleParams& scales() const { return scales_; }
  const Terms& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  cplx coefficient(int m, int n) const {
    auto it = terms_.find(Monomial{m, n});
    return it == terms_.end() ? cplx{} : it->second;
  }

  int degree() const {
    int d = 0;
    for (const auto& [mono, c] : terms_) d = std::max(d, mono.degree());
    return d;
  }

  double max_abs_coefficient() const {
    double mx = 0.0;
    for (const auto& [mono, c] : terms_) mx = std::max(mx, std::abs(c));
    return mx;
  }

  // Adds without pruning; call prune() once a batch of updates is complete.
  void accumulate(Monomial mono, cplx value) { terms_[mono] += value; }

  // Drops exact zeros and entries below rel * (largest magnitude).
  BasicPoly& prune(double rel = kCoefficientCleanup) {
    const double cutoff = rel * max_abs_coefficient();
    std::erase_if(terms_, [cutoff](const auto& kv) {
      return kv.second == cplx{} || std::abs(kv.second) <= cutoff;
    });
    return *this;
  }

  // c_{mn} == conj(c_{nm}) for every pair, within tol relative to the
  // largest coefficient.
  bool is_hermitian(double tol = 1e-12) const {
    const double scale = std::max(1.0, max_abs_coefficient());
    for (const auto& [mono, c] : terms_) {
      const cplx mirror = coefficient(mono.n, mono.m);
      if (std::abs(c - std::conj(mirror)) > tol * scale) return false;
    }
    return true;
  }

  BasicPoly& operator+=(const BasicPoly& rhs) {
    check_scales(rhs);
    for (const auto& [mono, c] : rhs.terms_) terms_[mono] += c;
    return prune();
  }
  BasicPoly& operator-=(const BasicPoly& rhs) {
    check_scales(rhs);
    for (const auto& [mono, c] : rhs.terms_) terms_[mono] -= c;
    return prune();
  }
  BasicPoly& operator*=(cplx s) {
    for (auto& [mono, c] : terms_) c *= s;
    return prune();
  }

  friend BasicPoly operator+(BasicPoly lhs, const BasicPoly& rhs) { return lhs += rhs; }
  friend BasicPoly operator-(BasicPoly lhs, const BasicPoly& rhs) { return lhs -= rhs; }
  friend BasicPoly operator*(BasicPoly lhs, cplx s) { return lhs *= s; }
  friend BasicPoly operator*(cplx s, BasicPoly rhs) { return rhs *= s; }

 private:
  void check_scales(const BasicPoly& rhs) const {
    if (!(scales_ == rhs.scales_)) throw ScaleMismatchError("polynomials carry different scale parameters");
  }

  ScaleParams scales_;
  Terms terms_;
};

struct OperatorTag {};
struct SymbolTag {};
struct PhaseSpaceTag {};

using OperatorPoly = BasicPoly<OperatorTag>;
using SymbolPoly = BasicPoly<SymbolTag>;
// Polynomial in real (q, p); key (m, n) = (power of q, power of p).
using PhaseSpacePoly = BasicPoly<PhaseSpaceTag>;

// Largest absolute coefficient difference, over the union of monomials.
template <class Tag>
double max_coefficient_difference(const BasicPoly<Tag>& x, const BasicPoly<Tag>& y) {
  double d = 0.0;
  for (const auto& [mono, c] : x.terms()) d = std::max(d, std::abs(c - y.coefficient(mono.m, mono.n)));
  for (const auto& [mono, c] : y.terms())
    if (!x.terms().contains(mono)) d = std::max(d, std::abs(c));
  return d;
}

// --- operator algebra -------------------------------------------------------

OperatorPoly annihilation(const ScaleParams& scales);
OperatorPoly creation(const ScaleParams& scales);
OperatorPoly position_operator(const ScaleParams& scales);  // q = b (a + ad) / sqrt 2
OperatorPoly momentum_operator(const ScaleParams& scales);  // p = -i c (a - ad) / sqrt 2

// Normal-ordered product. Throws ScaleMismatchError on different scales and
// DegreeError if the product exceeds max_degree.
OperatorPoly op_multiply(const OperatorPoly& lhs, const OperatorPoly& rhs,
                         int max_degree = kDefaultMaxDegree);
OperatorPoly op_power(const OperatorPoly& base, int exponent, int max_degree = kDefaultMaxDegree);

struct ParseOptions {
  int max_degree = kDefaultMaxDegree;
};

// Grammar:
//   expr   := term (('+'|'-') term)*
//   term   := factor ('*' factor)*
//   factor := number | token ('^' uint)?
//   token  := 'q' | 'p' | 'a' | 'ad'
//   number := decimal, optional exponent, optional 'i' suffix
// A leading sign on the first term is accepted. Throws ParseError.
OperatorPoly parse_hamiltonian(std::string_view text, const ScaleParams& scales,
                               const ParseOptions& options = {});

// --- symbol transforms ------------------------------------------------------

SymbolPoly q_symbol(const OperatorPoly& op);
SymbolPoly p_symbol(const OperatorPoly& op);
SymbolPoly weyl_symbol(const OperatorPoly& op);
SymbolPoly effective_symbol(const OperatorPoly& op);

// delta = d^2 / du dv.
SymbolPoly apply_delta(const SymbolPoly& sym);
// sum_k lambda^k / k! delta^k sym (finite for polynomials).
SymbolPoly apply_delta_exp(const SymbolPoly& sym, cplx lambda);
// cosh(lambda delta) sym.
SymbolPoly apply_delta_cosh(const SymbolPoly& sym, cplx lambda);

enum class Variable { U, V };

cplx symbol_eval(const SymbolPoly& sym, cplx u, cplx v);
SymbolPoly symbol_derivative(const SymbolPoly& sym, Variable wrt, int order = 1);

// Substitutes u = (q/b + i p/c)/sqrt2, v = (q/b - i p/c)/sqrt2.
PhaseSpacePoly to_phase_space(const SymbolPoly& sym);

// Value and first/second partial derivatives of a symbol at one point.
struct SymbolJet {
  cplx h, hu, hv, huu, huv, hvv;
};

// Flattened symbol for repeated evaluation inside integrators.
class CompiledSymbol {
 public:
  CompiledSymbol() = default;
  explicit CompiledSymbol(const SymbolPoly& sym);

  cplx value(cplx u, cplx v) const;
  SymbolJet jet(cplx u, cplx v) const;
  int degree() const { return degree_; }

 private:
  struct Term {
    int m;
    int n;
    cplx c;
  };
  std::vector<Term> terms_;
  int degree_ = 0;
};

// --- formatting -------------------------------------------------------------

std::string format_coefficient(cplx c);
std::string to_string(const SymbolPoly& sym);      // in (u, v)
std::string to_string(const PhaseSpacePoly& poly); // in (q, p)
std::string to_string(const OperatorPoly& op);     // in (ad, a)

}  // namespace cohprop
