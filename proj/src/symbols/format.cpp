#include <algorithm>
#include <cstdio>

#include "cohprop/symbols.hpp"

namespace cohprop {

namespace {

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

bool effectively_real(cplx c) { return std::abs(c.imag()) <= 1e-13 * std::abs(c); }

std::string power(std::string_view name, int k) {
  if (k == 0) return {};
  std::string s(name);
  if (k > 1) s += "^" + std::to_string(k);
  return s;
}

template <class Tag>
std::string render(const BasicPoly<Tag>& poly, std::string_view first, std::string_view second) {
  if (poly.empty()) return "0";
  std::vector<std::pair<Monomial, cplx>> terms(poly.terms().begin(), poly.terms().end());
  std::stable_sort(terms.begin(), terms.end(), [](const auto& x, const auto& y) {
    if (x.first.degree() != y.first.degree()) return x.first.degree() > y.first.degree();
    return x.first.m > y.first.m;
  });
  std::string out;
  bool leading = true;
  for (const auto& [mono, c] : terms) {
    std::string vars = power(first, mono.m);
    const std::string rhs = power(second, mono.n);
    if (!vars.empty() && !rhs.empty()) vars += "*";
    vars += rhs;

    std::string coef;
    bool negative = false;
    if (effectively_real(c)) {
      negative = c.real() < 0.0;
      coef = fmt(std::abs(c.real()));
      if (coef == "1" && !vars.empty()) coef.clear();
    } else {
      coef = "(" + format_coefficient(c) + ")";
    }
    std::string body = coef;
    if (!coef.empty() && !vars.empty()) body += "*";
    body += vars;

    if (leading) out += negative ? "-" + body : body;
    else out += (negative ? " - " : " + ") + body;
    leading = false;
  }
  return out;
}

}  // namespace

std::string format_coefficient(cplx c) {
  if (effectively_real(c)) return fmt(c.real());
  std::string s = fmt(c.real());
  s += c.imag() < 0.0 ? "-" : "+";
  s += fmt(std::abs(c.imag())) + "i";
  return s;
}

std::string to_string(const SymbolPoly& sym) { return render(sym, "v", "u"); }
std::string to_string(const PhaseSpacePoly& poly) { return render(poly, "q", "p"); }
std::string to_string(const OperatorPoly& op) { return render(op, "ad", "a"); }

}  // namespace cohprop
