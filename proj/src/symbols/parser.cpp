#include <cctype>
#include <charconv>
#include <optional>

#include "cohprop/symbols.hpp"

namespace cohprop {

namespace {

enum class Kind { Number, Q, P, A, AD, Plus, Minus, Star, Caret, End };

struct Token {
  Kind kind;
  std::size_t pos;
  cplx value{};        // Number
  std::string_view text{};
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  Token next() {
    skip_space();
    const std::size_t start = i_;
    if (i_ >= src_.size()) return {Kind::End, start};
    const char ch = src_[i_];
    switch (ch) {
      case '+': ++i_; return {Kind::Plus, start};
      case '-': ++i_; return {Kind::Minus, start};
      case '*': ++i_; return {Kind::Star, start};
      case '^': ++i_; return {Kind::Caret, start};
      case 'q': ++i_; return {Kind::Q, start};
      case 'p': ++i_; return {Kind::P, start};
      case 'a':
        ++i_;
        if (i_ < src_.size() && src_[i_] == 'd') {
          ++i_;
          return {Kind::AD, start};
        }
        return {Kind::A, start};
      default: break;
    }
    if (std::isdigit(static_cast<unsigned char>(ch)) || ch == '.') return number(start);
    throw ParseError(std::string("unexpected character '") + ch + "'", start);
  }

 private:
  void skip_space() {
    while (i_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[i_]))) ++i_;
  }

  Token number(std::size_t start) {
    std::size_t j = i_;
    auto digits = [&] {
      const std::size_t k = j;
      while (j < src_.size() && std::isdigit(static_cast<unsigned char>(src_[j]))) ++j;
      return j - k;
    };
    std::size_t mantissa = digits();
    if (j < src_.size() && src_[j] == '.') {
      ++j;
      mantissa += digits();
    }
    if (mantissa == 0) throw ParseError("malformed number", start);
    if (j < src_.size() && (src_[j] == 'e' || src_[j] == 'E')) {
      std::size_t k = j + 1;
      if (k < src_.size() && (src_[k] == '+' || src_[k] == '-')) ++k;
      const std::size_t exp_start = k;
      while (k < src_.size() && std::isdigit(static_cast<unsigned char>(src_[k]))) ++k;
      if (k == exp_start) throw ParseError("malformed exponent", j);
      j = k;
    }
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(src_.data() + i_, src_.data() + j, value);
    if (ec != std::errc{} || ptr != src_.data() + j) throw ParseError("malformed number", start);
    Token tok{Kind::Number, start, cplx{value, 0.0}, src_.substr(i_, j - i_)};
    if (j < src_.size() && src_[j] == 'i') {
      ++j;
      tok.value = cplx{0.0, value};
    }
    i_ = j;
    return tok;
  }

  std::string_view src_;
  std::size_t i_ = 0;
};

class Parser {
 public:
  Parser(std::string_view src, const ScaleParams& scales, const ParseOptions& options)
      : lex_(src), scales_(scales), options_(options) {
    advance();
  }

  OperatorPoly parse() {
    if (tok_.kind == Kind::End) throw ParseError("empty expression", tok_.pos);
    double sign = 1.0;
    if (tok_.kind == Kind::Plus || tok_.kind == Kind::Minus) {
      sign = tok_.kind == Kind::Minus ? -1.0 : 1.0;
      advance();
    }
    OperatorPoly result = term() * cplx{sign, 0.0};
    while (tok_.kind == Kind::Plus || tok_.kind == Kind::Minus) {
      const bool minus = tok_.kind == Kind::Minus;
      advance();
      OperatorPoly t = term();
      if (minus) result -= t;
      else result += t;
    }
    if (tok_.kind != Kind::End) throw ParseError("expected '+', '-' or end of input", tok_.pos);
    return result;
  }

 private:
  void advance() { tok_ = lex_.next(); }

  OperatorPoly term() {
    OperatorPoly acc = factor();
    while (tok_.kind == Kind::Star) {
      advance();
      acc = op_multiply(acc, factor(), options_.max_degree);
    }
    return acc;
  }

  OperatorPoly factor() {
    const Token t = tok_;
    switch (t.kind) {
      case Kind::Number:
        advance();
        return OperatorPoly::constant(scales_, t.value);
      case Kind::Q:
      case Kind::P:
      case Kind::A:
      case Kind::AD: {
        advance();
        OperatorPoly base = atom(t.kind);
        if (tok_.kind != Kind::Caret) return base;
        advance();
        if (tok_.kind != Kind::Number || tok_.value.imag() != 0.0 ||
            tok_.text.find_first_not_of("0123456789") != std::string_view::npos) {
          throw ParseError("exponent must be a non-negative integer", tok_.pos);
        }
        const int exponent = static_cast<int>(tok_.value.real());
        if (exponent > options_.max_degree) {
          throw ParseError("exponent exceeds maximum supported degree", tok_.pos);
        }
        advance();
        return op_power(base, exponent, options_.max_degree);
      }
      case Kind::End:
        throw ParseError("unexpected end of input", t.pos);
      default:
        throw ParseError("expected a number or one of q, p, a, ad", t.pos);
    }
  }

  OperatorPoly atom(Kind k) const {
    switch (k) {
      case Kind::Q: return position_operator(scales_);
      case Kind::P: return momentum_operator(scales_);
      case Kind::A: return annihilation(scales_);
      default: return creation(scales_);
    }
  }

  Lexer lex_;
  ScaleParams scales_;
  ParseOptions options_;
  Token tok_{Kind::End, 0};
};

}  // namespace

OperatorPoly parse_hamiltonian(std::string_view text, const ScaleParams& scales, const ParseOptions& options) {
  return Parser(text, scales, options).parse();
}

}  // namespace cohprop
