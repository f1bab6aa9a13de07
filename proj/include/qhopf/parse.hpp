#pragma once

// Polynomial expressions over Q(i)[hbar]:
//   expr  := term (('+' | '-') term)*
//   term  := unary ('*' unary)*
//   unary := ('+' | '-') unary | power
//   power := atom ('^' int)?
//   atom  := int ('/' int)? | 'i' | 'h' | coordinate | '(' expr ')'
// 'h' is hbar. Unary minus binds looser than '^', so -x1^2 = -(x1^2).

#include "poly.hpp"

#include <cctype>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace qhopf {

class ParseError : public std::invalid_argument {
 public:
  ParseError(const std::string& what, std::size_t pos)
      : std::invalid_argument(what + " at position " + std::to_string(pos)), pos_(pos) {}
  std::size_t position() const { return pos_; }

 private:
  std::size_t pos_;
};

namespace detail {

class ExprParser {
 public:
  ExprParser(std::string_view text, const std::vector<std::string>& coords, int order)
      : s_(text), coords_(coords), order_(order) {}

  PolyFunction parse() {
    PolyFunction p = expr();
    skip();
    if (at_ < s_.size()) throw ParseError(std::string("unexpected '") + s_[at_] + "'", at_);
    return p;
  }

 private:
  static constexpr long max_exponent = 64;

  int dim() const { return static_cast<int>(coords_.size()); }
  void skip() {
    while (at_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[at_]))) ++at_;
  }
  bool eat(char c) {
    skip();
    if (at_ < s_.size() && s_[at_] == c) {
      ++at_;
      return true;
    }
    return false;
  }
  std::string digits() {
    std::size_t b = at_;
    while (at_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[at_]))) ++at_;
    return std::string(s_.substr(b, at_ - b));
  }

  PolyFunction expr() {
    PolyFunction p = term();
    for (;;) {
      if (eat('+'))
        p += term();
      else if (eat('-'))
        p -= term();
      else
        return p;
    }
  }
  PolyFunction term() {
    PolyFunction p = unary();
    while (eat('*')) p = p * unary();
    return p;
  }
  PolyFunction unary() {
    if (eat('-')) return -unary();
    if (eat('+')) return unary();
    return power();
  }
  PolyFunction power() {
    PolyFunction base = atom();
    if (!eat('^')) return base;
    skip();
    std::size_t where = at_;
    std::string d = digits();
    if (d.empty()) throw ParseError("expected exponent", where);
    if (d.size() > 3 || std::stol(d) > max_exponent) throw ParseError("exponent too large", where);
    PolyFunction r = PolyFunction::one(dim(), order_);
    for (long k = std::stol(d); k > 0; --k) r = r * base;
    return r;
  }
  PolyFunction atom() {
    skip();
    if (at_ >= s_.size()) throw ParseError("unexpected end of expression", at_);
    const std::size_t where = at_;
    char c = s_[at_];
    if (c == '(') {
      ++at_;
      PolyFunction p = expr();
      if (!eat(')')) throw ParseError("expected ')'", at_);
      return p;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      mpq_class q{mpz_class(digits())};
      skip();
      // a '/' is only ever part of a rational literal
      if (at_ < s_.size() && s_[at_] == '/') {
        ++at_;
        skip();
        std::size_t dpos = at_;
        std::string den = digits();
        if (den.empty()) throw ParseError("expected denominator", dpos);
        mpz_class dz(den);
        if (dz == 0) throw ParseError("zero denominator", dpos);
        q = mpq_class(q.get_num(), dz);
        q.canonicalize();
      }
      return PolyFunction::constant(dim(), order_, Gauss(q));
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (at_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[at_])) || s_[at_] == '_')) ++at_;
      std::string name(s_.substr(where, at_ - where));
      if (name == "i") return PolyFunction::constant(dim(), order_, Gauss::I());
      if (name == "h") return PolyFunction::constant(dim(), Series::hbar(order_));
      for (int mu = 0; mu < dim(); ++mu)
        if (coords_[mu] == name) return PolyFunction::coordinate(dim(), order_, mu);
      throw ParseError("unknown coordinate " + name, where);
    }
    throw ParseError(std::string("unexpected '") + c + "'", where);
  }

  std::string_view s_;
  const std::vector<std::string>& coords_;
  int order_;
  std::size_t at_ = 0;
};

inline std::string imaginary_part(const mpq_class& q) {
  return q == 1 ? "i" : rational_string(q) + "*i";
}

inline std::string gauss_factor(const Gauss& g) {
  if (sgn(g.im) == 0) return rational_string(g.re);
  if (sgn(g.re) == 0) return imaginary_part(g.im);
  return "(" + rational_string(g.re) + (sgn(g.im) < 0 ? " - " : " + ") + imaginary_part(abs(g.im)) + ")";
}

}  // namespace detail

inline PolyFunction parse_poly_expr(std::string_view text, const std::vector<std::string>& coords, int order) {
  for (const auto& c : coords)
    if (c == "i" || c == "h") throw std::invalid_argument("coordinate name '" + c + "' is reserved");
  return detail::ExprParser(text, coords, order).parse();
}

// One summand per (monomial, hbar power); parses back to the same polynomial.
inline std::string print_poly(const PolyFunction& p, const std::vector<std::string>& coords) {
  std::string out;
  for (const auto& [e, s] : p.terms()) {
    std::string mono = monomial_string(e, coords);
    for (int k = 0; k <= s.order(); ++k) {
      const Gauss& g = s[k];
      if (g.is_zero()) continue;
      std::string tail;
      if (k == 1) tail = "h";
      if (k > 1) tail = "h^" + std::to_string(k);
      if (mono != "1") tail += (tail.empty() ? "" : "*") + mono;
      std::string f;
      bool neg = false;
      if ((sgn(g.im) == 0 && sgn(g.re) < 0) || (sgn(g.re) == 0 && sgn(g.im) < 0)) {
        neg = true;
        f = detail::gauss_factor(-g);
      } else {
        f = detail::gauss_factor(g);
      }
      if (f == "1" && !tail.empty()) f.clear();
      std::string piece = f.empty() ? tail : (tail.empty() ? f : f + "*" + tail);
      if (out.empty())
        out = neg ? "-" + piece : piece;
      else
        out += (neg ? " - " : " + ") + piece;
    }
  }
  return out.empty() ? "0" : out;
}

}  // namespace qhopf
