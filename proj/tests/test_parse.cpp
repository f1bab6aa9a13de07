#include <catch_amalgamated.hpp>

#include "qhopf/parse.hpp"
#include "qhopf/random.hpp"

using namespace qhopf;

namespace {

const std::vector<std::string> xy{"x1", "x2"};

PolyFunction poly(std::initializer_list<std::pair<Exps, Gauss>> terms, int order = 3) {
  PolyFunction p(2, order);
  for (const auto& [e, c] : terms) p.add(e, Series(order, c));
  return p;
}

}  // namespace

TEST_CASE("expressions parse to exact polynomials", "[parse]") {
  CHECK(parse_poly_expr("x1*x2 + 3", xy, 3) == poly({{{1, 1}, 1}, {{0, 0}, 3}}));
  CHECK(parse_poly_expr("(x1+x2)^2", xy, 3) == poly({{{2, 0}, 1}, {{1, 1}, 2}, {{0, 2}, 1}}));
  CHECK(parse_poly_expr("-x1^2", xy, 3) == poly({{{2, 0}, -1}}));
  CHECK(parse_poly_expr("(-x1)^2", xy, 3) == poly({{{2, 0}, 1}}));
  CHECK(parse_poly_expr("2 - 3 - 4", xy, 3) == poly({{{0, 0}, -5}}));
  CHECK(parse_poly_expr("3/6*x2", xy, 3) == poly({{{0, 1}, Gauss::ratio(1, 2)}}));
  CHECK(parse_poly_expr("i*i", xy, 3) == poly({{{0, 0}, -1}}));
  CHECK(parse_poly_expr("x1 - x1", xy, 3).is_zero());
  CHECK(parse_poly_expr("x1^0", xy, 3) == poly({{{0, 0}, 1}}));
  // h is hbar; powers past the order vanish
  PolyFunction h = parse_poly_expr("h^2*x1 + h^4", xy, 3);
  CHECK(h == PolyFunction::monomial({1, 0}, Series::hbar(3, 1, 2)));
}

TEST_CASE("syntax errors carry a position", "[parse]") {
  auto pos = [](const std::string& s) -> long {
    try {
      parse_poly_expr(s, xy, 3);
    } catch (const ParseError& e) {
      return static_cast<long>(e.position());
    }
    return -1;
  };
  CHECK(pos("x1*z") == 3);
  CHECK(pos("x1 +") == 4);
  CHECK(pos("(x1") == 3);
  CHECK(pos("x1 x2") == 3);
  CHECK(pos("x1^") == 3);
  CHECK(pos("1/0") == 2);
  CHECK(pos("x1^999") == 3);
  CHECK(pos("x1 $ 2") == 3);
  try {
    parse_poly_expr("x1*z", xy, 3);
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("unknown coordinate z") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_poly_expr("x1", {"h"}, 3), std::invalid_argument);
}

TEST_CASE("printing then parsing is the identity", "[parse]") {
  CHECK(print_poly(PolyFunction(2, 3), xy) == "0");
  CHECK(print_poly(parse_poly_expr("x1*x2 + 3", xy, 3), xy) == "3 + x1*x2");
  CHECK(print_poly(parse_poly_expr("-i*h*x1 + (1+2*i)*x2^2", xy, 3), xy) == "(1 + 2*i)*x2^2 - i*h*x1");
  Sampler S(41);
  const std::vector<std::string> six{"x1", "x2", "x3", "p1", "p2", "p3"};
  for (int k = 0; k < 100; ++k) {
    PolyFunction p = S.poly(6, 3, 4, 5);
    std::string text = print_poly(p, six);
    CAPTURE(text);
    CHECK(parse_poly_expr(text, six, 3) == p);
  }
}
