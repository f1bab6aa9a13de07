#include <catch_amalgamated.hpp>

#include "qhopf/scalar.hpp"

#include <random>

using namespace qhopf;

namespace {
Gauss gq(long a, long b, long c, long d) { return Gauss(mpq_class(a, b), mpq_class(c, d)); }
}  // namespace

TEST_CASE("Gaussian rational arithmetic", "[scalar]") {
  Gauss a(1, 2), b(3, -1);  // (1 + 2i)(3 - i) = 5 + 5i
  CHECK(a * b == Gauss(5, 5));
  CHECK(a / b == gq(1, 10, 7, 10));  // (1+2i)/(3-i) = (1+7i)/10
  CHECK((a / b) * b == a);
  CHECK(Gauss::I() * Gauss::I() == Gauss(-1));
  CHECK(a.conj() == Gauss(1, -2));
  CHECK_THROWS_AS(a / Gauss(), std::domain_error);
}

TEST_CASE("multiplication fast paths agree with the general formula", "[scalar]") {
  std::mt19937_64 rng(7);
  auto pick = [&]() {
    long p = static_cast<long>(rng() % 7) - 3, q = static_cast<long>(rng() % 3) + 1;
    return mpq_class(p, q);
  };
  for (int k = 0; k < 200; ++k) {
    mpq_class ar = pick(), ai = pick(), br = pick(), bi = pick();
    if (k % 3 == 0) bi = 0;
    if (k % 3 == 1) br = 0;
    ar.canonicalize(), ai.canonicalize(), br.canonicalize(), bi.canonicalize();
    mpq_class re = ar * br - ai * bi, im = ar * bi + ai * br;
    Gauss x(ar, ai);
    x *= Gauss(br, bi);
    CHECK(x == Gauss(re, im));
    Gauss acc(1, 1);
    acc.add_mul(Gauss(ar, ai), Gauss(br, bi));
    CHECK(acc == Gauss(re + 1, im + 1));
  }
}

TEST_CASE("series truncate products at the order", "[scalar]") {
  Series one = Series::one(3), h = Series::hbar(3);
  Series x = one + h;
  // (1 + h)^-1 = 1 - h + h^2 - h^3
  Series inv = x.inverse();
  CHECK(inv[0] == Gauss(1));
  CHECK(inv[1] == Gauss(-1));
  CHECK(inv[2] == Gauss(1));
  CHECK(inv[3] == Gauss(-1));
  CHECK(x * inv == one);
  Series h2 = h * h;
  CHECK((h2 * h2).is_zero());
  CHECK(h2.valuation() == 2);
  CHECK_THROWS_AS(h.inverse(), std::domain_error);
  CHECK_THROWS_AS(Series(2) + Series(3), std::invalid_argument);
}

TEST_CASE("rational literals", "[scalar]") {
  CHECK(parse_rational("6/4") == mpq_class(3, 2));
  CHECK(parse_rational("-7") == mpq_class(-7));
  CHECK(rational_string(mpq_class(-3, 2)) == "-3/2");
  CHECK_THROWS_AS(parse_rational("1/0"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational("x"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational(""), std::invalid_argument);
}
