#include <catch_amalgamated.hpp>

#include "qhopf/presets.hpp"

using namespace qhopf;

namespace {

// rflux generator ids for n = 3: t1..t3, m12 m13 m23, tt1..tt3
enum { t1, t2, t3, m12, m13, m23, tt1, tt2, tt3 };

TensorElement e1(const Monomial& m, const Gauss& c, int order = 3, int hp = 0) {
  return TensorElement::term({m}, c, order, hp);
}

}  // namespace

TEST_CASE("rflux brackets and PBW rewriting", "[tensor]") {
  auto lie = detail::rflux_lie(3);
  CHECK(lie->satisfies_jacobi());
  CHECK(lie->is_admissible());
  // [tt^i, m_jk] = d^i_j t_k - d^i_k t_j
  using V = std::vector<std::pair<int, Gauss>>;
  CHECK(lie->bracket(tt1, m12) == V{{t2, Gauss(1)}});
  CHECK(lie->bracket(tt2, m12) == V{{t1, Gauss(-1)}});
  CHECK(lie->bracket(m23, tt3) == V{{t2, Gauss(1)}});
  CHECK(lie->bracket(tt1, m23).empty());
  // tt1 m12 = m12 tt1 + t2
  Combination c = lie->normal_order(mono({tt1, m12}));
  std::map<Monomial, Gauss> got(c.begin(), c.end());
  CHECK(got == std::map<Monomial, Gauss>{{mono({m12, tt1}), Gauss(1)}, {mono({t2}), Gauss(1)}});
  // tt1 tt2 m12 = m12 tt1 tt2 - t1 tt1 + t2 tt2
  TensorElement w = nc_mul(nc_mul(e1(mono({tt1}), 1), e1(mono({tt2}), 1), *lie), e1(mono({m12}), 1), *lie);
  TensorElement want = e1(mono({m12, tt1, tt2}), 1) - e1(mono({t1, tt1}), 1) + e1(mono({t2, tt2}), 1);
  CHECK(w == want);
}

TEST_CASE("leg-wise products and embeddings", "[tensor]") {
  auto lie = detail::abelian_lie(2);
  TensorElement a = TensorElement::term({mono({0}), {}}, Gauss(1), 2);
  TensorElement b = TensorElement::term({{}, mono({1})}, Gauss(1), 2);
  CHECK(nc_mul(a, b, *lie) == TensorElement::term({mono({0}), mono({1})}, Gauss(1), 2));
  TensorElement x = TensorElement::term({mono({0}), mono({1})}, Gauss(3), 2, 1);
  CHECK(leg_embed(x, {2, 1}, 2) == TensorElement::term({mono({1}), mono({0})}, Gauss(3), 2, 1));
  CHECK(leg_embed(x, {1, 3}, 3) == TensorElement::term({mono({0}), {}, mono({1})}, Gauss(3), 2, 1));
  CHECK(outer(x, TensorElement::unit(1, 2)) == TensorElement::term({mono({0}), mono({1}), {}}, Gauss(3), 2, 1));
  CHECK_THROWS_AS(x + TensorElement::unit(1, 2), std::invalid_argument);
}

TEST_CASE("exp, log and inverse of unipotent elements", "[tensor]") {
  auto lie = detail::abelian_lie(2);
  // exp(h t1 (x) t2) = sum_k h^k/k! t1^k (x) t2^k
  TensorElement x = TensorElement::term({mono({0}), mono({1})}, Gauss(1), 3, 1);
  TensorElement want(2, 3);
  long fact = 1;
  for (int k = 0; k <= 3; ++k) {
    if (k) fact *= k;
    want.add({Monomial(k, 0), Monomial(k, 1)}, Series(3, Gauss::ratio(1, fact), k));
  }
  CHECK(exp_truncated(x, *lie) == want);
  CHECK(log_element(want, *lie) == x);

  auto rl = detail::rflux_lie(3);
  TensorElement f = rflux_twist(*rl, 3, default_r(3), 3);
  TensorElement fi = invert_element(f, *rl);
  CHECK(nc_mul(f, fi, *rl) == TensorElement::unit(2, 3));
  CHECK(nc_mul(fi, f, *rl) == TensorElement::unit(2, 3));
  CHECK(exp_truncated(log_element(f, *rl), *rl) == f);
  CHECK_THROWS_AS(invert_element(x, *lie), std::domain_error);
}

TEST_CASE("structure maps extend generator images", "[tensor]") {
  auto lie = detail::rflux_lie(3);
  QuasiHopfData h = classical_hopf(lie, 3);
  // primitive coproduct of a product: Delta(tt1 m12) = Delta(tt1) Delta(m12)
  TensorElement lhs = h.delta()(mono({m12, tt1}));
  TensorElement rhs = nc_mul(h.delta_gen[m12], h.delta_gen[tt1], *lie);
  CHECK(lhs == rhs);
  // S(m12 tt1) = S(tt1) S(m12) = tt1 m12 = m12 tt1 + t2
  CHECK(h.antipode()(mono({m12, tt1})) == e1(mono({m12, tt1}), 1) + e1(mono({t2}), 1));
  CHECK(h.epsilon()(mono({t1})).is_zero());
}
