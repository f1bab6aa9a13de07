#include <catch_amalgamated.hpp>

#include "qhopf/presets.hpp"
#include "qhopf/random.hpp"

using namespace qhopf;

namespace {

enum { t1, t2, t3, m12, m13, m23, tt1, tt2, tt3 };

Preset preset(const std::string& name, int order = 3) {
  PresetParams p;
  p.name = name;
  p.order = order;
  return make_preset(p);
}

TensorElement two(int a, int b, const Gauss& c, int order, int hp) {
  return TensorElement::term({mono({a}), mono({b})}, c, order, hp);
}

// g (x) 1 + 1 (x) g, built by hand
TensorElement delta0(int g, int order) {
  return TensorElement::term({mono({g}), {}}, Gauss(1), order) + TensorElement::term({{}, mono({g})}, Gauss(1), order);
}

mpq_class binom(int n, int k) {
  mpz_class r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return mpq_class(r);
}

}  // namespace

TEST_CASE("axiom suites pass on every preset", "[quasihopf]") {
  for (std::string name : {"classical", "moyal", "rflux"}) {
    CAPTURE(name);
    Preset p = preset(name);
    for (const Report& r : {check_quasibialgebra(p.twisted), check_quasiantipode(p.twisted), check_quasitriangular(p.twisted)}) {
      CAPTURE(r.name, r.residual ? r.residual->identity : "");
      CHECK(r.passed());
    }
  }
}

TEST_CASE("corrupted structure data is detected", "[quasihopf]") {
  Preset p = preset("rflux");
  auto nonzero = [](const Report& r) {
    if (r.passed()) return false;
    for (const auto& g : r.residual->series)
      if (!g.is_zero()) return true;
    return false;
  };
  SECTION("associator with one term deleted") {
    QuasiHopfData h = p.twisted;
    TensorElement phi(3, 3);
    bool dropped = false;
    for (const auto& [k, s] : h.phi.terms()) {
      if (!dropped && !(k == TensorKey(3))) {
        dropped = true;
        continue;
      }
      phi.add(k, s);
    }
    h.phi = phi;
    h.invalidate();
    // phi_F - 1 is cubic in the central primitives t_i, a cocycle whatever its coefficients;
    // only the hexagons see that R^{ijk} lost its antisymmetry
    CHECK(check_quasibialgebra(h).passed());
    CHECK(nonzero(check_quasitriangular(h)));
  }
  SECTION("coproduct with one term deleted") {
    QuasiHopfData h = p.twisted;
    TensorElement d(2, 3);
    auto it = h.delta_gen[m12].terms().begin();
    for (auto j = std::next(it); j != h.delta_gen[m12].terms().end(); ++j) d.add(j->first, j->second);
    h.delta_gen[m12] = d;
    h.invalidate();
    CHECK(nonzero(check_quasibialgebra(h)));
  }
  SECTION("R-matrix with one term deleted") {
    QuasiHopfData h = p.twisted;
    TensorElement r(2, 3);
    bool dropped = false;
    for (const auto& [k, s] : h.r_matrix->terms()) {
      if (!dropped && !(k == TensorKey(2))) {
        dropped = true;
        continue;
      }
      r.add(k, s);
    }
    h.r_matrix = r;
    h.invalidate();
    CHECK(nonzero(check_quasitriangular(h)));
  }
  SECTION("alpha shifted") {
    QuasiHopfData h = p.twisted;
    h.alpha += TensorElement::term({mono({t1})}, Gauss(1), 3, 2);
    h.invalidate();
    CHECK(nonzero(check_quasiantipode(h)));
  }
}

TEST_CASE("rflux twisted structure in closed form", "[quasihopf][regression]") {
  const int N = 3;
  Preset p = preset("rflux", N);
  const auto& h = p.twisted;
  auto R = default_r(3);
  auto tt = [](int i) { return tt1 + i; };
  const int mi[3][3] = {{-1, m12, m13}, {m12, -1, m23}, {m13, m23, -1}};
  for (int i = 0; i < 3; ++i) {
    // Delta_F(t_i) = Delta(t_i)
    CHECK(h.delta_gen[i] == delta0(i, N));
    // Delta_F(tt^i) = Delta(tt^i) + (i hbar/2) R^{ijk} t_j (x) t_k
    TensorElement want = delta0(tt(i), N);
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        if (sgn(r_entry(R, i, j, k)) != 0) want += two(j, k, Gauss(0, r_entry(R, i, j, k) / 2), N, 1);
    CHECK(h.delta_gen[tt(i)] == want);
    // Delta_F(m_ij) = Delta(m_ij) - i hbar (t_i (x) t_j - t_j (x) t_i)
    for (int j = i + 1; j < 3; ++j) {
      TensorElement wm = delta0(mi[i][j], N) + two(i, j, Gauss(0, -1), N, 1) + two(j, i, Gauss(0, 1), N, 1);
      CHECK(h.delta_gen[mi[i][j]] == wm);
    }
  }
  // phi_F = exp((hbar^2/2) R^{ijk} t_i (x) t_j (x) t_k); the square starts at hbar^4
  TensorElement phi = TensorElement::unit(3, N);
  for (const auto& [ijk, v] : R)
    phi.add({mono({ijk[0]}), mono({ijk[1]}), mono({ijk[2]})}, Series(N, Gauss(v / 2), 2));
  CHECK(h.phi == phi);
  CHECK(h.alpha == TensorElement::unit(1, N));
  CHECK(h.beta == TensorElement::unit(1, N));
}

TEST_CASE("Moyal twisted structure in closed form", "[quasihopf][regression]") {
  const int N = 3;
  Preset p = preset("moyal", N);
  const auto& h = p.twisted;
  for (int g = 0; g < 2; ++g) CHECK(h.delta_gen[g] == delta0(g, N));
  CHECK(h.phi == TensorElement::unit(3, N));
  // R_F = F^-2 = exp(i hbar (t1 (x) t2 - t2 (x) t1)), expanded with the binomial theorem
  TensorElement want(2, N);
  mpq_class fact = 1;
  for (int k = 0; k <= N; ++k) {
    if (k) fact *= k;
    Gauss ik = 1;
    for (int s = 0; s < k; ++s) ik *= Gauss::I();
    for (int j = 0; j <= k; ++j) {
      // (t1 (x) t2)^j (-t2 (x) t1)^(k-j)
      Monomial left = Monomial(j, char(0)) + Monomial(k - j, char(1));
      Monomial right = Monomial(k - j, char(0)) + Monomial(j, char(1));
      mpq_class c = binom(k, j) / fact;
      if ((k - j) % 2) c = -c;
      want.add({left, right}, Series(N, ik * Gauss(c), k));
    }
  }
  CHECK(*h.r_matrix == want);
  CHECK(is_triangular(h));
}

TEST_CASE("twisting back by the inverse restores the original", "[quasihopf]") {
  for (std::string name : {"moyal", "rflux"}) {
    CAPTURE(name);
    Preset p = preset(name);
    CHECK(check_twist_inverse(p.base, p.twist).passed());
  }
}

TEST_CASE("composite twists compose", "[quasihopf]") {
  Preset p = preset("rflux");
  const auto& lie = *p.lie;
  Sampler S(11);
  // G = exp(hbar c a (x) b) for sampled generators a, b
  int a = S.below(lie.size()), b = S.below(lie.size());
  TensorElement g = exp_truncated(two(a, b, S.coefficient(), 3, 1), lie);
  CHECK(check_composite_twist(p.base, p.twist, g).passed());
  CHECK(check_composite_twist(p.base, g, p.twist).passed());
}

TEST_CASE("apply_twist rejects non-counital elements", "[quasihopf]") {
  Preset p = preset("moyal");
  TensorElement bad = TensorElement::unit(2, 3) + TensorElement::term({mono({0}), {}}, Gauss(1), 3);
  CHECK_THROWS_AS(apply_twist(p.base, bad), std::invalid_argument);
}
