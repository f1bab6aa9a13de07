#pragma once

// Seeded property suite for internal homs over the free bimodules A^1 and A^2.
// Every identity is checked as an exact equality of normal-ordered operators
// or of evaluated vectors; the first nonzero difference becomes the residual.

#include "bimod.hpp"
#include "random.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace qhopf {

struct HomSuiteOptions {
  int samples = 20;
  std::uint64_t seed = 1;
  std::vector<int> ranks{1, 2};
};

namespace detail {

inline void axpy(FreeVec& acc, const FreeVec& w, const Series& s) {
  for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += w[i].scaled(s);
}

// sum over x of (x1 |> a) (x) (x2 |> b) fed to f, grouped by x1
template <class F>
void for_grouped(const TensorElement& x, F&& f) {
  std::map<Monomial, TensorElement> groups;
  for (const auto& [k, s] : x.terms()) {
    TensorKey rest(k.begin() + 1, k.end());
    auto [it, fresh] = groups.try_emplace(k[0], x.legs() - 1, x.order());
    it->second.add(rest, s);
  }
  for (const auto& [m, rest] : groups) f(m, rest);
}

}  // namespace detail

class HomSuite {
 public:
  HomSuite(const Preset& p, HomSuiteOptions opt)
      : U_(HomCalculus::untwisted(p)), T_(HomCalculus::twisted(p)), opt_(std::move(opt)) {}

  const HomCalculus& untwisted() const { return U_; }
  const HomCalculus& twisted() const { return T_; }

  using Check = Report (HomSuite::*)(int);
  struct Entry {
    const char* name;
    const char* anchor;
    Check run;
  };
  static const std::vector<Entry>& entries() {
    static const std::vector<Entry> e{
        {"ev_comp", "prop 2.x (ii) evaluation of composites", &HomSuite::ev_comp},
        {"comp_weak_assoc", "prop 2.x (iii) weak associativity of composition", &HomSuite::comp_weak_assoc},
        {"theta_invariant", "prop 2.x (i) invariant homs", &HomSuite::theta_invariant},
        {"theta_ev_comp", "prop 2.x (ii) theta preserves ev and composition", &HomSuite::theta_ev_comp},
        {"theta_mixed", "prop 2.x (iii) theta(g) . L = g o L", &HomSuite::theta_mixed},
        {"hat_l", "lem 4.x left action via end(V)", &HomSuite::hat_l},
        {"hom_bimodule", "sec 4.x hom bimodule axioms", &HomSuite::hom_bimodule},
        {"tensor_unit_law", "eq 5.x 1 (x). 1 = 1", &HomSuite::tensor_unit_law},
        {"tensor_unit_evaluation", "eq 5.x evaluations of L (x). 1 and 1 (x). L'", &HomSuite::tensor_unit_evaluation},
        {"tensor_contract", "prop 5.x composite defining (x).", &HomSuite::tensor_contract},
        {"decomposition", "lem 5.x L (x). L' = (L (x). 1) . (1 (x). L')", &HomSuite::decomposition},
        {"comp_tensor_left", "lem 5.x (K . L) (x). 1", &HomSuite::comp_tensor_left},
        {"comp_tensor_right", "lem 5.x 1 (x). (K' . L')", &HomSuite::comp_tensor_right},
        {"comp_tensor_braided", "lem 5.x (R2 L) (x). (R1 L')", &HomSuite::comp_tensor_braided},
        {"braided_composition", "prop 5.x braided composition", &HomSuite::braided_composition},
        {"tensor_weak_assoc", "prop 5.x weak associativity of (x).", &HomSuite::tensor_weak_assoc},
        {"theta_tensor", "prop 5.x theta preserves (x).", &HomSuite::theta_tensor},
        {"symmetric_bimodule", "eq 5.7 symmetric bimodules", &HomSuite::symmetric_bimodule},
        {"gamma_inverse", "eq 2.30 gamma invertible", &HomSuite::gamma_invertible},
        {"gamma_ev", "prop 2.x gamma and ev", &HomSuite::gamma_ev},
        {"gamma_comp", "prop 2.x gamma and composition", &HomSuite::gamma_comp},
        {"gamma_bimodule", "prop 4.x gamma is a bimodule map", &HomSuite::gamma_bimodule},
        {"gamma_hat_l", "lem 4.x gamma o hat_l_F = hat_l", &HomSuite::gamma_hat_l},
        {"gamma_tensor", "eq 5.x gamma and (x).", &HomSuite::gamma_tensor},
    };
    return e;
  }

  // every identity on every rank, in a fixed order
  std::vector<Report> run() {
    std::vector<Report> out;
    for (const auto& e : entries())
      for (int m : opt_.ranks) out.push_back((this->*e.run)(m));
    return out;
  }
  Report run_one(const std::string& name, int m) {
    for (const auto& e : entries())
      if (name == e.name) return (this->*e.run)(m);
    throw std::invalid_argument("unknown hom identity '" + name + "'");
  }

 private:
  const HomCalculus& C() const { return T_; }

  ReportBuilder builder(const char* name, int m) const {
    for (const auto& e : entries())
      if (std::string(name) == e.name) {
        ReportBuilder rb(std::string(name) + "/A" + std::to_string(m), e.anchor);
        rb.info("samples", std::to_string(opt_.samples));
        return rb;
      }
    throw std::logic_error("unregistered identity");
  }
  Sampler sampler(const char* name, int m) const {
    std::uint64_t h = opt_.seed * 0x9e3779b97f4a7c15ULL + static_cast<std::uint64_t>(m);
    for (const char* p = name; *p; ++p) h = h * 131 + static_cast<unsigned char>(*p);
    return Sampler(h);
  }
  // samples until the first failure
  template <class Body>
  Report loop(const char* name, int m, Body&& body) const {
    ReportBuilder rb = builder(name, m);
    Sampler S = sampler(name, m);
    for (int s = 0; s < opt_.samples && !rb.failed(); ++s) {
      if (auto r = body(S)) {
        r->identity += " (sample " + std::to_string(s) + ")";
        rb.fail(std::move(*r));
      }
    }
    return rb.done();
  }

  HomOperator general(Sampler& S, int m) const { return S.op(C(), m, m); }
  // hom_A(A^m, A^m) is gamma^-1 of the matrices of multiplication operators
  HomOperator in_hom_A(Sampler& S, int m) const { return gamma_inverse(T_, S.mult_matrix(U_, m, m)); }
  HomOperator equivariant(Sampler& S, int m) const { return S.equivariant(C(), m, m); }
  PolyFunction function(Sampler& S) const { return S.poly(C().dim(), C().order()); }

  std::optional<Residual> diff(const std::string& id, const HomOperator& a, const HomOperator& b) const {
    return difference(id, a, b, C().coordinates());
  }
  std::optional<Residual> diff(const std::string& id, const FreeVec& a, const FreeVec& b) const {
    return difference(id, a, b, C().coordinates());
  }

  Report ev_comp(int m) {
    return loop("ev_comp", m, [&](Sampler& S) {
      const auto& c = C();
      HomOperator L = general(S, m), Lp = general(S, m);
      FreeVec v = S.vec(c, m);
      FreeVec rhs = c.zero_vec(m);
      auto oL = c.orbit(L), oLp = c.orbit(Lp);
      for (const auto& [k, s] : c.hopf().phi.terms()) detail::axpy(rhs, c.ev(oL(k[0]), c.ev(oLp(k[1]), c.act(k[2], v))), s);
      return diff("ev((L.L') v) = ev(phi1 L, ev(phi2 L', phi3 v))", c.ev(c.comp(L, Lp), v), rhs);
    });
  }

  Report comp_weak_assoc(int m) {
    return loop("comp_weak_assoc", m, [&](Sampler& S) {
      const auto& c = C();
      HomOperator L = general(S, m), Lp = general(S, m), Lpp = general(S, m);
      auto o1 = c.orbit(L), o2 = c.orbit(Lp), o3 = c.orbit(Lpp);
      HomOperator rhs = c.zero(m, m);
      for (const auto& [k, s] : c.hopf().phi.terms()) rhs += c.comp(o1(k[0]), c.comp(o2(k[1]), o3(k[2]))).scaled(s);
      return diff("(L.L').L'' = (phi1 L).((phi2 L').(phi3 L''))", c.comp(c.comp(L, Lp), Lpp), rhs);
    });
  }

  Report theta_invariant(int m) {
    return loop("theta_invariant", m, [&](Sampler& S) -> std::optional<Residual> {
      const auto& c = C();
      HomOperator f = equivariant(S, m);
      HomOperator t = c.theta(f);
      for (int g = 0; g < c.lie().size(); ++g)
        if (auto d = diff("h |> theta(f) = eps(h) theta(f), h = " + c.lie().name(g), c.adjoint(mono({g}), t), c.zero(m, m)))
          return d;
      return diff("theta^-1(theta(f)) = f", c.theta_inv(t), f);
    });
  }

  Report theta_ev_comp(int m) {
    return loop("theta_ev_comp", m, [&](Sampler& S) -> std::optional<Residual> {
      const auto& c = C();
      HomOperator f = equivariant(S, m), g = equivariant(S, m);
      FreeVec v = S.vec(c, m);
      if (auto d = diff("ev(theta(f) v) = f(v)", c.ev(c.theta(f), v), f(v))) return d;
      return diff("theta(g).theta(f) = theta(g o f)", c.comp(c.theta(g), c.theta(f)), c.theta(compose(g, f)));
    });
  }

  Report theta_mixed(int m) {
    return loop("theta_mixed", m, [&](Sampler& S) -> std::optional<Residual> {
      const auto& c = C();
      HomOperator f = equivariant(S, m), L = general(S, m);
      if (auto d = diff("theta(g).L = g o L", c.comp(c.theta(f), L), compose(f, L))) return d;
      return diff("L.theta(f) = L o f", c.comp(L, c.theta(f)), compose(L, f));
    });
  }

  Report hat_l(int m) {
    return loop("hat_l", m, [&](Sampler& S) -> std::optional<Residual> {
      const auto& c = C();
      const auto& A = c.algebra();
      PolyFunction a = function(S), b = function(S);
      FreeVec v = S.vec(c, m);
      if (auto d = diff("l(a).l(b) = l(a*b)", c.comp(c.hat_l(a, m), c.hat_l(b, m)), c.hat_l(A.star(a, b), m))) return d;
      if (auto d = diff("l(1) = 1_end", c.hat_l(A.one(), m), c.unit_end(m))) return d;
      return diff("ev(l(a) v) = a v", c.ev(c.hat_l(a, m), v), c.left_action(a, v));
    });
  }

  Report hom_bimodule(int m) {
    return loop("hom_bimodule", m, [&](Sampler& S) -> std::optional<Residual> {
      const auto& c = C();
      const auto& A = c.algebra();
      const auto& h = c.hopf();
      HomOperator L = general(S, m);
      PolyFunction a = function(S), b = function(S);
      auto oL = c.orbit(L);
      HomOperator r1 = c.zero(m, m), r2 = c.zero(m, m), r3 = c.zero(m, m);
      for (const auto& [k, s] : h.phi_inv().terms()) {
        r1 += c.act_left(A.star(A.act(k[0], a), A.act(k[1], b)), oL(k[2])).scaled(s);
        r3 += c.act_right(c.act_left(A.act(k[0], a), oL(k[1])), A.act(k[2], b)).scaled(s);
      }
      for (const auto& [k, s] : h.phi.terms()) r2 += c.act_right(oL(k[0]), A.star(A.act(k[1], a), A.act(k[2], b))).scaled(s);
      if (auto d = diff("a(bL) = ((psi1 a)(psi2 b))(psi3 L)", c.act_left(a, c.act_left(b, L)), r1)) return d;
      if (auto d = diff("(La)b = (phi1 L)((phi2 a)(phi3 b))", c.act_right(c.act_right(L, a), b), r2)) return d;
      return diff("a(Lb) = ((psi1 a)(psi2 L))(psi3 b)", c.act_left(a, c.act_right(L, b)), r3);
    });
  }

  Report tensor_unit_law(int m) {
    return loop("tensor_unit_law", m, [&](Sampler&) {
      const auto& c = C();
      return diff("1 (x). 1 = 1", c.tensor_hom(c.unit_end(m), c.unit_end(m)), c.unit_end(m * m));
    });
  }

  Report tensor_unit_evaluation(int m) {
    return loop("tensor_unit_evaluation", m, [&](Sampler& S) -> std::optional<Residual> {
      const auto& c = C();
      const auto& h = c.hopf();
      HomOperator L = in_hom_A(S, m), Lp = in_hom_A(S, m);
      FreeVec v = S.vec(c, m), x = S.vec(c, m);
      FreeVec vx = c.tensor_over_A(v, x);
      HomOperator one = c.unit_end(m);
      FreeVec r1 = c.zero_vec(m * m), r2 = c.zero_vec(m * m);
      auto oL = c.orbit(L), oLp = c.orbit(Lp);
      for (const auto& [k, s] : h.phi_inv().terms())
        detail::axpy(r1, c.tensor_over_A(c.ev(oL(k[0]), c.act(k[1], v)), c.act(k[2], x)), s);
      // phi~1 R2 phi^-2 (x) phi~2 R1 phi^-1 (x) phi~3 phi^-3 on [v, L', x]
      const TensorElement y = h.mul(h.phi, leg_embed(c.r_matrix(), {2, 1}, 3), leg_embed(h.phi_inv(), {2, 1, 3}, 3));
      for (const auto& [k, s] : y.terms())
        detail::axpy(r2, c.tensor_over_A(c.act(k[0], v), c.ev(oLp(k[1]), c.act(k[2], x))), s);
      if (auto d = diff("ev((L (x). 1)(v x)) = ev(psi1 L, psi2 v)(psi3 x)", c.ev(c.tensor_hom(L, one), vx), r1)) return d;
      return diff("ev((1 (x). L')(v x))", c.ev(c.tensor_hom(one, Lp), vx), r2);
    });
  }

  // the six-step composite, carried out one morphism at a time on legs that
  // follow the current order of the factors
  Report tensor_contract(int m) {
    return loop("tensor_contract", m, [&](Sampler& S) {
      const auto& c = C();
      const auto& h = c.hopf();
      HomOperator L = in_hom_A(S, m), Lp = in_hom_A(S, m);
      FreeVec v = S.vec(c, m), x = S.vec(c, m);
      // [L, L', v, x]
      TensorElement st = h.delta_on(h.phi, 2);
      st = h.mul(leg_embed(h.phi_inv(), {2, 3, 4}, 4), st);
      st = h.mul(leg_embed(c.r_matrix(), {2, 3}, 4), st);
      st = leg_embed(st, {1, 3, 2, 4}, 4);
      // [L, v, L', x]
      st = h.mul(leg_embed(h.phi, {2, 3, 4}, 4), st);
      st = h.mul(h.delta_on(h.phi_inv(), 2), st);
      FreeVec rhs = c.zero_vec(m * m);
      auto oL = c.orbit(L), oLp = c.orbit(Lp);
      std::map<Monomial, HomOperator> evL, evLp;
      auto ev_of = [&](std::map<Monomial, HomOperator>& memo, HomCalculus::Orbit& o, const Monomial& w) -> const HomOperator& {
        auto it = memo.find(w);
        if (it == memo.end()) it = memo.emplace(w, c.ev_operator(o(w))).first;
        return it->second;
      };
      for (const auto& [k, s] : st.terms())
        detail::axpy(rhs, c.tensor_over_A(ev_of(evL, oL, k[0])(c.act(k[1], v)), ev_of(evLp, oLp, k[2])(c.act(k[3], x))), s);
      return diff("ev((L (x). L')(v x)) = (ev (x) ev) Phi^-1 (id Phi)(id tau id)(id Phi^-1) Phi", c.ev(c.tensor_hom(L, Lp), c.tensor_over_A(v, x)), rhs);
    });
  }

  Report decomposition(int m) {
    return loop("decomposition", m, [&](Sampler& S) {
      const auto& c = C();
      HomOperator L = in_hom_A(S, m), Lp = in_hom_A(S, m), one = c.unit_end(m);
      return diff("L (x). L' = (L (x). 1).(1 (x). L')", c.tensor_hom(L, Lp),
                  c.comp(c.tensor_hom(L, one), c.tensor_hom(one, Lp)));
    });
  }

  Report comp_tensor_left(int m) {
    return loop("comp_tensor_left", m, [&](Sampler& S) {
      const auto& c = C();
      HomOperator K = in_hom_A(S, m), L = in_hom_A(S, m), one = c.unit_end(m);
      return diff("(K.L) (x). 1 = (K (x). 1).(L (x). 1)", c.tensor_hom(c.comp(K, L), one),
                  c.comp(c.tensor_hom(K, one), c.tensor_hom(L, one)));
    });
  }

  Report comp_tensor_right(int m) {
    return loop("comp_tensor_right", m, [&](Sampler& S) {
      const auto& c = C();
      HomOperator K = in_hom_A(S, m), L = in_hom_A(S, m), one = c.unit_end(m);
      return diff("1 (x). (K'.L') = (1 (x). K').(1 (x). L')", c.tensor_hom(one, c.comp(K, L)),
                  c.comp(c.tensor_hom(one, K), c.tensor_hom(one, L)));
    });
  }

  Report comp_tensor_braided(int m) {
    return loop("comp_tensor_braided", m, [&](Sampler& S) {
      const auto& c = C();
      HomOperator L = in_hom_A(S, m), Lp = in_hom_A(S, m), one = c.unit_end(m);
      auto oL = c.orbit(L), oLp = c.orbit(Lp);
      HomOperator lhs = c.zero(m * m, m * m);
      // grouped by R2, the leg acting on L
      detail::for_grouped(leg_embed(c.r_matrix(), {2, 1}, 2),
                          [&](const Monomial& r2, const TensorElement& r1) { lhs += c.tensor_hom(oL(r2), oLp(r1)); });
      return diff("(R2 L) (x). (R1 L') = (1 (x). L').(L (x). 1)", lhs,
                  c.comp(c.tensor_hom(one, Lp), c.tensor_hom(L, one)));
    });
  }

  Report braided_composition(int m) {
    return loop("braided_composition", m, [&](Sampler& S) {
      const auto& c = C();
      HomOperator K = in_hom_A(S, m), Kp = in_hom_A(S, m), L = in_hom_A(S, m), Lp = in_hom_A(S, m);
      HomOperator upper = c.comp(c.tensor_hom(K, Kp), c.tensor_hom(L, Lp));
      auto oK = c.orbit(K), oKp = c.orbit(Kp), oL = c.orbit(L), oLp = c.orbit(Lp);
      // legs [K, K', L, L'] reordered to [K, L, K', L'] and grouped by the first two
      // then by the K' leg, leaving an element on the L' leg
      std::map<std::pair<Monomial, Monomial>, std::map<Monomial, TensorElement>> grouped;
      for (const auto& [k, s] : c.braided_element().terms())
        grouped[{k[0], k[2]}].try_emplace(k[1], 1, c.order()).first->second.add({k[3]}, s);
      HomOperator lower = c.zero(m * m, m * m);
      for (const auto& [key, inner] : grouped) {
        HomOperator r = c.zero(m, m);
        for (const auto& [kp, lp] : inner) r += c.comp(oKp(kp), oLp(lp));
        lower += c.tensor_hom(c.comp(oK(key.first), oL(key.second)), r);
      }
      return diff("(K (x). K').(L (x). L') = sum (w1 K . w3 L) (x). (w2 K' . w4 L')", upper, lower);
    });
  }

  Report tensor_weak_assoc(int m) {
    return loop("tensor_weak_assoc", m, [&](Sampler& S) {
      const auto& c = C();
      HomOperator L = in_hom_A(S, m), Lp = in_hom_A(S, m), Lpp = in_hom_A(S, m);
      auto o1 = c.orbit(L), o2 = c.orbit(Lp), o3 = c.orbit(Lpp);
      HomOperator rhs = c.zero(m * m * m, m * m * m);
      detail::for_grouped(c.hopf().phi, [&](const Monomial& p1, const TensorElement& rest) {
        HomOperator inner = c.zero(m * m, m * m);
        for (const auto& [k, s] : rest.terms()) inner += c.tensor_hom(o2(k[0]), o3(k[1])).scaled(s);
        rhs += c.tensor_hom(o1(p1), inner);
      });
      // Phi^A is the identity on components of A^m (x)_A A^m (x)_A A^m
      return diff("Phi o ((L (x). L') (x). L'') o Phi^-1 = (phi1 L) (x). ((phi2 L') (x). (phi3 L''))",
                  c.tensor_hom(c.tensor_hom(L, Lp), Lpp), rhs);
    });
  }

  Report theta_tensor(int m) {
    return loop("theta_tensor", m, [&](Sampler& S) {
      const auto& c = C();
      HomOperator f = equivariant(S, m), g = equivariant(S, m);
      // f (x)_A g on components: Kronecker product of constant matrices
      HomOperator fg = c.zero(m * m, m * m);
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
          for (int k = 0; k < m; ++k)
            for (int l = 0; l < m; ++l) fg.at(i * m + k, j * m + l) = compose(f.at(i, j), g.at(k, l));
      return diff("theta(f) (x). theta(g) = theta(f (x) g)", c.tensor_hom(c.theta(f), c.theta(g)), c.theta(fg));
    });
  }

  Report symmetric_bimodule(int m) {
    return loop("symmetric_bimodule", m, [&](Sampler& S) -> std::optional<Residual> {
      const auto& c = C();
      const auto& A = c.algebra();
      PolyFunction a = function(S);
      FreeVec v = S.vec(c, m);
      HomOperator L = in_hom_A(S, m);
      FreeVec rv = c.zero_vec(m);
      HomOperator rL = c.zero(m, m);
      auto oL = c.orbit(L);
      for (const auto& [k, s] : c.r_matrix().terms()) {
        detail::axpy(rv, c.right_action(c.act(k[1], v), A.act(k[0], a)), s);
        rL += c.act_right(oL(k[1]), A.act(k[0], a)).scaled(s);
      }
      if (auto d = diff("a v = (R2 v)(R1 a)", c.left_action(a, v), rv)) return d;
      return diff("a L = (R2 L)(R1 a) on hom_A", c.act_left(a, L), rL);
    });
  }

  // sum over F^-1 of f(F^-1 word, F^-2 part)
  template <class F>
  void over_twist_inverse(F&& f) const {
    detail::for_grouped(twist_inverse(), std::forward<F>(f));
  }
  const TensorElement& twist_inverse() const {
    if (!f_inv_) f_inv_ = invert_element(*T_.algebra().twist(), T_.lie());
    return *f_inv_;
  }

  Report gamma_invertible(int m) {
    return loop("gamma_inverse", m, [&](Sampler& S) -> std::optional<Residual> {
      HomOperator L = general(S, m);
      if (auto d = diff("gamma^-1(gamma(L)) = L", gamma_inverse(T_, gamma_map(T_, L)), L)) return d;
      return diff("gamma(gamma^-1(L)) = L", gamma_map(T_, gamma_inverse(T_, L)), L);
    });
  }

  Report gamma_ev(int m) {
    return loop("gamma_ev", m, [&](Sampler& S) {
      HomOperator L = general(S, m);
      FreeVec v = S.vec(T_, m);
      auto o = U_.orbit(gamma_map(T_, L));
      FreeVec rhs = U_.zero_vec(m);
      for (const auto& [k, s] : twist_inverse().terms()) detail::axpy(rhs, U_.ev(o(k[0]), U_.act(k[1], v)), s);
      return diff("ev_F(L v) = ev(F^-1 gamma(L), F^-2 v)", T_.ev(L, v), rhs);
    });
  }

  Report gamma_comp(int m) {
    return loop("gamma_comp", m, [&](Sampler& S) {
      HomOperator L = general(S, m), Lp = general(S, m);
      auto o1 = U_.orbit(gamma_map(T_, L)), o2 = U_.orbit(gamma_map(T_, Lp));
      HomOperator rhs = U_.zero(m, m);
      over_twist_inverse([&](const Monomial& f1, const TensorElement& f2) { rhs += U_.comp(o1(f1), o2(f2)); });
      return diff("gamma(L ._F L') = (F^-1 gamma(L)).(F^-2 gamma(L'))", gamma_map(T_, T_.comp(L, Lp)), rhs);
    });
  }

  Report gamma_bimodule(int m) {
    return loop("gamma_bimodule", m, [&](Sampler& S) -> std::optional<Residual> {
      const auto& A = U_.algebra();
      HomOperator L = general(S, m);
      PolyFunction a = function(S);
      auto o = U_.orbit(gamma_map(T_, L));
      HomOperator left = U_.zero(m, m), right = U_.zero(m, m);
      for (const auto& [k, s] : twist_inverse().terms()) {
        left += U_.act_left(A.act(k[0], a), o(k[1])).scaled(s);
        right += U_.act_right(o(k[0]), A.act(k[1], a)).scaled(s);
      }
      if (auto d = diff("gamma(a L) = (F^-1 a)(F^-2 gamma(L))", gamma_map(T_, T_.act_left(a, L)), left)) return d;
      return diff("gamma(L a) = (F^-1 gamma(L))(F^-2 a)", gamma_map(T_, T_.act_right(L, a)), right);
    });
  }

  Report gamma_hat_l(int m) {
    return loop("gamma_hat_l", m, [&](Sampler& S) {
      PolyFunction a = function(S);
      return diff("gamma(l_F(a)) = l(a)", gamma_map(T_, T_.hat_l(a, m)), U_.hat_l(a, m));
    });
  }

  Report gamma_tensor(int m) {
    return loop("gamma_tensor", m, [&](Sampler& S) {
      HomOperator K = in_hom_A(S, m), Kp = in_hom_A(S, m);
      auto o1 = U_.orbit(gamma_map(T_, K)), o2 = U_.orbit(gamma_map(T_, Kp));
      HomOperator rhs = U_.zero(m * m, m * m);
      over_twist_inverse([&](const Monomial& f1, const TensorElement& f2) { rhs += U_.tensor_hom(o1(f1), o2(f2)); });
      return diff("gamma(K (x)._F K') = (F^-1 gamma(K)) (x). (F^-2 gamma(K'))", gamma_map(T_, T_.tensor_hom(K, Kp)), rhs);
    });
  }

  HomCalculus U_, T_;
  HomSuiteOptions opt_;
  mutable std::optional<TensorElement> f_inv_;
};

}  // namespace qhopf
