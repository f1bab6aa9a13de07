#pragma once

// Algebra objects: polynomial functions with a derivation representation of H,
// optionally deformed by a twist to the star product a * b = (F^-1 |> a)(F^-2 |> b).

#include "poly.hpp"
#include "presets.hpp"
#include "quasihopf.hpp"
#include "report.hpp"

#include <array>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace qhopf {

inline std::optional<Residual> difference(const std::string& identity, const PolyFunction& lhs,
                                          const PolyFunction& rhs, const std::vector<std::string>& coords) {
  PolyFunction d = lhs - rhs;
  if (d.is_zero()) return std::nullopt;
  const auto& [e, s] = *d.terms().begin();
  return Residual{identity, monomial_string(e, coords), s.coeffs()};
}

class AlgebraObject {
 public:
  AlgebraObject(QuasiHopfData hopf, RepPtr rep, std::optional<TensorElement> twist = std::nullopt)
      : hopf_(std::move(hopf)), rep_(std::move(rep)) {
    if (twist) {
      twist_ = *twist;
      TensorElement inv = invert_element(*twist, *hopf_.lie);
      for (const auto& [k, s] : inv.terms()) {
        auto [it, fresh] = inv_by_left_.try_emplace(k[0], 1, order());
        it->second.add({k[1]}, s);
      }
    }
  }

  // A with the pointwise product, and A_F over H_F
  static AlgebraObject untwisted(const Preset& p) { return AlgebraObject(p.base, p.rep); }
  static AlgebraObject twisted(const Preset& p) { return AlgebraObject(p.twisted, p.rep, p.twist); }

  const QuasiHopfData& hopf() const { return hopf_; }
  const DerivationRep& rep() const { return *rep_; }
  const RepPtr& rep_ptr() const { return rep_; }
  const LiePresentation& lie() const { return *hopf_.lie; }
  const std::optional<TensorElement>& twist() const { return twist_; }
  int dim() const { return rep_->dim(); }
  int order() const { return hopf_.order; }
  const std::vector<std::string>& coordinates() const { return rep_->coordinates(); }

  PolyFunction one() const { return PolyFunction::one(dim(), order()); }
  PolyFunction coordinate(int mu) const { return PolyFunction::coordinate(dim(), order(), mu); }
  PolyFunction act(const TensorElement& h, const PolyFunction& a) const { return qhopf::act(h, a, *rep_); }
  PolyFunction act(const Monomial& m, const PolyFunction& a) const { return qhopf::act(m, a, *rep_); }

  PolyFunction star(const PolyFunction& a, const PolyFunction& b) const {
    if (!twist_) return a * b;
    PolyFunction out(dim(), order());
    for (const auto& [m1, right] : inv_by_left_) {
      PolyFunction la = act(m1, a);
      if (la.is_zero()) continue;
      out += la * act(right, b);
    }
    return out;
  }

  // sum over terms x of (x1 |> a) * ((x2 |> b) * (x3 |> c))
  PolyFunction star_right_nested(const TensorElement& x, const PolyFunction& a, const PolyFunction& b,
                                 const PolyFunction& c) const {
    PolyFunction out(dim(), order());
    for (const auto& [k, s] : x.terms())
      out += star(act(k[0], a), star(act(k[1], b), act(k[2], c))).scaled(s);
    return out;
  }

 private:
  QuasiHopfData hopf_;
  RepPtr rep_;
  std::optional<TensorElement> twist_;
  std::map<Monomial, TensorElement> inv_by_left_;  // F^-1 grouped by first leg
};

struct AssocDefect {
  PolyFunction weak;   // (ab)c - (phi1 a)((phi2 b)(phi3 c))
  PolyFunction plain;  // (ab)c - a(bc)
};

inline AssocDefect weak_assoc_defect(const AlgebraObject& A, const PolyFunction& a, const PolyFunction& b,
                                     const PolyFunction& c) {
  PolyFunction left = A.star(A.star(a, b), c);
  return {left - A.star_right_nested(A.hopf().phi, a, b, c), left - A.star(a, A.star(b, c))};
}

inline Report check_weak_associativity(const AlgebraObject& A,
                                       const std::vector<std::array<PolyFunction, 3>>& triples) {
  ReportBuilder rb("weak_associativity", "sec 3.1 weak associativity of A");
  for (const auto& [a, b, c] : triples) {
    auto d = weak_assoc_defect(A, a, b, c);
    if (!d.weak.is_zero()) {
      rb.fail(*difference("(ab)c = (phi1 a)((phi2 b)(phi3 c))", d.weak, PolyFunction(A.dim(), A.order()),
                          A.coordinates()));
      break;
    }
  }
  return rb.done();
}

// a * b = (R2 |> b) * (R1 |> a)
inline Report check_braided_commutativity(const AlgebraObject& A,
                                          const std::vector<std::pair<PolyFunction, PolyFunction>>& pairs) {
  if (!A.hopf().r_matrix) throw std::invalid_argument("braided commutativity needs an R-matrix");
  ReportBuilder rb("braided_commutativity", "eq 5.6 braided commutative algebra");
  const TensorElement& r = *A.hopf().r_matrix;
  for (const auto& [a, b] : pairs) {
    PolyFunction rhs(A.dim(), A.order());
    for (const auto& [k, s] : r.terms()) rhs += A.star(A.act(k[1], b), A.act(k[0], a)).scaled(s);
    if (auto d = difference("a*b = (R2 b)*(R1 a)", A.star(a, b), rhs, A.coordinates())) {
      rb.fail(std::move(*d));
      break;
    }
  }
  return rb.done();
}

// rho([x, y]) = [rho(x), rho(y)] on all coordinate monomials of degree <= bound
inline Report check_rep_bracket(const DerivationRep& rep, const LiePresentation& lie, int degree_bound) {
  ReportBuilder rb("rep_bracket", "eq 2.5 module axiom for derivations");
  if (rep.generators() != lie.size()) {
    rb.fail("representation covers every generator", "generator count");
    return rb.done();
  }
  std::vector<Exps> monomials{Exps(rep.dim(), 0)};
  for (std::size_t k = 0; k < monomials.size(); ++k) {
    const Exps e = monomials[k];
    int deg = 0, last = 0;
    for (int mu = 0; mu < rep.dim(); ++mu) {
      deg += e[mu];
      if (e[mu]) last = mu;
    }
    if (deg == degree_bound) continue;
    for (int mu = last; mu < rep.dim(); ++mu) {
      Exps f = e;
      ++f[mu];
      monomials.push_back(f);
    }
  }
  for (int i = 0; i < lie.size() && !rb.failed(); ++i)
    for (int j = i + 1; j < lie.size() && !rb.failed(); ++j)
      for (const auto& e : monomials) {
        DerivationRep::ScalarPoly x{{e, Gauss(1)}};
        DerivationRep::ScalarPoly lhs = rep.apply(i, rep.apply(j, x));
        for (const auto& [f, c] : rep.apply(j, rep.apply(i, x))) lhs[f] -= c;
        for (const auto& [g, c] : lie.bracket(i, j))
          for (const auto& [f, d] : rep.apply(g, x)) lhs[f] -= c * d;
        std::erase_if(lhs, [](const auto& t) { return t.second.is_zero(); });
        if (!lhs.empty()) {
          rb.fail("[" + lie.name(i) + "," + lie.name(j) + "] on " + monomial_string(e, rep.coordinates()),
                  monomial_string(lhs.begin()->first, rep.coordinates()), {lhs.begin()->second});
          break;
        }
      }
  return rb.done();
}

// h |> 1 = eps(h) 1 and h |> (a * b) = (h_(1) |> a) * (h_(2) |> b)
inline Report check_module_algebra(const AlgebraObject& A, const std::vector<Monomial>& words,
                                   const std::vector<std::pair<PolyFunction, PolyFunction>>& pairs) {
  ReportBuilder rb("module_algebra", "sec 3.1 algebra in H-modules");
  const auto& h = A.hopf();
  for (const auto& m : words) {
    TensorElement hm = TensorElement::term({m}, Gauss(1), A.order());
    const auto& em = h.epsilon()(m).terms();
    PolyFunction eps = PolyFunction::constant(A.dim(), em.empty() ? Series(A.order()) : em.begin()->second);
    if (auto d = difference("h |> 1 = eps(h) 1 for " + A.lie().monomial_string(m), A.act(m, A.one()), eps,
                            A.coordinates())) {
      rb.fail(std::move(*d));
      break;
    }
    const TensorElement& dm = h.delta()(m);
    for (const auto& [a, b] : pairs) {
      PolyFunction rhs(A.dim(), A.order());
      for (const auto& [k, s] : dm.terms()) rhs += A.star(A.act(k[0], a), A.act(k[1], b)).scaled(s);
      if (auto d = difference("h |> (a*b) = (h1 |> a)*(h2 |> b) for " + A.lie().monomial_string(m),
                              A.act(hm, A.star(a, b)), rhs, A.coordinates())) {
        rb.fail(std::move(*d));
        break;
      }
    }
    if (rb.failed()) break;
  }
  return rb.done();
}

}  // namespace qhopf
