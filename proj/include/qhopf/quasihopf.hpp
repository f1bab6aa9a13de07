#pragma once

// Quasi-Hopf structures on U(g)[[hbar]]: data, axiom checks, gauge transforms and twisting.

#include "report.hpp"
#include "tensor.hpp"

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace qhopf {

class QuasiHopfData {
 public:
  LiePtr lie;
  int order = 3;
  std::vector<TensorElement> delta_gen;     // 2 legs each
  std::vector<Gauss> epsilon_gen;
  std::vector<TensorElement> antipode_gen;  // 1 leg each
  TensorElement alpha, beta;                // 1 leg
  TensorElement phi;                        // 3 legs
  std::optional<TensorElement> r_matrix;    // 2 legs

  // Structure maps extended from the generator images. Memoized; call
  // invalidate() after editing any field by hand.
  const StructureMap& delta() const { return maps().delta; }
  const StructureMap& epsilon() const { return maps().epsilon; }
  const StructureMap& antipode() const { return maps().antipode; }
  const TensorElement& phi_inv() const {
    auto& m = maps();
    if (!m.phi_inv) m.phi_inv = invert_element(phi, *lie);
    return *m.phi_inv;
  }
  const TensorElement& r_inv() const {
    if (!r_matrix) throw std::logic_error("quasi-Hopf data has no R-matrix");
    auto& m = maps();
    if (!m.r_inv) m.r_inv = invert_element(*r_matrix, *lie);
    return *m.r_inv;
  }
  void invalidate() { maps_.reset(); }

  TensorElement unit(int legs) const { return TensorElement::unit(legs, order); }
  // left-to-right product of the factors
  template <class... Rest>
  TensorElement mul(const TensorElement& a, const TensorElement& b, const Rest&... rest) const {
    TensorElement r = nc_mul(a, b, *lie);
    ((r = nc_mul(r, rest, *lie)), ...);
    return r;
  }
  TensorElement gen(int g) const { return TensorElement::generator(g, order); }

  // Delta, epsilon or S applied on one leg of x (0-based)
  TensorElement delta_on(const TensorElement& x, int leg) const { return delta().apply_on_leg(x, leg); }
  TensorElement epsilon_on(const TensorElement& x, int leg) const { return epsilon().apply_on_leg(x, leg); }
  TensorElement antipode_on(const TensorElement& x, int leg) const { return antipode().apply_on_leg(x, leg); }

 private:
  struct Maps {
    StructureMap delta, epsilon, antipode;
    std::optional<TensorElement> phi_inv, r_inv;
  };
  Maps& maps() const {
    if (!maps_) {
      std::vector<TensorElement> eps;
      for (const auto& e : epsilon_gen) eps.push_back(TensorElement::term({}, e, order));
      maps_ = std::make_shared<Maps>(Maps{
          StructureMap(StructureMap::Kind::homomorphism, delta_gen, lie, 2, order),
          StructureMap(StructureMap::Kind::homomorphism, eps, lie, 0, order),
          StructureMap(StructureMap::Kind::anti_homomorphism, antipode_gen, lie, 1, order), {}, {}});
    }
    return *maps_;
  }
  mutable std::shared_ptr<Maps> maps_;
};

// U(g) with primitive coproduct, trivial associator and R = 1 (x) 1
inline QuasiHopfData classical_hopf(LiePtr lie, int order) {
  QuasiHopfData h;
  h.order = order;
  const int n = lie->size();
  for (int g = 0; g < n; ++g) {
    h.delta_gen.push_back(TensorElement::term({mono({g}), {}}, Gauss(1), order) +
                          TensorElement::term({{}, mono({g})}, Gauss(1), order));
    h.epsilon_gen.emplace_back(0);
    h.antipode_gen.push_back(TensorElement::term({mono({g})}, Gauss(-1), order));
  }
  h.lie = std::move(lie);
  h.alpha = h.unit(1);
  h.beta = h.unit(1);
  h.phi = h.unit(3);
  h.r_matrix = h.unit(2);
  return h;
}

// sum over terms of x of the product of the listed slots; a slot is a leg of x
// (0-based) or a fixed one-leg element
struct Slot {
  int leg = -1;
  const TensorElement* fixed = nullptr;
  Slot(int l) : leg(l) {}
  Slot(const TensorElement& e) : fixed(&e) {}
};

inline TensorElement contract(const TensorElement& x, const std::vector<Slot>& slots, const LiePresentation& lie) {
  TensorElement out(1, x.order());
  for (const auto& [k, s] : x.terms()) {
    TensorElement acc = TensorElement::term(TensorKey(1), s);
    std::string word;
    auto flush = [&] {
      if (word.empty()) return;
      acc = nc_mul(acc, TensorElement::term({word}, Gauss(1), x.order()), lie);
      word.clear();
    };
    for (const auto& sl : slots) {
      if (sl.fixed) {
        flush();
        acc = nc_mul(acc, *sl.fixed, lie);
      } else {
        word += k.at(sl.leg);
      }
    }
    flush();
    out += acc;
  }
  return out;
}

inline std::optional<Residual> difference(const std::string& identity, const TensorElement& lhs,
                                          const TensorElement& rhs, const LiePresentation& lie) {
  TensorElement d = lhs - rhs;
  if (d.is_zero()) return std::nullopt;
  const auto& [k, s] = *d.terms().begin();
  std::string term;
  for (std::size_t l = 0; l < k.size(); ++l) term += (l ? " (x) " : "") + lie.monomial_string(k[l]);
  if (k.empty()) term = "1";
  return Residual{identity, term, s.coeffs()};
}

// PBW monomials of length 1..max_len
inline std::vector<Monomial> sample_monomials(const LiePresentation& lie, int max_len) {
  std::vector<Monomial> out, layer{Monomial{}};
  for (int len = 1; len <= max_len; ++len) {
    std::vector<Monomial> next;
    for (const auto& m : layer) {
      int start = m.empty() ? 0 : static_cast<unsigned char>(m.back());
      for (int g = start; g < lie.size(); ++g) next.push_back(m + static_cast<char>(g));
    }
    out.insert(out.end(), next.begin(), next.end());
    layer = std::move(next);
  }
  return out;
}

namespace detail {
inline void expect(ReportBuilder& rb, const std::string& identity, const TensorElement& lhs, const TensorElement& rhs,
                   const LiePresentation& lie) {
  if (rb.failed()) return;
  if (auto r = difference(identity, lhs, rhs, lie)) rb.fail(std::move(*r));
}
// [x, y] as a tensor element
inline TensorElement bracket_element(const QuasiHopfData& h, int i, int j) {
  TensorElement r(1, h.order);
  for (const auto& [g, c] : h.lie->bracket(i, j)) r.add({mono({g})}, Series(h.order, c));
  return r;
}
}  // namespace detail

inline Report check_quasibialgebra(const QuasiHopfData& h, int word_length = 2) {
  ReportBuilder rb("quasibialgebra", "(2.1a)-(2.1e)");
  const auto& lie = *h.lie;
  const int n = lie.size();
  // generator images must respect the brackets for Delta and epsilon to be well defined
  for (int i = 0; i < n && !rb.failed(); ++i)
    for (int j = i + 1; j < n; ++j) {
      TensorElement di = h.delta().images()[i], dj = h.delta().images()[j];
      detail::expect(rb, "Delta([x,y]) = [Delta x, Delta y]", h.delta_on(detail::bracket_element(h, i, j), 0),
                     h.mul(di, dj) - h.mul(dj, di), lie);
      detail::expect(rb, "epsilon([x,y]) = 0", h.epsilon_on(detail::bracket_element(h, i, j), 0),
                     TensorElement(0, h.order), lie);
    }
  for (const auto& m : sample_monomials(lie, word_length)) {
    if (rb.failed()) break;
    TensorElement x = TensorElement::term({m}, Gauss(1), h.order);
    TensorElement dx = h.delta_on(x, 0);
    detail::expect(rb, "(2.1a) (epsilon (x) id) Delta(h) = h", h.epsilon_on(dx, 0), x, lie);
    detail::expect(rb, "(2.1a) (id (x) epsilon) Delta(h) = h", h.epsilon_on(dx, 1), x, lie);
    detail::expect(rb, "(2.1b) quasi-coassociativity", h.mul(h.delta_on(dx, 1), h.phi),
                   h.mul(h.phi, h.delta_on(dx, 0)), lie);
  }
  if (!rb.failed()) {
    TensorElement lhs = h.mul(h.delta_on(h.phi, 2), h.delta_on(h.phi, 0));
    TensorElement rhs = h.mul(outer(h.unit(1), h.phi), h.delta_on(h.phi, 1), outer(h.phi, h.unit(1)));
    detail::expect(rb, "(2.1c) 3-cocycle", lhs, rhs, lie);
  }
  detail::expect(rb, "(2.1d) (id (x) epsilon (x) id)(phi) = 1", h.epsilon_on(h.phi, 1), h.unit(2), lie);
  detail::expect(rb, "(2.1e) (epsilon (x) id (x) id)(phi) = 1", h.epsilon_on(h.phi, 0), h.unit(2), lie);
  detail::expect(rb, "(2.1e) (id (x) id (x) epsilon)(phi) = 1", h.epsilon_on(h.phi, 2), h.unit(2), lie);
  return rb.done();
}

inline Report check_quasiantipode(const QuasiHopfData& h, int word_length = 2) {
  ReportBuilder rb("quasiantipode", "(2.2a)-(2.2d)");
  const auto& lie = *h.lie;
  const int n = lie.size();
  for (int i = 0; i < n && !rb.failed(); ++i)
    for (int j = i + 1; j < n; ++j) {
      const auto& si = h.antipode().images()[i];
      const auto& sj = h.antipode().images()[j];
      detail::expect(rb, "S([x,y]) = [S y, S x]", h.antipode_on(detail::bracket_element(h, i, j), 0),
                     h.mul(sj, si) - h.mul(si, sj), lie);
    }
  for (const auto& m : sample_monomials(lie, word_length)) {
    if (rb.failed()) break;
    TensorElement x = TensorElement::term({m}, Gauss(1), h.order);
    TensorElement dx = h.delta_on(x, 0);
    TensorElement eps = h.epsilon_on(x, 0);
    Series e = eps.is_zero() ? Series(h.order) : eps.terms().begin()->second;
    detail::expect(rb, "(2.2a) S(h1) alpha h2 = epsilon(h) alpha",
                   contract(h.antipode_on(dx, 0), {0, h.alpha, 1}, lie), h.alpha.scaled(e), lie);
    detail::expect(rb, "(2.2b) h1 beta S(h2) = epsilon(h) beta", contract(h.antipode_on(dx, 1), {0, h.beta, 1}, lie),
                   h.beta.scaled(e), lie);
  }
  if (!rb.failed()) {
    TensorElement lhs = contract(h.antipode_on(h.phi, 1), {0, h.beta, 1, h.alpha, 2}, lie);
    detail::expect(rb, "(2.2c) phi1 beta S(phi2) alpha phi3 = 1", lhs, h.unit(1), lie);
  }
  if (!rb.failed()) {
    TensorElement t = h.antipode_on(h.antipode_on(h.phi_inv(), 0), 2);
    detail::expect(rb, "(2.2d) S(phi-1) alpha phi-2 beta S(phi-3) = 1", contract(t, {0, h.alpha, 1, h.beta, 2}, lie),
                   h.unit(1), lie);
  }
  return rb.done();
}

// R_21 R = 1
inline bool is_triangular(const QuasiHopfData& h) {
  if (!h.r_matrix) throw std::logic_error("quasi-Hopf data has no R-matrix");
  return h.mul(leg_embed(*h.r_matrix, {2, 1}, 2), *h.r_matrix) == h.unit(2);
}

inline Report check_quasitriangular(const QuasiHopfData& h, int word_length = 2) {
  if (!h.r_matrix) throw std::logic_error("check_quasitriangular: no R-matrix");
  ReportBuilder rb("quasitriangular", "(5.1a)-(5.1c)");
  const auto& lie = *h.lie;
  const TensorElement& r = *h.r_matrix;
  const TensorElement& ri = h.r_inv();
  for (const auto& m : sample_monomials(lie, word_length)) {
    if (rb.failed()) break;
    TensorElement dx = h.delta_on(TensorElement::term({m}, Gauss(1), h.order), 0);
    detail::expect(rb, "(5.1a) Delta^op(h) = R Delta(h) R^-1", leg_embed(dx, {2, 1}, 2), h.mul(r, dx, ri), lie);
  }
  const TensorElement& p = h.phi;
  const TensorElement& pi = h.phi_inv();
  if (!rb.failed()) {
    TensorElement rhs = h.mul(leg_embed(pi, {2, 3, 1}, 3), leg_embed(r, {1, 3}, 3), leg_embed(p, {2, 1, 3}, 3),
                               leg_embed(r, {1, 2}, 3), pi);
    detail::expect(rb, "(5.1b) (id (x) Delta)(R)", h.delta_on(r, 1), rhs, lie);
  }
  if (!rb.failed()) {
    TensorElement rhs = h.mul(leg_embed(p, {3, 1, 2}, 3), leg_embed(r, {1, 3}, 3), leg_embed(pi, {1, 3, 2}, 3),
                               leg_embed(r, {2, 3}, 3), p);
    detail::expect(rb, "(5.1c) (Delta (x) id)(R)", h.delta_on(r, 0), rhs, lie);
  }
  rb.info("triangular", is_triangular(h) ? "true" : "false");
  return rb.done();
}

// (epsilon (x) id)(F) = 1 = (id (x) epsilon)(F)
inline bool is_counital(const QuasiHopfData& h, const TensorElement& f) {
  return h.epsilon_on(f, 0) == h.unit(1) && h.epsilon_on(f, 1) == h.unit(1);
}

// H_F: coproduct F Delta F^-1, associator (1 (x) F)(id (x) Delta)(F) phi (Delta (x) id)(F^-1)(F^-1 (x) 1),
// alpha_F = S(F-1) alpha F-2, beta_F = F1 beta S(F2), R_F = F_21 R F^-1
inline QuasiHopfData apply_twist(const QuasiHopfData& h, const TensorElement& f) {
  if (f.legs() != 2 || f.order() != h.order) throw std::invalid_argument("apply_twist: twist must be a 2-leg element");
  if (!is_counital(h, f)) throw std::invalid_argument("apply_twist: twist is not counital");
  const auto& lie = *h.lie;
  TensorElement fi = invert_element(f, lie);
  QuasiHopfData t;
  t.lie = h.lie;
  t.order = h.order;
  t.epsilon_gen = h.epsilon_gen;
  t.antipode_gen = h.antipode_gen;
  for (const auto& d : h.delta_gen) t.delta_gen.push_back(h.mul(f, d, fi));
  TensorElement one = h.unit(1);
  t.phi = h.mul(outer(one, f), h.delta_on(f, 1), h.phi, h.delta_on(fi, 0), outer(fi, one));
  t.alpha = contract(h.antipode_on(fi, 0), {0, h.alpha, 1}, lie);
  t.beta = contract(h.antipode_on(f, 1), {0, h.beta, 1}, lie);
  if (h.r_matrix) t.r_matrix = h.mul(leg_embed(f, {2, 1}, 2), *h.r_matrix, fi);
  return t;
}

namespace detail {
inline void expect_same_data(ReportBuilder& rb, const std::string& tag, const QuasiHopfData& a, const QuasiHopfData& b) {
  const auto& lie = *a.lie;
  for (int g = 0; g < lie.size(); ++g) {
    detail::expect(rb, tag + ": Delta(" + lie.name(g) + ")", a.delta_gen[g], b.delta_gen[g], lie);
    detail::expect(rb, tag + ": S(" + lie.name(g) + ")", a.antipode_gen[g], b.antipode_gen[g], lie);
    if (!rb.failed() && !(a.epsilon_gen[g] == b.epsilon_gen[g])) rb.fail(tag + ": epsilon(" + lie.name(g) + ")");
  }
  detail::expect(rb, tag + ": phi", a.phi, b.phi, lie);
  detail::expect(rb, tag + ": alpha", a.alpha, b.alpha, lie);
  detail::expect(rb, tag + ": beta", a.beta, b.beta, lie);
  if (a.r_matrix.has_value() != b.r_matrix.has_value())
    rb.fail(tag + ": R-matrix present on one side only");
  else if (a.r_matrix)
    detail::expect(rb, tag + ": R", *a.r_matrix, *b.r_matrix, lie);
}
}  // namespace detail

// (H_F)_{F^-1} = H
inline Report check_twist_inverse(const QuasiHopfData& h, const TensorElement& f) {
  ReportBuilder rb("twist_inverse", "thm 2.2 (H_F)_{F^-1} = H");
  QuasiHopfData back = apply_twist(apply_twist(h, f), invert_element(f, *h.lie));
  detail::expect_same_data(rb, "(H_F)_{F^-1}", back, h);
  return rb.done();
}

// (H_F)_G = H_{GF}
inline Report check_composite_twist(const QuasiHopfData& h, const TensorElement& f, const TensorElement& g) {
  ReportBuilder rb("composite_twist", "thm 2.2 (H_F)_G = H_{GF}");
  detail::expect_same_data(rb, "(H_F)_G", apply_twist(apply_twist(h, f), g), apply_twist(h, h.mul(g, f)));
  return rb.done();
}

// S' = u S(.) u^-1, alpha' = u alpha, beta' = beta u^-1
inline QuasiHopfData gauge_transform_antipode(const QuasiHopfData& h, const TensorElement& u) {
  if (u.legs() != 1) throw std::invalid_argument("gauge transform: u must have one leg");
  TensorElement c0 = u.classical_part();
  if (c0.size() != 1 || !c0.terms().begin()->first[0].empty())
    throw std::domain_error("gauge transform: u is not invertible");
  Gauss lead = c0.terms().begin()->second[0];
  TensorElement un = u * (Gauss(1) / lead);
  TensorElement ui = invert_element(un, *h.lie) * (Gauss(1) / lead);
  QuasiHopfData t = h;
  t.invalidate();
  t.antipode_gen.clear();
  for (const auto& s : h.antipode_gen) t.antipode_gen.push_back(h.mul(u, s, ui));
  t.alpha = h.mul(u, h.alpha);
  t.beta = h.mul(h.beta, ui);
  return t;
}

}  // namespace qhopf
