#pragma once

// Polynomial functions on R^d with hbar-series coefficients, and Lie algebra
// actions on them by polynomial vector fields.

#include "tensor.hpp"

#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace qhopf {

using Exps = std::vector<int>;

class PolyFunction {
 public:
  using Terms = std::map<Exps, Series>;

  PolyFunction() = default;
  PolyFunction(int dim, int order) : dim_(dim), order_(order) {}

  static PolyFunction constant(int dim, int order, const Gauss& c) {
    PolyFunction p(dim, order);
    p.add(Exps(dim, 0), Series(order, c));
    return p;
  }
  static PolyFunction constant(int dim, const Series& s) {
    PolyFunction p(dim, s.order());
    p.add(Exps(dim, 0), s);
    return p;
  }
  static PolyFunction one(int dim, int order) { return constant(dim, order, Gauss(1)); }
  static PolyFunction coordinate(int dim, int order, int mu) {
    Exps e(dim, 0);
    e.at(mu) = 1;
    PolyFunction p(dim, order);
    p.add(e, Series::one(order));
    return p;
  }
  static PolyFunction monomial(Exps e, const Series& s) {
    PolyFunction p(static_cast<int>(e.size()), s.order());
    p.add(e, s);
    return p;
  }

  int dim() const { return dim_; }
  int order() const { return order_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  int degree() const {
    int d = -1;
    for (const auto& [e, s] : terms_) {
      int t = 0;
      for (int k : e) t += k;
      d = std::max(d, t);
    }
    return d;
  }

  void add(const Exps& e, const Series& s) {
    if (static_cast<int>(e.size()) != dim_) throw std::invalid_argument("polynomial dimension mismatch");
    if (s.order() != order_) throw std::invalid_argument("series truncation orders differ");
    if (s.is_zero()) return;
    auto [it, fresh] = terms_.try_emplace(e, s);
    if (!fresh) {
      it->second += s;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  PolyFunction& operator+=(const PolyFunction& o) {
    check(o);
    for (const auto& [e, s] : o.terms_) add(e, s);
    return *this;
  }
  PolyFunction& operator-=(const PolyFunction& o) {
    check(o);
    for (const auto& [e, s] : o.terms_) terms_.try_emplace(e, order_).first->second -= s;
    drop_zeros();
    return *this;
  }
  PolyFunction& operator*=(const Gauss& c) {
    if (c.is_zero()) terms_.clear();
    for (auto& [e, s] : terms_) s *= c;
    return *this;
  }
  PolyFunction scaled(const Series& c) const {
    PolyFunction r(dim_, order_);
    for (const auto& [e, s] : terms_) r.terms_.try_emplace(e, order_).first->second.add_product(s, c);
    r.drop_zeros();
    return r;
  }

  friend PolyFunction operator+(PolyFunction a, const PolyFunction& b) { return a += b; }
  friend PolyFunction operator-(PolyFunction a, const PolyFunction& b) { return a -= b; }
  friend PolyFunction operator-(PolyFunction a) { return a *= Gauss(-1); }
  friend PolyFunction operator*(PolyFunction a, const Gauss& c) { return a *= c; }
  friend PolyFunction operator*(const PolyFunction& a, const PolyFunction& b) {
    a.check(b);
    PolyFunction r(a.dim_, a.order_);
    Exps e(a.dim_);
    for (const auto& [ea, sa] : a.terms_)
      for (const auto& [eb, sb] : b.terms_) {
        if (sa.valuation() + sb.valuation() > a.order_) continue;
        for (int k = 0; k < a.dim_; ++k) e[k] = ea[k] + eb[k];
        r.terms_.try_emplace(e, a.order_).first->second.add_product(sa, sb);
      }
    r.drop_zeros();
    return r;
  }
  friend bool operator==(const PolyFunction& a, const PolyFunction& b) {
    return a.dim_ == b.dim_ && a.order_ == b.order_ && a.terms_ == b.terms_;
  }

  void drop_zeros() {
    std::erase_if(terms_, [](const auto& t) { return t.second.is_zero(); });
  }

  void truncate(int k) {
    if (k >= order_) return;
    for (auto& [e, s] : terms_) s.truncate(k);
    std::erase_if(terms_, [](const auto& t) { return t.second.is_zero(); });
  }

  // d^n/dx_mu^n
  PolyFunction derivative(int mu, int n = 1) const {
    PolyFunction r(dim_, order_);
    for (const auto& [e, s] : terms_) {
      if (e[mu] < n) continue;
      Exps f = e;
      long c = 1;
      for (int k = 0; k < n; ++k) c *= f[mu]--;
      r.add(f, s * Gauss(c));
    }
    return r;
  }

  // coefficient series at hbar^0 .. hbar^N of the constant term
  Series constant_term() const {
    auto it = terms_.find(Exps(dim_, 0));
    return it == terms_.end() ? Series(order_) : it->second;
  }

  void check(const PolyFunction& o) const {
    if (o.dim_ != dim_) throw std::invalid_argument("polynomial dimension mismatch");
    if (o.order_ != order_) throw std::invalid_argument("series truncation orders differ");
  }

 private:
  int dim_ = 0;
  int order_ = 0;
  Terms terms_;
};

// first-order operator sum_mu p_mu(x) d/dx_mu per generator
class DerivationRep {
 public:
  using ScalarPoly = std::map<Exps, Gauss>;
  using VectorField = std::vector<std::pair<int, ScalarPoly>>;

  DerivationRep(std::vector<std::string> coordinates, std::vector<VectorField> fields)
      : coords_(std::move(coordinates)), fields_(std::move(fields)) {
    for (const auto& f : fields_)
      for (const auto& [mu, p] : f) {
        if (mu < 0 || mu >= dim()) throw std::invalid_argument("vector field component out of range");
        for (const auto& [e, c] : p)
          if (static_cast<int>(e.size()) != dim()) throw std::invalid_argument("vector field coefficient dimension");
      }
  }

  int dim() const { return static_cast<int>(coords_.size()); }
  int generators() const { return static_cast<int>(fields_.size()); }
  const std::vector<std::string>& coordinates() const { return coords_; }
  const VectorField& field(int g) const {
    if (g < 0 || g >= generators()) throw std::invalid_argument("representation: missing generator image");
    return fields_[g];
  }
  void set_field(int g, VectorField f) {
    fields_.at(g) = std::move(f);
    cache_.clear();
  }

  // generator g on a scalar polynomial
  ScalarPoly apply(int g, const ScalarPoly& p) const {
    ScalarPoly out;
    for (const auto& [mu, coef] : field(g))
      for (const auto& [e, c] : p) {
        if (e[mu] == 0) continue;
        Exps f = e;
        Gauss k = c * Gauss(f[mu]--);
        for (const auto& [ec, cc] : coef) {
          Exps t = f;
          for (int j = 0; j < dim(); ++j) t[j] += ec[j];
          out[t] += k * cc;
        }
      }
    std::erase_if(out, [](const auto& t) { return t.second.is_zero(); });
    return out;
  }

  // PBW monomial g_1 ... g_k acting on x^e: g_k acts first
  const ScalarPoly& apply(const Monomial& m, const Exps& e) const {
    std::string key = m;
    key.push_back('\x7f');
    for (int k : e) key += std::to_string(k) + ",";
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
    ScalarPoly p{{e, Gauss(1)}};
    for (auto it = m.rbegin(); it != m.rend() && !p.empty(); ++it) p = apply(static_cast<unsigned char>(*it), p);
    return cache_.emplace(std::move(key), std::move(p)).first->second;
  }

 private:
  std::vector<std::string> coords_;
  std::vector<VectorField> fields_;
  mutable std::unordered_map<std::string, ScalarPoly> cache_;
};

using RepPtr = std::shared_ptr<const DerivationRep>;

// "x1^2*p3", "1" for the constant monomial
inline std::string monomial_string(const Exps& e, const std::vector<std::string>& coords) {
  std::string s;
  for (std::size_t k = 0; k < e.size(); ++k) {
    if (e[k] == 0) continue;
    if (!s.empty()) s += "*";
    s += coords.at(k);
    if (e[k] > 1) s += "^" + std::to_string(e[k]);
  }
  return s.empty() ? "1" : s;
}

// h |> a, extended to U(g)[[hbar]] linearly
inline PolyFunction act(const TensorElement& h, const PolyFunction& a, const DerivationRep& rep) {
  if (h.legs() != 1) throw std::invalid_argument("act: element must have one leg");
  if (h.order() != a.order()) throw std::invalid_argument("series truncation orders differ");
  PolyFunction out(a.dim(), a.order());
  for (const auto& [k, sh] : h.terms())
    for (const auto& [e, sa] : a.terms()) {
      if (sh.valuation() + sa.valuation() > a.order()) continue;
      Series s = sh * sa;
      for (const auto& [f, c] : rep.apply(k[0], e)) out.add(f, s * c);
    }
  return out;
}

inline PolyFunction act(const Monomial& m, const PolyFunction& a, const DerivationRep& rep) {
  PolyFunction out(a.dim(), a.order());
  for (const auto& [e, sa] : a.terms())
    for (const auto& [f, c] : rep.apply(m, e)) out.add(f, sa * c);
  return out;
}

}  // namespace qhopf
