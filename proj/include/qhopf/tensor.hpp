#pragma once

// Elements of H^{(x)n}[[hbar]] for H = U(g), with leg calculus.

#include "lie.hpp"

#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace qhopf {

using TensorKey = std::vector<Monomial>;

class TensorElement {
 public:
  using Terms = std::map<TensorKey, Series>;

  TensorElement() = default;
  TensorElement(int legs, int order) : legs_(legs), order_(order) {
    if (legs < 0 || order < 0) throw std::invalid_argument("bad tensor shape");
  }

  static TensorElement unit(int legs, int order) {
    TensorElement t(legs, order);
    t.add(TensorKey(legs), Series::one(order));
    return t;
  }
  static TensorElement term(TensorKey key, Series s) {
    TensorElement t(static_cast<int>(key.size()), s.order());
    t.add(std::move(key), std::move(s));
    return t;
  }
  static TensorElement term(TensorKey key, const Gauss& c, int order, int hbar_power = 0) {
    return term(std::move(key), Series(order, c, hbar_power));
  }
  static TensorElement generator(int g, int order) { return term({mono({g})}, Gauss(1), order); }

  int legs() const { return legs_; }
  int order() const { return order_; }
  const Terms& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }

  void add(const TensorKey& key, const Series& s) {
    if (static_cast<int>(key.size()) != legs_) throw std::invalid_argument("tensor key has wrong leg count");
    if (s.order() != order_) throw std::invalid_argument("series truncation orders differ");
    if (s.is_zero()) return;
    auto [it, fresh] = terms_.try_emplace(key, s);
    if (!fresh) {
      it->second += s;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }
  void add(const TensorKey& key, const Series& s, const Gauss& c) {
    if (c.is_zero()) return;
    add(key, s * c);
  }

  // smallest hbar degree over all terms
  int valuation() const {
    int v = order_ + 1;
    for (const auto& [k, s] : terms_) v = std::min(v, s.valuation());
    return v;
  }

  // degree-0 part as a tensor element
  TensorElement classical_part() const {
    TensorElement r(legs_, order_);
    for (const auto& [k, s] : terms_)
      if (!s[0].is_zero()) r.add(k, Series(order_, s[0]));
    return r;
  }

  TensorElement& operator+=(const TensorElement& o) {
    check(o);
    for (const auto& [k, s] : o.terms_) add(k, s);
    return *this;
  }
  TensorElement& operator-=(const TensorElement& o) {
    check(o);
    for (const auto& [k, s] : o.terms_) add(k, -s);
    return *this;
  }
  TensorElement& operator*=(const Gauss& c) {
    if (c.is_zero()) {
      terms_.clear();
      return *this;
    }
    for (auto& [k, s] : terms_) s *= c;
    return *this;
  }
  TensorElement scaled(const Series& s) const {
    TensorElement r(legs_, order_);
    for (const auto& [k, t] : terms_) r.add(k, t * s);
    return r;
  }

  friend TensorElement operator+(TensorElement a, const TensorElement& b) { return a += b; }
  friend TensorElement operator-(TensorElement a, const TensorElement& b) { return a -= b; }
  friend TensorElement operator-(TensorElement a) { return a *= Gauss(-1); }
  friend TensorElement operator*(TensorElement a, const Gauss& c) { return a *= c; }
  friend bool operator==(const TensorElement& a, const TensorElement& b) {
    return a.legs_ == b.legs_ && a.order_ == b.order_ && a.terms_ == b.terms_;
  }

  void check(const TensorElement& o) const {
    if (o.legs_ != legs_) throw std::invalid_argument("tensor leg counts differ");
    if (o.order_ != order_) throw std::invalid_argument("tensor truncation orders differ");
  }

 private:
  int legs_ = 0;
  int order_ = 0;
  Terms terms_;
};

// Leg-wise product with PBW normal ordering on every leg.
inline TensorElement nc_mul(const TensorElement& x, const TensorElement& y, const LiePresentation& lie) {
  x.check(y);
  const int n = x.legs(), order = x.order();
  TensorElement out(n, order);
  // bucket the right factor by valuation so hopeless pairs are skipped wholesale
  std::vector<std::vector<const TensorElement::Terms::value_type*>> by_val(order + 1);
  for (const auto& t : y.terms()) by_val[t.second.valuation()].push_back(&t);

  std::vector<const Combination*> legs(n);
  std::vector<std::size_t> idx(n);
  TensorKey key(n);
  for (const auto& [kx, sx] : x.terms()) {
    const int vx = sx.valuation();
    for (int vy = 0; vx + vy <= order; ++vy)
      for (const auto* ty : by_val[vy]) {
        const auto& [ky, sy] = *ty;
        Series s = sx * sy;
        if (s.is_zero()) continue;
        bool empty = false;
        for (int l = 0; l < n; ++l) {
          legs[l] = &lie.normal_order(kx[l] + ky[l]);
          if (legs[l]->empty()) empty = true;
        }
        if (empty) continue;
        // odometer over the cartesian product of leg expansions
        std::fill(idx.begin(), idx.end(), 0);
        while (true) {
          Gauss c(1);
          for (int l = 0; l < n; ++l) {
            const auto& [m, g] = (*legs[l])[idx[l]];
            key[l] = m;
            if (!g.is_one()) c *= g;
          }
          out.add(key, s, c);
          int l = n - 1;
          while (l >= 0 && ++idx[l] == legs[l]->size()) idx[l--] = 0;
          if (l < 0) break;
        }
      }
  }
  return out;
}

// X_{i_1 ... i_p}: component j of x placed on leg positions[j] (1-based) of n legs
inline TensorElement leg_embed(const TensorElement& x, const std::vector<int>& positions, int n) {
  if (static_cast<int>(positions.size()) != x.legs()) throw std::invalid_argument("leg_embed: wrong number of positions");
  std::vector<bool> seen(n + 1, false);
  for (int p : positions) {
    if (p < 1 || p > n) throw std::invalid_argument("leg_embed: position out of range");
    if (seen[p]) throw std::invalid_argument("leg_embed: duplicate position");
    seen[p] = true;
  }
  TensorElement r(n, x.order());
  for (const auto& [k, s] : x.terms()) {
    TensorKey key(n);
    for (std::size_t j = 0; j < positions.size(); ++j) key[positions[j] - 1] = k[j];
    r.add(key, s);
  }
  return r;
}

// x (x) y
inline TensorElement outer(const TensorElement& x, const TensorElement& y) {
  if (x.order() != y.order()) throw std::invalid_argument("tensor truncation orders differ");
  TensorElement r(x.legs() + y.legs(), x.order());
  for (const auto& [kx, sx] : x.terms())
    for (const auto& [ky, sy] : y.terms()) {
      TensorKey key = kx;
      key.insert(key.end(), ky.begin(), ky.end());
      r.add(key, sx * sy);
    }
  return r;
}

inline TensorElement exp_truncated(const TensorElement& x, const LiePresentation& lie) {
  if (x.valuation() == 0) throw std::domain_error("exp_truncated: nonzero order-0 part");
  TensorElement result = TensorElement::unit(x.legs(), x.order());
  TensorElement power = result;
  for (int k = 1; k <= x.order(); ++k) {
    power = nc_mul(power, x, lie) * Gauss::ratio(1, k);
    if (power.is_zero()) break;
    result += power;
  }
  return result;
}

// Y with XY = YX = 1; x must be 1 + O(hbar)
inline TensorElement invert_element(const TensorElement& x, const LiePresentation& lie) {
  TensorElement one = TensorElement::unit(x.legs(), x.order());
  if (!(x.classical_part() == one)) throw std::domain_error("invert_element: order-0 part is not the unit");
  TensorElement y = one - x;  // x = 1 - y, y = O(hbar)
  TensorElement result = one, power = one;
  for (int k = 1; k <= x.order(); ++k) {
    power = nc_mul(power, y, lie);
    if (power.is_zero()) break;
    result += power;
  }
  return result;
}

// log(1 + y) = sum (-1)^(k+1) y^k / k; x must be 1 + O(hbar)
inline TensorElement log_element(const TensorElement& x, const LiePresentation& lie) {
  TensorElement one = TensorElement::unit(x.legs(), x.order());
  if (!(x.classical_part() == one)) throw std::domain_error("log_element: order-0 part is not the unit");
  TensorElement y = x - one;
  TensorElement result(x.legs(), x.order()), power = one;
  for (int k = 1; k <= x.order(); ++k) {
    power = nc_mul(power, y, lie);
    if (power.is_zero()) break;
    result += power * Gauss::ratio(k % 2 ? 1 : -1, k);
  }
  return result;
}

// Algebra (anti-)homomorphism U(g) -> H^{(x)k}[[hbar]] fixed by generator images,
// memoized per PBW monomial.
class StructureMap {
 public:
  enum class Kind { homomorphism, anti_homomorphism };

  StructureMap(Kind kind, std::vector<TensorElement> images, LiePtr lie, int legs, int order)
      : kind_(kind), images_(std::move(images)), lie_(std::move(lie)), legs_(legs), order_(order) {
    for (const auto& im : images_)
      if (im.legs() != legs_ || im.order() != order_) throw std::invalid_argument("structure map image has wrong shape");
  }

  int legs() const { return legs_; }
  const std::vector<TensorElement>& images() const { return images_; }

  const TensorElement& operator()(const Monomial& m) const {
    if (auto it = cache_.find(m); it != cache_.end()) return it->second;
    TensorElement v;
    if (m.empty()) {
      v = TensorElement::unit(legs_, order_);
    } else {
      auto g = static_cast<std::size_t>(static_cast<unsigned char>(m[0]));
      if (g >= images_.size()) throw std::invalid_argument("structure map: missing generator image");
      const TensorElement& rest = (*this)(m.substr(1));
      v = kind_ == Kind::homomorphism ? nc_mul(images_[g], rest, *lie_) : nc_mul(rest, images_[g], *lie_);
    }
    return cache_.emplace(m, std::move(v)).first->second;
  }

  // applied to a one-leg element
  TensorElement operator()(const TensorElement& x) const { return apply_on_leg(x, 0); }

  // replaces leg `leg` of x by the image (which has legs() legs)
  TensorElement apply_on_leg(const TensorElement& x, int leg) const {
    if (leg < 0 || leg >= x.legs()) throw std::invalid_argument("structure map: leg out of range");
    TensorElement r(x.legs() - 1 + legs_, x.order());
    for (const auto& [k, s] : x.terms()) {
      const TensorElement& im = (*this)(k[leg]);
      for (const auto& [ki, si] : im.terms()) {
        TensorKey key;
        key.reserve(r.legs());
        key.insert(key.end(), k.begin(), k.begin() + leg);
        key.insert(key.end(), ki.begin(), ki.end());
        key.insert(key.end(), k.begin() + leg + 1, k.end());
        r.add(key, s * si);
      }
    }
    return r;
  }

 private:
  Kind kind_;
  std::vector<TensorElement> images_;
  LiePtr lie_;
  int legs_;
  int order_;
  mutable std::unordered_map<Monomial, TensorElement> cache_;
};

inline TensorElement extend_structure_map(StructureMap::Kind kind, const std::vector<TensorElement>& images,
                                          const LiePtr& lie, const TensorElement& x) {
  if (images.empty()) throw std::invalid_argument("structure map without images");
  StructureMap m(kind, images, lie, images.front().legs(), x.order());
  return m(x);
}

inline std::string to_string(const TensorElement& x, const LiePresentation& lie) {
  if (x.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [k, s] : x.terms())
    for (int d = 0; d <= s.order(); ++d) {
      if (s[d].is_zero()) continue;
      if (!first) os << " + ";
      first = false;
      os << s[d];
      if (d > 0) os << "*h" << (d > 1 ? "^" + std::to_string(d) : "");
      os << " [";
      for (std::size_t l = 0; l < k.size(); ++l) os << (l ? " (x) " : "") << lie.monomial_string(k[l]);
      os << "]";
    }
  return os.str();
}

}  // namespace qhopf
