#pragma once

// Exact scalars: Gaussian rationals Q(i) and hbar-series truncated at a fixed order.

#include <gmpxx.h>

#include <algorithm>
#include <compare>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace qhopf {

struct Gauss {
  mpq_class re{0};
  mpq_class im{0};

  Gauss() = default;
  Gauss(long v) : re(v) {}
  Gauss(mpq_class r, mpq_class i = 0) : re(std::move(r)), im(std::move(i)) {
    re.canonicalize();
    im.canonicalize();
  }

  static Gauss I() { return Gauss(0, 1); }
  static Gauss ratio(long p, long q) { return Gauss(mpq_class(p, q)); }

  bool is_zero() const { return sgn(re) == 0 && sgn(im) == 0; }
  bool is_one() const { return re == 1 && sgn(im) == 0; }

  Gauss conj() const { return Gauss(re, -im); }

  Gauss& operator+=(const Gauss& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  Gauss& operator-=(const Gauss& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
  Gauss& operator*=(const Gauss& o) {
    // real and purely imaginary factors are the common case
    if (sgn(o.im) == 0) {
      re *= o.re;
      if (sgn(im) != 0) im *= o.re;
      return *this;
    }
    if (sgn(o.re) == 0) {
      std::swap(re, im);
      re *= o.im;
      im *= o.im;
      mpq_neg(re.get_mpq_t(), re.get_mpq_t());
      return *this;
    }
    mpq_class r = re * o.re - im * o.im;
    mpq_class i = re * o.im + im * o.re;
    re = std::move(r);
    im = std::move(i);
    return *this;
  }
  // this += a*b without building a temporary Gauss
  void add_mul(const Gauss& a, const Gauss& b) {
    thread_local mpq_class t;
    auto mac = [](mpq_class& acc, const mpq_class& x, const mpq_class& y, bool neg) {
      if (sgn(x) == 0 || sgn(y) == 0) return;
      mpq_mul(t.get_mpq_t(), x.get_mpq_t(), y.get_mpq_t());
      if (neg)
        acc -= t;
      else
        acc += t;
    };
    mac(re, a.re, b.re, false);
    mac(re, a.im, b.im, true);
    mac(im, a.re, b.im, false);
    mac(im, a.im, b.re, false);
  }
  Gauss& operator/=(const Gauss& o) {
    if (o.is_zero()) throw std::domain_error("division by zero");
    mpq_class n = o.re * o.re + o.im * o.im;
    mpq_class r = (re * o.re + im * o.im) / n;
    mpq_class i = (im * o.re - re * o.im) / n;
    re = std::move(r);
    im = std::move(i);
    return *this;
  }

  friend Gauss operator+(Gauss a, const Gauss& b) { return a += b; }
  friend Gauss operator-(Gauss a, const Gauss& b) { return a -= b; }
  friend Gauss operator*(Gauss a, const Gauss& b) { return a *= b; }
  friend Gauss operator/(Gauss a, const Gauss& b) { return a /= b; }
  friend Gauss operator-(Gauss a) {
    a.re = -a.re;
    a.im = -a.im;
    return a;
  }
  friend bool operator==(const Gauss& a, const Gauss& b) { return a.re == b.re && a.im == b.im; }
};

inline std::string rational_string(const mpq_class& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

// "p/q" or "p"; throws std::invalid_argument on junk
inline mpq_class parse_rational(const std::string& s) {
  mpq_class q;
  if (s.empty() || q.set_str(s, 10) != 0) throw std::invalid_argument("bad rational: '" + s + "'");
  if (q.get_den() == 0) throw std::invalid_argument("zero denominator: '" + s + "'");
  q.canonicalize();
  return q;
}

inline std::ostream& operator<<(std::ostream& os, const Gauss& g) {
  if (sgn(g.im) == 0) return os << rational_string(g.re);
  if (sgn(g.re) == 0) return os << rational_string(g.im) << "*i";
  return os << "(" << rational_string(g.re) << (sgn(g.im) < 0 ? " - " : " + ")
            << rational_string(abs(g.im)) << "*i)";
}

// Polynomial in hbar with coefficients c_0..c_N; products drop degrees above N.
class Series {
 public:
  Series() = default;
  explicit Series(int order) : c_(static_cast<std::size_t>(order) + 1) {
    if (order < 0) throw std::invalid_argument("negative truncation order");
  }
  Series(int order, Gauss c0, int degree = 0) : Series(order) {
    if (degree <= order) c_[degree] = std::move(c0);
  }

  static Series one(int order) { return Series(order, Gauss(1)); }
  static Series hbar(int order, Gauss c = 1, int power = 1) { return Series(order, std::move(c), power); }

  int order() const { return static_cast<int>(c_.size()) - 1; }
  const Gauss& operator[](int k) const { return c_[k]; }
  Gauss& operator[](int k) { return c_[k]; }
  const std::vector<Gauss>& coeffs() const { return c_; }

  bool is_zero() const {
    for (const auto& g : c_)
      if (!g.is_zero()) return false;
    return true;
  }
  // lowest degree with a nonzero coefficient, order()+1 for zero
  int valuation() const {
    for (int k = 0; k <= order(); ++k)
      if (!c_[k].is_zero()) return k;
    return order() + 1;
  }

  // drop hbar^j for j > k
  void truncate(int k) {
    for (int j = std::max(k + 1, 0); j <= order(); ++j) c_[j] = Gauss();
  }

  Series& operator+=(const Series& o) {
    check(o);
    for (std::size_t k = 0; k < c_.size(); ++k) c_[k] += o.c_[k];
    return *this;
  }
  Series& operator-=(const Series& o) {
    check(o);
    for (std::size_t k = 0; k < c_.size(); ++k) c_[k] -= o.c_[k];
    return *this;
  }
  Series& operator*=(const Gauss& s) {
    for (auto& g : c_) g *= s;
    return *this;
  }
  // this += a*b, truncated
  void add_product(const Series& a, const Series& b) {
    check(a);
    check(b);
    const int n = order();
    int va = a.valuation(), vb = b.valuation();
    for (int i = va; i <= n; ++i) {
      if (a.c_[i].is_zero()) continue;
      for (int j = vb; i + j <= n; ++j) {
        if (b.c_[j].is_zero()) continue;
        c_[i + j].add_mul(a.c_[i], b.c_[j]);
      }
    }
  }

  friend Series operator+(Series a, const Series& b) { return a += b; }
  friend Series operator-(Series a, const Series& b) { return a -= b; }
  friend Series operator-(Series a) {
    for (auto& g : a.c_) g = -g;
    return a;
  }
  friend Series operator*(Series a, const Gauss& s) { return a *= s; }
  friend Series operator*(const Series& a, const Series& b) {
    Series r(a.order());
    r.add_product(a, b);
    return r;
  }
  friend bool operator==(const Series& a, const Series& b) = default;

  // order-by-order recursion; requires c_0 != 0
  Series inverse() const {
    if (c_[0].is_zero()) throw std::domain_error("series inverse: zero constant term");
    const int n = order();
    Series r(n);
    Gauss inv0 = Gauss(1) / c_[0];
    r.c_[0] = inv0;
    for (int k = 1; k <= n; ++k) {
      Gauss acc;
      for (int j = 1; j <= k; ++j) acc += c_[j] * r.c_[k - j];
      r.c_[k] = -(acc * inv0);
    }
    return r;
  }

 private:
  void check(const Series& o) const {
    if (o.c_.size() != c_.size()) throw std::invalid_argument("series truncation orders differ");
  }
  std::vector<Gauss> c_;
};

inline Series series_mul(const Series& a, const Series& b) { return a * b; }
inline Series series_inv(const Series& a) { return a.inverse(); }

}  // namespace qhopf
