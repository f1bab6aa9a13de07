#pragma once

// Preset quasi-Hopf algebras with their twists and representations:
//   classical  U(g) itself (trivial twist)
//   moyal      Abelian twist F = exp(-(i hbar/2) theta^{ij} t_i (x) t_j)
//   rflux      twist of the nilpotent algebra {t_i, m_ij, tt^i} with [tt^i, m_jk] = d^i_j t_k - d^i_k t_j

#include "poly.hpp"
#include "quasihopf.hpp"

#include <array>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace qhopf {

struct PresetParams {
  std::string name = "classical";
  int n = 0;                          // 0: preset default
  int order = 3;
  std::string base = "abelian";       // classical only: abelian | rflux
  std::vector<std::vector<mpq_class>> theta;       // moyal, d x d
  std::map<std::array<int, 3>, mpq_class> r;       // rflux, 0-based indices, all entries
};

struct Preset {
  std::string name;
  PresetParams params;
  LiePtr lie;
  RepPtr rep;
  QuasiHopfData base;     // U(g), primitive coproduct
  TensorElement twist;    // F
  QuasiHopfData twisted;  // H_F
};

class PresetError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

namespace detail {

inline DerivationRep::ScalarPoly scalar_monomial(int dim, int mu, const Gauss& c) {
  Exps e(dim, 0);
  if (mu >= 0) e[mu] = 1;
  return {{e, c}};
}

inline std::shared_ptr<LiePresentation> abelian_lie(int d) {
  std::vector<std::string> names;
  for (int i = 1; i <= d; ++i) names.push_back("t" + std::to_string(i));
  return std::make_shared<LiePresentation>(names);
}

inline std::shared_ptr<DerivationRep> partials_rep(int d) {
  std::vector<std::string> coords;
  std::vector<DerivationRep::VectorField> fields;
  for (int i = 0; i < d; ++i) {
    coords.push_back("x" + std::to_string(i + 1));
    fields.push_back({{i, scalar_monomial(d, -1, 1)}});
  }
  return std::make_shared<DerivationRep>(coords, fields);
}

// generator layout: t_1..t_n, then m_ij (i<j, lexicographic), then tt^1..tt^n
struct RfluxLayout {
  int n;
  int t(int i) const { return i; }
  int m(int i, int j) const {
    int idx = 0;
    for (int a = 0; a < n; ++a)
      for (int b = a + 1; b < n; ++b, ++idx)
        if (a == i && b == j) return n + idx;
    throw std::logic_error("bad m index");
  }
  int tt(int i) const { return n + n * (n - 1) / 2 + i; }
  int size() const { return 2 * n + n * (n - 1) / 2; }
};

inline std::shared_ptr<LiePresentation> rflux_lie(int n) {
  RfluxLayout L{n};
  std::vector<std::string> names(L.size());
  for (int i = 0; i < n; ++i) {
    names[L.t(i)] = "t" + std::to_string(i + 1);
    names[L.tt(i)] = "tt" + std::to_string(i + 1);
    for (int j = i + 1; j < n; ++j) names[L.m(i, j)] = "m" + std::to_string(i + 1) + std::to_string(j + 1);
  }
  auto lie = std::make_shared<LiePresentation>(names);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = j + 1; k < n; ++k) {
        std::vector<std::pair<int, Gauss>> v;
        if (i == j) v.emplace_back(L.t(k), Gauss(1));
        if (i == k) v.emplace_back(L.t(j), Gauss(-1));
        if (!v.empty()) lie->set_bracket(L.tt(i), L.m(j, k), v);
      }
  return lie;
}

// phase space (x^i, p_i): t_i -> d/dx^i, tt^i -> d/dp_i, m_ij -> p_i d/dx^j - p_j d/dx^i
inline std::shared_ptr<DerivationRep> rflux_rep(int n) {
  RfluxLayout L{n};
  const int d = 2 * n;
  std::vector<std::string> coords;
  for (int i = 1; i <= n; ++i) coords.push_back("x" + std::to_string(i));
  for (int i = 1; i <= n; ++i) coords.push_back("p" + std::to_string(i));
  std::vector<DerivationRep::VectorField> fields(L.size());
  for (int i = 0; i < n; ++i) {
    fields[L.t(i)] = {{i, scalar_monomial(d, -1, 1)}};
    fields[L.tt(i)] = {{n + i, scalar_monomial(d, -1, 1)}};
    for (int j = i + 1; j < n; ++j)
      fields[L.m(i, j)] = {{j, scalar_monomial(d, n + i, 1)}, {i, scalar_monomial(d, n + j, -1)}};
  }
  return std::make_shared<DerivationRep>(coords, fields);
}

inline TensorElement two_leg(int a, int b, const Gauss& c, int order, int hbar_power) {
  return TensorElement::term({mono({a}), mono({b})}, c, order, hbar_power);
}

}  // namespace detail

inline std::vector<std::vector<mpq_class>> default_theta(int d) {
  std::vector<std::vector<mpq_class>> th(d, std::vector<mpq_class>(d, 0));
  for (int i = 0; i + 1 < d; i += 2) {
    th[i][i + 1] = 1;
    th[i + 1][i] = -1;
  }
  return th;
}

// R^{123} = 1 with its antisymmetric images
inline std::map<std::array<int, 3>, mpq_class> default_r(int n) {
  std::map<std::array<int, 3>, mpq_class> r;
  if (n < 3) return r;
  r[{0, 1, 2}] = 1;
  r[{1, 2, 0}] = 1;
  r[{2, 0, 1}] = 1;
  r[{1, 0, 2}] = -1;
  r[{0, 2, 1}] = -1;
  r[{2, 1, 0}] = -1;
  return r;
}

inline mpq_class r_entry(const std::map<std::array<int, 3>, mpq_class>& r, int i, int j, int k) {
  auto it = r.find({i, j, k});
  return it == r.end() ? mpq_class(0) : it->second;
}

inline void validate_theta(const std::vector<std::vector<mpq_class>>& th, int d) {
  if (static_cast<int>(th.size()) != d) throw PresetError("theta must be a " + std::to_string(d) + "x" + std::to_string(d) + " matrix");
  for (const auto& row : th)
    if (static_cast<int>(row.size()) != d) throw PresetError("theta must be square");
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      if (th[i][j] != -th[j][i]) throw PresetError("theta is not skew-symmetric");
}

inline void validate_r(const std::map<std::array<int, 3>, mpq_class>& r, int n) {
  for (const auto& [ijk, v] : r) {
    for (int x : ijk)
      if (x < 0 || x >= n) throw PresetError("R index out of range");
    auto [i, j, k] = ijk;
    if (r_entry(r, j, i, k) != -v || r_entry(r, i, k, j) != -v || r_entry(r, k, j, i) != -v)
      throw PresetError("R is not totally antisymmetric");
  }
}

inline TensorElement moyal_twist(const LiePresentation& lie, const std::vector<std::vector<mpq_class>>& th, int order) {
  const int d = static_cast<int>(th.size());
  TensorElement x(2, order);
  // -(i hbar / 2) theta^{ij} t_i (x) t_j
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      if (sgn(th[i][j]) != 0) x += detail::two_leg(i, j, Gauss(0, -th[i][j] / 2), order, 1);
  return exp_truncated(x, lie);
}

inline TensorElement rflux_twist(const LiePresentation& lie, int n, const std::map<std::array<int, 3>, mpq_class>& r,
                                 int order) {
  detail::RfluxLayout L{n};
  TensorElement y(2, order);
  // (1/4) R^{ijk} (m_ij (x) t_k - t_i (x) m_jk), with m_ji = -m_ij
  auto m_term = [&](int i, int j, int other, bool m_first, const mpq_class& c) {
    if (i == j || sgn(c) == 0) return;
    mpq_class s = i < j ? c : -c;
    int mg = L.m(std::min(i, j), std::max(i, j));
    y += m_first ? detail::two_leg(mg, L.t(other), Gauss(s / 4), order, 0)
                 : detail::two_leg(L.t(other), mg, Gauss(-s / 4), order, 0);
  };
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        mpq_class c = r_entry(r, i, j, k);
        m_term(i, j, k, true, c);
        m_term(j, k, i, false, c);
      }
  for (int i = 0; i < n; ++i) {
    y += detail::two_leg(L.t(i), L.tt(i), Gauss(1), order, 0);
    y -= detail::two_leg(L.tt(i), L.t(i), Gauss(1), order, 0);
  }
  // times -(i hbar / 2)
  TensorElement x(2, order);
  for (const auto& [k, s] : y.terms()) x.add(k, Series(order, s[0] * Gauss(0, mpq_class(-1, 2)), 1));
  return exp_truncated(x, lie);
}

inline Preset make_preset(PresetParams p) {
  if (p.order < 1) throw PresetError("truncation order must be at least 1");
  Preset out;
  out.name = p.name;
  if (p.name == "classical") {
    if (p.base == "abelian") {
      if (p.n == 0) p.n = 2;
      if (p.n < 1) throw PresetError("dimension must be positive");
      out.lie = detail::abelian_lie(p.n);
      out.rep = detail::partials_rep(p.n);
    } else if (p.base == "rflux") {
      if (p.n == 0) p.n = 3;
      if (p.n < 2) throw PresetError("rflux needs n >= 2");
      out.lie = detail::rflux_lie(p.n);
      out.rep = detail::rflux_rep(p.n);
    } else {
      throw PresetError("unknown base algebra '" + p.base + "'");
    }
    out.base = classical_hopf(out.lie, p.order);
    out.twist = out.base.unit(2);
  } else if (p.name == "moyal") {
    if (p.n == 0) p.n = p.theta.empty() ? 2 : static_cast<int>(p.theta.size());
    if (p.n < 1) throw PresetError("dimension must be positive");
    if (p.theta.empty()) p.theta = default_theta(p.n);
    validate_theta(p.theta, p.n);
    out.lie = detail::abelian_lie(p.n);
    out.rep = detail::partials_rep(p.n);
    out.base = classical_hopf(out.lie, p.order);
    out.twist = moyal_twist(*out.lie, p.theta, p.order);
  } else if (p.name == "rflux") {
    if (p.n == 0) p.n = 3;
    if (p.n < 2) throw PresetError("rflux needs n >= 2");
    if (p.r.empty()) p.r = default_r(p.n);
    validate_r(p.r, p.n);
    out.lie = detail::rflux_lie(p.n);
    out.rep = detail::rflux_rep(p.n);
    out.base = classical_hopf(out.lie, p.order);
    out.twist = rflux_twist(*out.lie, p.n, p.r, p.order);
  } else {
    throw PresetError("unknown preset '" + p.name + "'");
  }
  out.twisted = apply_twist(out.base, out.twist);
  out.params = std::move(p);
  return out;
}

}  // namespace qhopf
