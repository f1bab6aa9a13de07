#pragma once

// Seeded sample generators for property checks. Raw mt19937_64 output reduced
// modulo small ranges, so samples are identical on every platform.

#include "bimod.hpp"

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

namespace qhopf {

class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : rng_(seed) {}

  int below(int k) { return static_cast<int>(rng_() % static_cast<std::uint64_t>(k)); }
  int between(int lo, int hi) { return lo + below(hi - lo + 1); }

  // nonzero with small numerator and denominator, occasionally imaginary
  Gauss coefficient() {
    static const int nums[] = {-3, -2, -1, 1, 2, 3};
    mpq_class q(nums[below(6)], between(1, 3));
    q.canonicalize();
    switch (below(4)) {
      case 0: return Gauss(0, q);
      case 1: return Gauss(q, mpq_class(between(-1, 1)));
      default: return Gauss(q);
    }
  }

  // constant in hbar with probability 3/4, otherwise with one more hbar^1 term
  Series series(int order) {
    Series s(order, coefficient());
    if (order >= 1 && below(4) == 0) s += Series(order, coefficient(), 1);
    return s;
  }

  PolyFunction poly(int dim, int order, int max_degree = 2, int max_terms = 3) {
    PolyFunction p(dim, order);
    int terms = between(1, max_terms);
    for (int t = 0; t < terms; ++t) {
      Exps e(dim, 0);
      int deg = below(max_degree + 1);
      for (int k = 0; k < deg; ++k) ++e[below(dim)];
      p.add(e, series(order));
    }
    if (p.is_zero()) p = PolyFunction::one(dim, order);
    return p;
  }

  // nondecreasing word of length 0..max_len
  Monomial word(const LiePresentation& lie, int max_len) {
    std::vector<int> g(below(max_len + 1));
    for (auto& x : g) x = below(lie.size());
    std::sort(g.begin(), g.end());
    Monomial m;
    for (int x : g) m.push_back(static_cast<char>(x));
    return m;
  }

  // sum of up to max_terms a (h |> .) with |h| <= max_word, deg a <= 2
  DiffOp entry(const HomCalculus& c, int max_terms = 3, int max_word = 2) {
    DiffOp d(c.dim(), c.order());
    int terms = between(1, max_terms);
    for (int t = 0; t < terms; ++t) d += compose(c.mult(poly(c.dim(), c.order())), c.D(word(c.lie(), max_word)));
    return d;
  }
  HomOperator op(const HomCalculus& c, int rows, int cols, int max_terms = 3, int max_word = 2) {
    HomOperator L = c.zero(rows, cols);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j)
        if (below(4) != 0) L.at(i, j) = entry(c, max_terms, max_word);
    if (L.is_zero()) L.at(0, 0) = entry(c, max_terms, max_word);
    return L;
  }
  // matrix of multiplication operators
  HomOperator mult_matrix(const HomCalculus& c, int rows, int cols) {
    HomOperator L = c.zero(rows, cols);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j)
        if (below(4) != 0) L.at(i, j) = c.mult(poly(c.dim(), c.order()));
    if (L.is_zero()) L.at(0, 0) = c.mult(poly(c.dim(), c.order()));
    return L;
  }
  // constant matrices commute with every D_h
  HomOperator equivariant(const HomCalculus& c, int rows, int cols) {
    HomOperator L = c.zero(rows, cols);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j)
        L.at(i, j) = c.mult(PolyFunction::constant(c.dim(), series(c.order())));
    return L;
  }
  FreeVec vec(const HomCalculus& c, int m) {
    FreeVec v;
    for (int i = 0; i < m; ++i) v.push_back(poly(c.dim(), c.order()));
    return v;
  }

 private:
  std::mt19937_64 rng_;
};

}  // namespace qhopf
