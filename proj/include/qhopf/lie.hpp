#pragma once

// Lie presentations and PBW normal ordering in U(g).

#include "scalar.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace qhopf {

// A PBW monomial: generator ids in nondecreasing order, one char per factor.
// The empty string is the unit.
using Monomial = std::string;

inline Monomial mono(std::initializer_list<int> ids) {
  Monomial m;
  for (int g : ids) m.push_back(static_cast<char>(g));
  return m;
}

// sparse linear combination of PBW monomials with exact scalar coefficients
using Combination = std::vector<std::pair<Monomial, Gauss>>;

class LiePresentation {
 public:
  LiePresentation() = default;
  explicit LiePresentation(std::vector<std::string> names) : names_(std::move(names)) {
    if (names_.size() > 120) throw std::invalid_argument("too many generators");
  }

  int size() const { return static_cast<int>(names_.size()); }
  const std::string& name(int g) const { return names_.at(g); }
  const std::vector<std::string>& names() const { return names_; }
  int index(const std::string& n) const {
    auto it = std::find(names_.begin(), names_.end(), n);
    if (it == names_.end()) throw std::invalid_argument("unknown generator '" + n + "'");
    return static_cast<int>(it - names_.begin());
  }

  // [g_i, g_j] = sum c_k g_k, for i < j; stores the antisymmetric partner implicitly
  void set_bracket(int i, int j, std::vector<std::pair<int, Gauss>> value) {
    if (i == j) throw std::invalid_argument("bracket of a generator with itself is zero");
    if (i > j) {
      std::swap(i, j);
      for (auto& [g, c] : value) c = -c;
    }
    std::erase_if(value, [](const auto& t) { return t.second.is_zero(); });
    if (value.empty())
      brackets_.erase({i, j});
    else
      brackets_[{i, j}] = std::move(value);
    cache_.clear();
  }

  std::vector<std::pair<int, Gauss>> bracket(int i, int j) const {
    if (i == j) return {};
    bool flip = i > j;
    auto it = brackets_.find({std::min(i, j), std::max(i, j)});
    if (it == brackets_.end()) return {};
    auto v = it->second;
    if (flip)
      for (auto& [g, c] : v) c = -c;
    return v;
  }

  bool is_abelian() const { return brackets_.empty(); }

  // every generator in [g_i, g_j] strictly precedes min(i, j)
  bool is_admissible() const {
    for (const auto& [ij, v] : brackets_)
      for (const auto& [g, c] : v)
        if (g >= ij.first) return false;
    return true;
  }

  // Jacobi identity on all triples, expanded in g
  bool satisfies_jacobi() const {
    const int n = size();
    auto br = [&](const std::map<int, Gauss>& x, int k) {
      std::map<int, Gauss> out;
      for (const auto& [g, c] : x)
        for (const auto& [h, d] : bracket(g, k)) out[h] += c * d;
      return out;
    };
    for (int a = 0; a < n; ++a)
      for (int b = a + 1; b < n; ++b)
        for (int c = b + 1; c < n; ++c) {
          std::map<int, Gauss> total;
          auto add = [&](int x, int y, int z) {
            std::map<int, Gauss> yz;
            for (const auto& [g, k] : bracket(y, z)) yz[g] += k;
            // [x, [y, z]] = -[[y, z], x]
            for (const auto& [g, k] : br(yz, x)) total[g] -= k;
          };
          add(a, b, c);
          add(b, c, a);
          add(c, a, b);
          for (const auto& [g, k] : total)
            if (!k.is_zero()) return false;
        }
    return true;
  }

  // Rewrites a word into PBW form. Out-of-order pairs g_j g_i (j > i) become
  // g_i g_j + [g_j, g_i]; admissibility makes this terminate.
  const Combination& normal_order(const std::string& word) const {
    if (auto it = cache_.find(word); it != cache_.end()) return it->second;
    Combination out;
    std::size_t k = 0;
    while (k + 1 < word.size() && word[k] <= word[k + 1]) ++k;
    if (k + 1 >= word.size()) {
      out.emplace_back(word, Gauss(1));
    } else if (is_abelian()) {
      std::string s = word;
      std::sort(s.begin(), s.end());
      out.emplace_back(std::move(s), Gauss(1));
    } else {
      std::map<Monomial, Gauss> acc;
      std::string swapped = word;
      std::swap(swapped[k], swapped[k + 1]);
      for (const auto& [m, c] : normal_order(swapped)) acc[m] += c;
      for (const auto& [g, c] : bracket(word[k], word[k + 1])) {
        std::string w = word.substr(0, k) + static_cast<char>(g) + word.substr(k + 2);
        for (const auto& [m, d] : normal_order(w)) acc[m] += c * d;
      }
      for (auto& [m, c] : acc)
        if (!c.is_zero()) out.emplace_back(m, std::move(c));
    }
    return cache_.emplace(word, std::move(out)).first->second;
  }

  std::string monomial_string(const Monomial& m) const {
    if (m.empty()) return "1";
    std::string s;
    for (std::size_t k = 0; k < m.size();) {
      std::size_t e = k;
      while (e < m.size() && m[e] == m[k]) ++e;
      if (!s.empty()) s += "*";
      s += names_.at(static_cast<unsigned char>(m[k]));
      if (e - k > 1) s += "^" + std::to_string(e - k);
      k = e;
    }
    return s;
  }

  // inverse of monomial_string
  Monomial parse_monomial(const std::string& text) const {
    if (text == "1") return {};
    std::string word;
    std::size_t pos = 0;
    while (pos <= text.size()) {
      std::size_t star = text.find('*', pos);
      std::string factor = text.substr(pos, star == std::string::npos ? std::string::npos : star - pos);
      int power = 1;
      if (auto caret = factor.find('^'); caret != std::string::npos) {
        power = std::stoi(factor.substr(caret + 1));
        factor.resize(caret);
      }
      word.append(static_cast<std::size_t>(power), static_cast<char>(index(factor)));
      if (star == std::string::npos) break;
      pos = star + 1;
    }
    const auto& c = normal_order(word);
    if (c.size() != 1 || c[0].first != word) throw std::invalid_argument("not a PBW monomial: " + text);
    return word;
  }

 private:
  std::vector<std::string> names_;
  std::map<std::pair<int, int>, std::vector<std::pair<int, Gauss>>> brackets_;
  // memo of normal_order; not synchronized
  mutable std::unordered_map<std::string, Combination> cache_;
};

using LiePtr = std::shared_ptr<const LiePresentation>;

}  // namespace qhopf
