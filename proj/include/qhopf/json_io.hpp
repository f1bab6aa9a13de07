#pragma once

// JSON config and reports. Rationals travel as "p/q" strings (or JSON integers
// on input), Gaussian rationals with a nonzero imaginary part as {"re", "im"}.

#include "presets.hpp"
#include "report.hpp"

#include <json.hpp>

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace qhopf {

using json = nlohmann::ordered_json;

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Config {
  PresetParams preset;
  std::uint64_t seed = 42;
  int degree_bound = 2;
  int samples = 20;
};

inline json to_json(const Gauss& g) {
  if (sgn(g.im) == 0) return rational_string(g.re);
  return json{{"re", rational_string(g.re)}, {"im", rational_string(g.im)}};
}

inline mpq_class rational_from_json(const json& j, const std::string& where) {
  if (j.is_number_integer()) return mpq_class(j.get<long>());
  if (j.is_string()) {
    try {
      return parse_rational(j.get<std::string>());
    } catch (const std::invalid_argument& e) {
      throw ConfigError(where + ": " + e.what());
    }
  }
  throw ConfigError(where + ": expected an integer or a \"p/q\" string");
}

inline Gauss gauss_from_json(const json& j, const std::string& where) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items())
      if (k != "re" && k != "im") throw ConfigError(where + ": unexpected key '" + k + "'");
    mpq_class re = j.contains("re") ? rational_from_json(j["re"], where + ".re") : mpq_class(0);
    mpq_class im = j.contains("im") ? rational_from_json(j["im"], where + ".im") : mpq_class(0);
    return Gauss(re, im);
  }
  return Gauss(rational_from_json(j, where));
}

// the presets take real parameters
inline mpq_class real_from_json(const json& j, const std::string& where) {
  Gauss g = gauss_from_json(j, where);
  if (sgn(g.im) != 0) throw ConfigError(where + ": imaginary parameters are not supported");
  return g.re;
}

inline json series_json(const std::vector<Gauss>& s) {
  json a = json::array();
  for (const auto& g : s) a.push_back(to_json(g));
  return a;
}

namespace detail {

inline int int_field(const json& cfg, const char* key, int lo, int hi) {
  const json& v = cfg[key];
  if (!v.is_number_integer()) throw ConfigError(std::string(key) + ": expected an integer");
  long x = v.get<long>();
  if (x < lo || x > hi) throw ConfigError(std::string(key) + " out of range [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  return static_cast<int>(x);
}

// either [[i, j, k, value], ...] with 1-based indices, antisymmetric images implied,
// or the full n x n x n array
inline std::map<std::array<int, 3>, mpq_class> r_from_json(const json& j, int& n) {
  if (!j.is_array()) throw ConfigError("R: expected an array");
  std::map<std::array<int, 3>, mpq_class> r;
  bool cube = !j.empty() && j[0].is_array() && !j[0].empty() && j[0][0].is_array();
  if (cube) {
    int size = static_cast<int>(j.size());
    if (n == 0) n = size;
    if (size != n) throw ConfigError("R: expected " + std::to_string(n) + " slices");
    for (int a = 0; a < n; ++a) {
      if (!j[a].is_array() || static_cast<int>(j[a].size()) != n) throw ConfigError("R: ragged array");
      for (int b = 0; b < n; ++b) {
        if (!j[a][b].is_array() || static_cast<int>(j[a][b].size()) != n) throw ConfigError("R: ragged array");
        for (int c = 0; c < n; ++c) {
          mpq_class v = real_from_json(j[a][b][c], "R");
          if (sgn(v) != 0) r[{a, b, c}] = v;
        }
      }
    }
    return r;
  }
  std::vector<std::pair<std::array<int, 3>, mpq_class>> entries;
  int top = 0;
  for (const auto& e : j) {
    if (!e.is_array() || e.size() != 4) throw ConfigError("R: entries are [i, j, k, value]");
    std::array<int, 3> ijk{};
    for (int t = 0; t < 3; ++t) {
      if (!e[t].is_number_integer() || e[t].get<long>() < 1 || e[t].get<long>() > 64)
        throw ConfigError("R: indices are integers from 1");
      ijk[t] = static_cast<int>(e[t].get<long>()) - 1;
      top = std::max(top, ijk[t] + 1);
    }
    entries.emplace_back(ijk, real_from_json(e[3], "R"));
  }
  if (n == 0) n = std::max(top, 3);
  for (const auto& [ijk, v] : entries) {
    auto [a, b, c] = ijk;
    if (a == b || b == c || a == c) {
      if (sgn(v) != 0) throw ConfigError("R: repeated index with nonzero value");
      continue;
    }
    const std::array<std::array<int, 3>, 6> perms{{{a, b, c}, {b, c, a}, {c, a, b}, {b, a, c}, {a, c, b}, {c, b, a}}};
    for (int p = 0; p < 6; ++p) {
      mpq_class s = p < 3 ? v : mpq_class(-v);
      auto [it, fresh] = r.try_emplace(perms[p], s);
      if (!fresh && it->second != s) throw ConfigError("R: inconsistent entries");
    }
  }
  return r;
}

}  // namespace detail

inline Config config_from_json(const json& cfg) {
  if (!cfg.is_object()) throw ConfigError("config must be a JSON object");
  static const std::vector<std::string> known{"preset", "n", "order", "seed", "degree_bound", "samples",
                                              "theta", "R", "base"};
  for (const auto& [k, v] : cfg.items())
    if (std::find(known.begin(), known.end(), k) == known.end()) throw ConfigError("unknown config key '" + k + "'");
  Config c;
  if (cfg.contains("preset")) {
    if (!cfg["preset"].is_string()) throw ConfigError("preset: expected a string");
    c.preset.name = cfg["preset"].get<std::string>();
  }
  if (cfg.contains("base")) {
    if (!cfg["base"].is_string()) throw ConfigError("base: expected a string");
    c.preset.base = cfg["base"].get<std::string>();
  }
  if (cfg.contains("n")) c.preset.n = detail::int_field(cfg, "n", 1, 16);
  if (cfg.contains("order")) c.preset.order = detail::int_field(cfg, "order", 1, 12);
  if (cfg.contains("degree_bound")) c.degree_bound = detail::int_field(cfg, "degree_bound", 0, 8);
  if (cfg.contains("samples")) c.samples = detail::int_field(cfg, "samples", 1, 100000);
  if (cfg.contains("seed")) {
    if (!cfg["seed"].is_number_unsigned()) throw ConfigError("seed: expected a non-negative integer");
    c.seed = cfg["seed"].get<std::uint64_t>();
  }
  if (cfg.contains("theta")) {
    const json& t = cfg["theta"];
    if (!t.is_array()) throw ConfigError("theta: expected a matrix");
    for (const auto& row : t) {
      if (!row.is_array()) throw ConfigError("theta: expected a matrix");
      std::vector<mpq_class> r;
      for (const auto& v : row) r.push_back(real_from_json(v, "theta"));
      c.preset.theta.push_back(std::move(r));
    }
  }
  if (cfg.contains("R")) c.preset.r = detail::r_from_json(cfg["R"], c.preset.n);
  return c;
}

inline json report_json(const Report& r, bool timing) {
  json j;
  j["name"] = r.name;
  j["anchor"] = r.anchor;
  j["status"] = r.passed() ? "pass" : "fail";
  if (r.residual) {
    j["residual"] = {{"identity", r.residual->identity},
                     {"term", r.residual->term},
                     {"series", series_json(r.residual->series)}};
  }
  for (const auto& [k, v] : r.info) j["info"][k] = v;
  // wall time breaks byte-identical output, so it is opt-in
  j["ms"] = timing ? static_cast<std::int64_t>(r.ms + 0.5) : 0;
  return j;
}

inline bool all_passed(const std::vector<Report>& reports) {
  for (const auto& r : reports)
    if (!r.passed()) return false;
  return true;
}

inline json verification_json(const std::vector<Report>& reports, const Config& c, bool timing) {
  json j;
  j["overall"] = all_passed(reports) ? "pass" : "fail";
  j["preset"] = c.preset.name;
  j["order"] = c.preset.order;
  j["seed"] = c.seed;
  j["checks"] = json::array();
  for (const auto& r : reports) j["checks"].push_back(report_json(r, timing));
  return j;
}

}  // namespace qhopf
