#pragma once

// Command dispatch for the qhopf tool. run() never calls exit(); it returns
// 0 when every check passed, 1 when one failed and 2 on usage or config errors.

#include "algebra.hpp"
#include "json_io.hpp"
#include "parse.hpp"
#include "random.hpp"
#include "suites.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <ostream>
#include <string>
#include <vector>

namespace qhopf::cli {

inline const std::vector<std::string>& verify_check_names() {
  static const std::vector<std::string> names{"quasibialgebra",  "quasiantipode",       "quasitriangular",
                                              "twist_inverse",   "rep_bracket",         "module_algebra",
                                              "weak_associativity", "braided_commutativity", "hom"};
  return names;
}

namespace detail {

// independent stream per check, so --checks selections do not shift samples
inline std::uint64_t check_seed(std::uint64_t seed, const std::string& name) {
  std::uint64_t h = 1469598103934665603ull ^ seed;
  for (unsigned char c : name) h = (h ^ c) * 1099511628211ull;
  return h;
}

inline json element_json(const TensorElement& x, const LiePresentation& lie) {
  json terms = json::array();
  for (const auto& [k, s] : x.terms()) {
    json legs = json::array();
    for (const auto& m : k) legs.push_back(lie.monomial_string(m));
    terms.push_back({{"legs", legs}, {"series", series_json(s.coeffs())}});
  }
  return {{"text", to_string(x, lie)}, {"terms", terms}};
}

struct Common {
  std::string config_file;
  std::string preset;
  int order = 0;
  int n = 0;
  std::string base;
  long long seed = -1;
  bool timing = false;
};

inline void add_common(CLI::App* sc, Common& c) {
  sc->add_option("--config", c.config_file, "JSON config file");
  sc->add_option("--preset", c.preset, "classical | moyal | rflux");
  sc->add_option("--order", c.order, "hbar truncation order N")->check(CLI::Range(1, 12));
  sc->add_option("--n", c.n, "dimension parameter")->check(CLI::Range(1, 16));
  sc->add_option("--base", c.base, "classical base algebra: abelian | rflux");
  sc->add_option("--seed", c.seed, "sample seed")->check(CLI::NonNegativeNumber);
  sc->add_flag("--timing", c.timing, "report wall time per check (output is then not reproducible)");
}

inline Config load_config(const Common& c) {
  Config cfg;
  if (!c.config_file.empty()) {
    std::ifstream in(c.config_file);
    if (!in) throw ConfigError("cannot read config file '" + c.config_file + "'");
    json j;
    try {
      j = json::parse(in);
    } catch (const json::parse_error& e) {
      throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    cfg = config_from_json(j);
  }
  if (!c.preset.empty()) cfg.preset.name = c.preset;
  if (c.order) cfg.preset.order = c.order;
  if (c.n) cfg.preset.n = c.n;
  if (!c.base.empty()) cfg.preset.base = c.base;
  if (c.seed >= 0) cfg.seed = static_cast<std::uint64_t>(c.seed);
  return cfg;
}

inline void emit(std::ostream& out, const json& j) { out << j.dump(2) << "\n"; }

inline std::vector<Report> verify_reports(const Preset& p, const Config& cfg, const std::vector<std::string>& checks) {
  std::vector<Report> out;
  const int N = p.params.order;
  auto want = [&](const std::string& name) { return std::find(checks.begin(), checks.end(), name) != checks.end(); };
  auto polys = [&](const std::string& name, int count) {
    Sampler S(check_seed(cfg.seed, name));
    std::vector<PolyFunction> v;
    for (int k = 0; k < count; ++k) v.push_back(S.poly(p.rep->dim(), N, cfg.degree_bound));
    return v;
  };
  const AlgebraObject A = AlgebraObject::twisted(p);
  if (want("quasibialgebra")) out.push_back(check_quasibialgebra(p.twisted));
  if (want("quasiantipode")) out.push_back(check_quasiantipode(p.twisted));
  if (want("quasitriangular")) out.push_back(check_quasitriangular(p.twisted));
  if (want("twist_inverse")) out.push_back(check_twist_inverse(p.base, p.twist));
  if (want("rep_bracket")) out.push_back(check_rep_bracket(*p.rep, *p.lie, std::max(cfg.degree_bound, 1)));
  if (want("module_algebra")) {
    auto v = polys("module_algebra", 6);
    out.push_back(check_module_algebra(A, sample_monomials(*p.lie, 2), {{v[0], v[1]}, {v[2], v[3]}, {v[4], v[5]}}));
  }
  if (want("weak_associativity")) {
    auto v = polys("weak_associativity", 15);
    std::vector<std::array<PolyFunction, 3>> triples;
    for (int k = 0; k < 5; ++k) triples.push_back({v[3 * k], v[3 * k + 1], v[3 * k + 2]});
    out.push_back(check_weak_associativity(A, triples));
  }
  if (want("braided_commutativity")) {
    auto v = polys("braided_commutativity", 10);
    std::vector<std::pair<PolyFunction, PolyFunction>> pairs;
    for (int k = 0; k < 5; ++k) pairs.emplace_back(v[2 * k], v[2 * k + 1]);
    out.push_back(check_braided_commutativity(A, pairs));
  }
  if (want("hom")) {
    HomSuite suite(p, {cfg.samples, cfg.seed, {1, 2}});
    for (auto& r : suite.run()) out.push_back(std::move(r));
  }
  return out;
}

struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

}  // namespace detail

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"exact checks for quasi-Hopf twists, star products and internal homs", "qhopf"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "qhopf 0.1.0");

  detail::Common common;
  std::vector<std::string> checks, exprs, show;
  std::string suite = "all";
  int samples = 0, rank = 0;

  auto* verify = app.add_subcommand("verify", "run axiom, star product and internal hom checks");
  detail::add_common(verify, common);
  verify->add_option("--checks", checks, "comma separated subset of: " + [] {
    std::string s;
    for (const auto& n : verify_check_names()) s += (s.empty() ? "" : ",") + n;
    return s;
  }())->delimiter(',');
  verify->add_option("--samples", samples, "samples per internal hom identity")->check(CLI::Range(1, 100000));

  auto* twist = app.add_subcommand("twist", "print the twisted structure data");
  detail::add_common(twist, common);
  twist->add_option("--show", show, "coproduct, associator, rmatrix, alpha, beta (default all)")
      ->delimiter(',')
      ->check(CLI::IsMember({"coproduct", "associator", "rmatrix", "alpha", "beta"}));

  auto* star = app.add_subcommand("star", "star product of two expressions");
  detail::add_common(star, common);
  star->add_option("--expr", exprs, "polynomial expression")->expected(2)->required();

  auto* assoc = app.add_subcommand("assoc", "weak associativity residual and plain associator defect");
  detail::add_common(assoc, common);
  assoc->add_option("--expr", exprs, "polynomial expression")->expected(3)->required();

  auto* hom = app.add_subcommand("hom", "internal hom property suite");
  detail::add_common(hom, common);
  hom->add_option("--suite", suite, "identity name or 'all'");
  hom->add_option("--rank", rank, "only A^rank")->check(CLI::Range(1, 2));
  hom->add_option("--samples", samples, "samples per identity")->check(CLI::Range(1, 100000));

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << app.version() << "\n";
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    Config cfg = detail::load_config(common);
    if (samples) cfg.samples = samples;
    const Preset p = make_preset(cfg.preset);
    cfg.preset = p.params;
    const bool timing = common.timing;

    if (verify->parsed()) {
      if (checks.empty()) checks = verify_check_names();
      for (const auto& c : checks)
        if (std::find(verify_check_names().begin(), verify_check_names().end(), c) == verify_check_names().end())
          throw detail::UsageError("unknown check '" + c + "'");
      auto reports = detail::verify_reports(p, cfg, checks);
      json j = verification_json(reports, cfg, timing);
      detail::emit(out, j);
      return all_passed(reports) ? 0 : 1;
    }

    if (twist->parsed()) {
      if (show.empty()) show = {"coproduct", "associator", "rmatrix", "alpha", "beta"};
      const auto& h = p.twisted;
      json data;
      for (const auto& s : show) {
        if (s == "coproduct") {
          json d;
          for (int g = 0; g < p.lie->size(); ++g) d[p.lie->name(g)] = detail::element_json(h.delta_gen[g], *p.lie);
          data[s] = d;
        } else if (s == "associator") {
          data[s] = detail::element_json(h.phi, *p.lie);
        } else if (s == "rmatrix") {
          data[s] = detail::element_json(*h.r_matrix, *p.lie);
        } else if (s == "alpha") {
          data[s] = detail::element_json(h.alpha, *p.lie);
        } else {
          data[s] = detail::element_json(h.beta, *p.lie);
        }
      }
      json j{{"overall", "pass"}, {"preset", p.name}, {"order", p.params.order}, {"twisted", data},
             {"checks", json::array()}};
      detail::emit(out, j);
      return 0;
    }

    if (star->parsed() || assoc->parsed()) {
      const auto& coords = p.rep->coordinates();
      std::vector<PolyFunction> v;
      for (const auto& e : exprs) v.push_back(parse_poly_expr(e, coords, p.params.order));
      const AlgebraObject A = AlgebraObject::twisted(p);
      json j{{"overall", "pass"}, {"preset", p.name}, {"order", p.params.order}};
      if (star->parsed()) {
        j["result"] = print_poly(A.star(v[0], v[1]), coords);
        j["checks"] = json::array();
        detail::emit(out, j);
        return 0;
      }
      ReportBuilder rb("weak_associativity", "sec 3.1 weak associativity of A");
      AssocDefect d = weak_assoc_defect(A, v[0], v[1], v[2]);
      if (auto r = difference("(ab)c = (phi1 a)((phi2 b)(phi3 c))", d.weak, PolyFunction(A.dim(), A.order()), coords))
        rb.fail(std::move(*r));
      Report r = rb.done();
      j["overall"] = r.passed() ? "pass" : "fail";
      j["weak_residual"] = print_poly(d.weak, coords);
      j["plain_defect"] = print_poly(d.plain, coords);
      j["checks"] = json::array({report_json(r, timing)});
      detail::emit(out, j);
      return r.passed() ? 0 : 1;
    }

    // hom
    HomSuite hs(p, {cfg.samples, cfg.seed, rank ? std::vector<int>{rank} : std::vector<int>{1, 2}});
    std::vector<Report> reports;
    if (suite == "all") {
      reports = hs.run();
    } else {
      for (int m : rank ? std::vector<int>{rank} : std::vector<int>{1, 2}) reports.push_back(hs.run_one(suite, m));
    }
    detail::emit(out, verification_json(reports, cfg, timing));
    return all_passed(reports) ? 0 : 1;
  } catch (const std::invalid_argument& e) {
    // PresetError, ConfigError, ParseError and unknown names all land here
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace qhopf::cli
