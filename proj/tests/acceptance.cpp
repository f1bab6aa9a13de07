// Acceptance gate: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include "qhopf/cli.hpp"

#include <chrono>
#include <functional>
#include <iostream>
#include <sstream>

using namespace qhopf;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

Preset preset(const std::string& name, int order = 3) {
  PresetParams p;
  p.name = name;
  p.order = order;
  return make_preset(p);
}

// failures are collected as text; an empty list is a pass
struct Gate {
  std::vector<std::string> problems;
  void expect(bool ok, const std::string& what) {
    if (!ok) problems.push_back(what);
  }
  void report(const Report& r) {
    if (!r.passed()) problems.push_back(r.name + ": " + r.residual->identity + " at " + r.residual->term);
  }
};

std::pair<int, std::string> cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = cli::run(args, out, err);
  return {code, out.str() + err.str()};
}

TensorElement two(int a, int b, const Gauss& c, int order, int hp) {
  return TensorElement::term({mono({a}), mono({b})}, c, order, hp);
}
TensorElement primitive(int g, int order) {
  return TensorElement::term({mono({g}), {}}, Gauss(1), order) + TensorElement::term({{}, mono({g})}, Gauss(1), order);
}

std::vector<PolyFunction> monomials(int dim, int vars, int order, int max_degree) {
  std::vector<Exps> all{Exps(dim, 0)};
  for (std::size_t k = 0; k < all.size(); ++k) {
    int deg = 0, last = 0;
    for (int mu = 0; mu < dim; ++mu) {
      deg += all[k][mu];
      if (all[k][mu]) last = mu;
    }
    if (deg == max_degree) continue;
    for (int mu = last; mu < vars; ++mu) {
      Exps f = all[k];
      ++f[mu];
      all.push_back(f);
    }
  }
  std::vector<PolyFunction> out;
  for (const auto& e : all) out.push_back(PolyFunction::monomial(e, Series::one(order)));
  return out;
}

TensorElement drop_first_nonunit(const TensorElement& x) {
  TensorElement r(x.legs(), x.order());
  bool dropped = false;
  for (const auto& [k, s] : x.terms()) {
    if (!dropped && !(k == TensorKey(x.legs()))) {
      dropped = true;
      continue;
    }
    r.add(k, s);
  }
  return r;
}

bool nonzero_residual(const Report& r) {
  if (r.passed()) return false;
  for (const auto& g : r.residual->series)
    if (!g.is_zero()) return true;
  return false;
}

// 1. rflux twisted coproduct and associator against their closed forms, read from the CLI
void rflux_regression(Gate& g) {
  auto [code, out] = cli({"twist", "--preset", "rflux", "--order", "3"});
  g.expect(code == 0, "twist exit code " + std::to_string(code));
  if (code) return;
  json doc = json::parse(out);
  const int N = 3;
  auto lie = detail::rflux_lie(3);
  auto R = default_r(3);
  detail::RfluxLayout L{3};
  std::map<std::string, TensorElement> want;
  for (int i = 0; i < 3; ++i) {
    want[lie->name(L.t(i))] = primitive(L.t(i), N);
    TensorElement d = primitive(L.tt(i), N);
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        if (sgn(r_entry(R, i, j, k))) d += two(L.t(j), L.t(k), Gauss(0, r_entry(R, i, j, k) / 2), N, 1);
    want[lie->name(L.tt(i))] = d;
    for (int j = i + 1; j < 3; ++j)
      want[lie->name(L.m(i, j))] =
          primitive(L.m(i, j), N) + two(L.t(i), L.t(j), Gauss(0, -1), N, 1) + two(L.t(j), L.t(i), Gauss(0, 1), N, 1);
  }
  for (const auto& [name, d] : want)
    g.expect(doc["twisted"]["coproduct"][name]["text"] == to_string(d, *lie), "coproduct of " + name);
  TensorElement phi = TensorElement::unit(3, N);
  for (const auto& [ijk, v] : R) phi.add({mono({ijk[0]}), mono({ijk[1]}), mono({ijk[2]})}, Series(N, Gauss(v / 2), 2));
  g.expect(doc["twisted"]["associator"]["text"] == to_string(phi, *lie), "associator");
}

// 2. Moyal: Delta_F = Delta, phi_F = 1, R_F = F^-2 by the binomial expansion, triangular
void moyal_regression(Gate& g) {
  const int N = 3;
  Preset p = preset("moyal", N);
  const auto& h = p.twisted;
  for (int k = 0; k < 2; ++k) g.expect(h.delta_gen[k] == primitive(k, N), "Delta_F(t" + std::to_string(k + 1) + ")");
  g.expect(h.phi == TensorElement::unit(3, N), "phi_F = 1");
  TensorElement want(2, N);
  mpq_class fact = 1;
  Gauss ik = 1;
  for (int k = 0; k <= N; ++k) {
    if (k) {
      fact *= k;
      ik *= Gauss::I();
    }
    for (int j = 0; j <= k; ++j) {
      mpz_class b;
      mpz_bin_uiui(b.get_mpz_t(), k, j);
      mpq_class c = mpq_class(b) / fact;
      if ((k - j) % 2) c = -c;
      want.add({Monomial(j, char(0)) + Monomial(k - j, char(1)), Monomial(k - j, char(0)) + Monomial(j, char(1))},
               Series(N, ik * Gauss(c), k));
    }
  }
  g.expect(*h.r_matrix == want, "R_F = F^-2");
  TensorElement f2 = invert_element(p.base.mul(p.twist, p.twist), *p.lie);
  g.expect(*h.r_matrix == f2, "R_F = (F F)^-1");
  g.expect(is_triangular(h), "triangular");
}

// 3. axiom suites through the CLI, plus corruption oracles
void axiom_suites(Gate& g) {
  for (std::string name : {"classical", "moyal", "rflux"}) {
    auto [code, out] = cli({"verify", "--preset", name, "--order", "3", "--timing", "--checks",
                            "quasibialgebra,quasiantipode,quasitriangular"});
    g.expect(code == 0, name + ": verify exit code " + std::to_string(code));
    if (code == 2) continue;
    for (const auto& c : json::parse(out)["checks"]) {
      g.expect(c["status"] == "pass", name + ": " + c["name"].get<std::string>());
      g.expect(c["ms"].get<double>() < 60000, name + ": " + c["name"].get<std::string>() + " over 60 s");
    }
  }
  Preset p = preset("rflux");
  detail::RfluxLayout L{3};
  // phi_F - 1 is a cocycle for any coefficients, so the deletion shows up in the hexagons
  QuasiHopfData a = p.twisted;
  a.phi = drop_first_nonunit(a.phi);
  a.invalidate();
  g.expect(nonzero_residual(check_quasitriangular(a)), "deleted associator term not caught");
  QuasiHopfData b = p.twisted;
  b.delta_gen[L.tt(0)] = drop_first_nonunit(b.delta_gen[L.tt(0)]);
  b.invalidate();
  g.expect(nonzero_residual(check_quasibialgebra(b)), "deleted coproduct term not caught");
  QuasiHopfData c = p.twisted;
  c.r_matrix = drop_first_nonunit(*c.r_matrix);
  c.invalidate();
  g.expect(nonzero_residual(check_quasitriangular(c)), "deleted R-matrix term not caught");
  QuasiHopfData d = p.twisted;
  d.alpha = TensorElement::unit(1, 3) + TensorElement::term({mono({L.t(0)})}, Gauss(1), 3, 1);
  d.invalidate();
  g.expect(nonzero_residual(check_quasiantipode(d)), "alpha = 1 + hbar t1 not caught");
}

// 4. (H_F)_{F^-1} = H and (H_F)_G = H_{GF}
void functoriality(Gate& g) {
  for (std::string name : {"moyal", "rflux"}) {
    Preset p = preset(name);
    g.report(check_twist_inverse(p.base, p.twist));
  }
  Preset p = preset("rflux");
  Sampler S(404);
  TensorElement x(2, 3);
  for (int k = 0; k < 2; ++k) x += two(S.below(p.lie->size()), S.below(p.lie->size()), S.coefficient(), 3, 1);
  TensorElement gt = exp_truncated(x, *p.lie);
  g.report(check_composite_twist(p.base, p.twist, gt));
}

// 5. star product properties
PolyFunction moyal_oracle(const PolyFunction& a, const PolyFunction& b, const std::vector<std::vector<mpq_class>>& th) {
  const int N = a.order(), d = a.dim();
  PolyFunction out(d, N);
  std::vector<std::tuple<PolyFunction, PolyFunction, mpq_class>> layer{{a, b, 1}};
  mpq_class fact = 1;
  Gauss ik = 1;
  for (int k = 0; k <= N && !layer.empty(); ++k) {
    if (k) {
      fact *= k;
      ik *= Gauss(0, mpq_class(1, 2));
      std::vector<std::tuple<PolyFunction, PolyFunction, mpq_class>> next;
      for (const auto& [x, y, c] : layer)
        for (int i = 0; i < d; ++i)
          for (int j = 0; j < d; ++j)
            if (sgn(th[i][j])) next.emplace_back(x.derivative(i), y.derivative(j), c * th[i][j]);
      layer = std::move(next);
    }
    for (const auto& [x, y, c] : layer) out += (x * y).scaled(Series(N, ik * Gauss(c / fact), k));
  }
  return out;
}

void star_products(Gate& g) {
  Sampler S(505);
  for (std::string name : {"classical", "moyal", "rflux"}) {
    Preset p = preset(name);
    AlgebraObject A = AlgebraObject::twisted(p);
    for (int k = 0; k < 50; ++k) {
      PolyFunction a = S.poly(A.dim(), 3), b = S.poly(A.dim(), 3);
      PolyFunction lim = A.star(a, b) - a * b;
      if (name == "classical")
        g.expect(lim.is_zero(), "classical star is not pointwise");
      else
        g.expect(lim.terms().empty() || [&] {
          for (const auto& [e, s] : lim.terms())
            if (!s[0].is_zero()) return false;
          return true;
        }(), name + ": classical limit");
    }
  }
  {
    Preset p = preset("moyal");
    AlgebraObject A = AlgebraObject::twisted(p);
    PolyFunction x1 = A.coordinate(0), x2 = A.coordinate(1);
    PolyFunction comm = A.star(x1, x2) - A.star(x2, x1);
    PolyFunction oracle = moyal_oracle(x1, x2, p.params.theta) - moyal_oracle(x2, x1, p.params.theta);
    g.expect(comm == oracle, "Moyal commutator vs oracle");
    g.expect(comm == PolyFunction::constant(2, Series(3, Gauss(0, p.params.theta[0][1]), 1)), "[x1, x2] = i hbar theta");
    for (int k = 0; k < 20; ++k) {
      PolyFunction a = S.poly(2, 3, 3), b = S.poly(2, 3, 3);
      g.expect(A.star(a, b) == moyal_oracle(a, b, p.params.theta), "Moyal product vs oracle");
    }
  }
  {
    Preset p = preset("moyal", 4);
    AlgebraObject A = AlgebraObject::twisted(p);
    auto ms = monomials(2, 2, 4, 3);
    for (const auto& a : ms)
      for (const auto& b : ms)
        for (const auto& c : ms) g.expect(weak_assoc_defect(A, a, b, c).plain.is_zero(), "Moyal associativity");
    Preset r = preset("rflux", 4);
    AlgebraObject B = AlgebraObject::twisted(r);
    auto rs = monomials(6, 2, 4, 3);
    for (const auto& a : rs)
      for (const auto& b : rs)
        for (const auto& c : rs) g.expect(weak_assoc_defect(B, a, b, c).weak.is_zero(), "rflux weak associativity");
  }
  {
    Preset p = preset("rflux");
    AlgebraObject A = AlgebraObject::twisted(p);
    auto ms = monomials(6, 3, 3, 3);
    for (const auto& a : ms)
      for (const auto& b : ms)
        for (const auto& c : ms) g.expect(weak_assoc_defect(A, a, b, c).weak.is_zero(), "rflux weak associativity in x");
    // (x1 x2) x3 - x1 (x2 x3) = (hbar^2/2) R^{123}
    AssocDefect d = weak_assoc_defect(A, A.coordinate(0), A.coordinate(1), A.coordinate(2));
    mpq_class r123 = r_entry(p.params.r, 0, 1, 2);
    g.expect(d.plain == PolyFunction::constant(6, Series(3, Gauss(r123 / 2), 2)), "rflux plain defect");
  }
  for (std::string name : {"moyal", "rflux"}) {
    Preset p = preset(name);
    AlgebraObject A = AlgebraObject::twisted(p);
    std::vector<std::pair<PolyFunction, PolyFunction>> pairs;
    for (int k = 0; k < 50; ++k) pairs.emplace_back(S.poly(A.dim(), 3), S.poly(A.dim(), 3));
    g.report(check_braided_commutativity(A, pairs));
  }
}

// 6. the internal hom suite on A^1 and A^2, 20 samples per identity
void hom_suite(Gate& g) {
  for (std::string name : {"classical", "moyal", "rflux"}) {
    Preset p = preset(name);
    HomSuite suite(p, {20, 1, {1, 2}});
    auto t0 = Clock::now();
    for (const Report& r : suite.run()) g.report(r);
    std::cout << "  " << name << ": " << seconds_since(t0) << " s\n";
  }
}

// 7. hom_A membership, degree bound 3
void membership(Gate& g) {
  Preset p = preset("classical");
  HomCalculus c = HomCalculus::twisted(p);
  Sampler S(707);
  for (int k = 0; k < 5; ++k) g.report(c.is_right_A_linear(S.mult_matrix(c, 2, 2), 3));
  Report d = c.is_right_A_linear(HomOperator::diagonal(c.field(0), 1), 3);
  // Leibniz defect of d/dx1 on 1 * x1
  g.expect(!d.passed() && d.residual->term == "[0] 1" && d.residual->series.at(0) == Gauss(1), "derivation not rejected");
  for (int k = 0; k < 5; ++k) g.report(c.is_right_A_linear(c.hat_l(S.poly(2, 3), 2), 3));
}

// 8. byte-identical reports and the parser round trip
void determinism(Gate& g) {
  std::vector<std::string> args{"verify", "--preset", "rflux", "--seed", "42", "--samples", "2", "--checks",
                                "weak_associativity,braided_commutativity,module_algebra,twist_inverse"};
  auto a = cli(args), b = cli(args);
  g.expect(a.first == 0 && a == b, "verify reports differ");
  auto c = cli({"hom", "--preset", "moyal", "--suite", "hat_l", "--samples", "3"});
  g.expect(c.first == 0 && c == cli({"hom", "--preset", "moyal", "--suite", "hat_l", "--samples", "3"}), "hom reports differ");
  Sampler S(808);
  const std::vector<std::string> coords{"x1", "x2", "x3", "p1", "p2", "p3"};
  for (int k = 0; k < 100; ++k) {
    PolyFunction p = S.poly(6, 3, 4, 5);
    g.expect(parse_poly_expr(print_poly(p, coords), coords, 3) == p, "round trip of " + print_poly(p, coords));
  }
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* title;
    std::function<void(Gate&)> run;
    double limit_s;
  };
  const std::vector<Criterion> all{
      {1, "twisted-structure regression (rflux)", rflux_regression, 10},
      {2, "Moyal regression", moyal_regression, 5},
      {3, "axiom suites and corruption oracles", axiom_suites, 3 * 60},
      {4, "twist functoriality", functoriality, 120},
      {5, "star-product properties", star_products, 120},
      {6, "internal-hom property suite", hom_suite, 300},
      {7, "hom_A membership", membership, 60},
      {8, "CLI determinism and parser round trip", determinism, 120},
  };
  int failed = 0;
  for (const auto& c : all) {
    Gate g;
    auto t0 = Clock::now();
    try {
      c.run(g);
    } catch (const std::exception& e) {
      g.problems.push_back(std::string("exception: ") + e.what());
    }
    double s = seconds_since(t0);
    if (s > c.limit_s) g.problems.push_back("took " + std::to_string(s) + " s, limit " + std::to_string(c.limit_s));
    bool ok = g.problems.empty();
    failed += !ok;
    std::cout << "criterion " << c.id << ": " << (ok ? "PASS" : "FAIL") << "  " << c.title << "  (" << s << " s)";
    if (!ok) std::cout << "  first problem: " << g.problems.front() << " [" << g.problems.size() << " total]";
    std::cout << std::endl;
  }
  return failed ? 1 : 0;
}
