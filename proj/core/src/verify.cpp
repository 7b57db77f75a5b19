#include "trxy/verify.hpp"

#include <algorithm>
#include <functional>
#include <random>
#include <set>
#include <sstream>

#include "trxy/errors.hpp"
#include "trxy/expression.hpp"
#include "trxy/free_probability.hpp"
#include "trxy/graphs.hpp"
#include "trxy/swap.hpp"

namespace trxy {

namespace {

using Cases = std::vector<std::pair<int, int>>;
const Cases kLowOrders = {{0, 3}, {1, 1}, {1, 2}, {2, 1}};

RationalFunction rf(const char* s) { return parse_rational_function(s); }

std::string case_name(int g, int n) { return "(" + std::to_string(g) + "," + std::to_string(n) + ")"; }

class Collector {
 public:
  Collector(VerifyReport& report, int criterion) : report_(report), criterion_(criterion) {}

  void expect(const std::string& name, bool ok, std::string expected, std::string actual) {
    report_.checks.push_back(Check{criterion_, name, ok, std::move(expected), std::move(actual)});
  }
  void equal(const std::string& name, const RationalFunction& expected, const RationalFunction& actual) {
    expect(name, expected == actual, expected.to_string(), actual.to_string());
  }
  template <typename T>
  void equal_value(const std::string& name, const T& expected, const T& actual) {
    std::ostringstream e, a;
    e << expected;
    a << actual;
    expect(name, expected == actual, e.str(), a.str());
  }
  // Runs one check body; an exception records a failure under `name`.
  void guarded(const std::string& name, const std::function<void()>& body) {
    try {
      body();
    } catch (const std::exception& e) {
      expect(name, false, "no error", std::string("error: ") + e.what());
    }
  }

 private:
  VerifyReport& report_;
  int criterion_;
};

struct Tables {
  std::optional<std::filesystem::path> cache;
  std::map<std::string, std::unique_ptr<CorrelatorTable>> tables;

  CorrelatorTable& get(const SpectralCurve& c) {
    auto key = c.canonical_key();
    auto it = tables.find(key);
    if (it != tables.end()) return *it->second;
    auto t = std::make_unique<CorrelatorTable>(c);
    if (cache) t->attach_cache(*cache);
    return *tables.emplace(key, std::move(t)).first->second;
  }
};

std::array<Var, kMaxVars> transposition(Var a, Var b) {
  std::array<Var, kMaxVars> perm{};
  for (int k = 0; k < kMaxVars; ++k) perm[static_cast<std::size_t>(k)] = k;
  std::swap(perm[static_cast<std::size_t>(a)], perm[static_cast<std::size_t>(b)]);
  return perm;
}

bool is_symmetric(const RationalFunction& w, int n) {
  for (int i = 2; i <= n; ++i) {
    if (w.renamed(transposition(var_zi(1), var_zi(i))) != w) return false;
  }
  return true;
}

// Whether every denominator factor is z_i - a with a among `points`.
bool poles_within(const RationalFunction& w, int n, const std::vector<Rational>& points) {
  Polynomial den = w.den();
  for (int i = 1; i <= n; ++i) {
    for (const auto& a : points) {
      const Polynomial f = Polynomial::variable(var_zi(i)) - Polynomial(a);
      while (auto q = divide_exact(den, f)) den = *q;
    }
  }
  return den.is_constant();
}

std::vector<Rational> locations(const SpectralCurve& c, Branch b) {
  std::vector<Rational> out;
  for (const auto& p : ramification_points(c, b)) out.push_back(p.location);
  return out;
}

std::string sorted_strings(std::vector<RationalFunction> v) {
  std::vector<std::string> s;
  for (const auto& f : v) s.push_back(f.to_string());
  std::sort(s.begin(), s.end());
  std::string out;
  for (const auto& x : s) out += (out.empty() ? "" : ", ") + x;
  return out;
}

// ---------- criteria ----------

void airy_table(Tables& tables, VerifyReport& report) {
  Collector c(report, 1);
  CorrelatorTable& t = tables.get(catalog_curve("airy"));
  const std::vector<std::tuple<int, int, const char*>> expected = {
      {0, 2, "1/(4*z1*z2*(z1-z2)^2)"},
      {0, 3, "-1/(16*z1^3*z2^3*z3^3)"},
      {1, 1, "-1/(32*z1^5)"},
      {1, 2, "(5*z1^4+5*z2^4+3*z1^2*z2^2)/(128*z1^7*z2^7)"},
      {2, 1, "-105/(2048*z1^11)"},
  };
  for (const auto& [g, n, text] : expected) {
    const std::string name = "airy W" + case_name(g, n);
    c.guarded(name, [&, g = g, n = n, text = text] { c.equal(name, rf(text), t.get(g, n)); });
  }
  c.guarded("airy regularized W(0,2) on the diagonal", [&] {
    c.equal("airy regularized W(0,2) on the diagonal", rf("1/(16*z1^4)"),
            regularized_diagonal_w02(t.curve(), var_zi(1)));
  });
}

void airy_swap(Tables& tables, VerifyReport& report) {
  Collector c(report, 2);
  CorrelatorTable& t = tables.get(catalog_curve("airy"));
  SwapEngine e(t);
  for (auto [g, n] : kLowOrders) {
    const std::string name = "airy dual W" + case_name(g, n) + " vanishes";
    c.guarded(name, [&, g = g, n = n] { c.equal(name, RationalFunction(), e.swap_correlator(g, n)); });
  }
  c.guarded("airy (2,1) graph-group subtotals", [&] {
    TermReport r;
    e.swap_correlator(2, 1, &r);
    std::vector<RationalFunction> totals;
    for (const auto& [k, v] : r.group_totals()) totals.push_back(v);
    const std::vector<RationalFunction> expected = {rf("87/(32*z1^10)"), rf("-477/(128*z1^10)"),
                                                    rf("-63/(128*z1^10)"), rf("3/(2*z1^10)")};
    c.expect("airy (2,1) graph-group subtotals", sorted_strings(totals) == sorted_strings(expected),
             sorted_strings(expected), sorted_strings(totals));
    std::vector<RationalFunction> parts;
    e.hand_coded(2, 1, &parts);
    std::string want, got;
    for (const auto& p : expected) want += p.to_string() + "; ";
    for (const auto& p : parts) got += p.to_string() + "; ";
    c.expect("airy (2,1) printed groups in order", want == got, want, got);
  });
}

void reverse_airy(Tables& tables, VerifyReport& report) {
  Collector c(report, 3);
  c.guarded("reverse airy dual W(2,1)", [&] {
    CorrelatorTable& t = tables.get(swap_roles(catalog_curve("airy")));
    for (auto [g, n] : kLowOrders) {
      c.equal("reverse airy input W" + case_name(g, n) + " vanishes", RationalFunction(), t.get(g, n));
    }
    SwapEngine e(t);
    TermReport r;
    RationalFunction w = e.swap_correlator(2, 1, &r);
    c.equal("reverse airy dual W(2,1)", rf("-105/(2048*z1^11)"), w);
    int surviving = 0;
    for (const auto& entry : r.entries) surviving += entry.contribution.is_zero() ? 0 : 1;
    c.equal_value("reverse airy surviving terms", 1, surviving);
  });
}

void two_sided_round_trip(Tables& tables, VerifyReport& report) {
  Collector c(report, 4);
  const SpectralCurve curve = catalog_curve("two-sided");
  c.guarded("two-sided round trip", [&] {
    CorrelatorTable& t = tables.get(curve);
    CorrelatorTable& dual = tables.get(swap_roles(curve));
    SwapEngine e(t);
    for (auto [g, n] : kLowOrders) {
      c.equal("two-sided dual W" + case_name(g, n) + " vs direct recursion", dual.get(g, n), e.swap_correlator(g, n));
    }
    // Second swap fed only with first-swap outputs.
    CorrelatorTable fed(swap_roles(curve));
    for (auto [g, n] : kLowOrders) {
      for (auto [dg, dn] : e.dependencies(g, n)) {
        if (!fed.find(dg, dn)) fed.store(dg, dn, e.swap_correlator(dg, dn));
      }
      if (!fed.find(g, n)) fed.store(g, n, e.swap_correlator(g, n));
    }
    SwapEngine back(fed, false);
    for (auto [g, n] : kLowOrders) {
      c.equal("two-sided swap twice W" + case_name(g, n), t.get(g, n), back.swap_correlator(g, n));
    }
  });
}

void methods_agree(Tables& tables, VerifyReport& report) {
  Collector c(report, 5);
  for (const char* name : {"airy", "two-sided"}) {
    CorrelatorTable& t = tables.get(catalog_curve(name));
    SwapEngine e(t);
    for (auto [g, n] : kLowOrders) {
      const std::string label = std::string(name) + " " + case_name(g, n);
      c.guarded(label, [&, g = g, n = n] {
        RationalFunction ref = e.swap_correlator(g, n);
        for (auto m : {SwapMethod::Operator, SwapMethod::Tree, SwapMethod::Exponential, SwapMethod::Hand}) {
          if (!SwapEngine::applies(m, g, n)) continue;
          c.equal(label + " " + to_string(m) + " vs graphs", ref, e.compute(g, n, m));
        }
      });
    }
  }
}

PlainGraph plain(int n, std::vector<std::vector<int>> blacks) { return normalized(PlainGraph{n, std::move(blacks)}); }

void graph_combinatorics(VerifyReport& report) {
  Collector c(report, 6);
  c.guarded("decorated graphs", [&] {
    c.equal_value("decorated graphs for (g,n)=(1,1)", std::size_t{2}, enumerate_decorated(1, 1).size());

    std::vector<std::int64_t> fig2;
    for (const auto& p : {plain(1, {}), plain(1, {{1, 1}}), plain(1, {{1, 1}, {1, 1}}), plain(1, {{1, 1, 1}})}) {
      fig2.push_back(automorphism_count(p));
    }
    std::ostringstream f2;
    for (auto a : fig2) f2 << a << " ";
    c.expect("one-point shapes |Aut| = 1 2 8 6", fig2 == std::vector<std::int64_t>{1, 2, 8, 6}, "1 2 8 6 ", f2.str());

    std::ostringstream f1;
    bool ok = true;
    auto shapes = enumerate_plain(2, 2);
    for (const auto& g : shapes) {
      const std::int64_t want = g == plain(2, {{1, 2}}) ? 1 : 2;
      ok = ok && automorphism_count(g) == want;
      f1 << automorphism_count(g) << " ";
    }
    c.expect("two-point shapes |Aut| in {1, 2}", ok && shapes.size() == 6, "1 2 2 2 2 2 ", f1.str());

    auto g12 = enumerate_decorated(1, 2);
    std::vector<int> split(3, 0);
    for (const auto& d : g12) ++split[static_cast<std::size_t>(std::min(d.betti1(), 2))];
    c.equal_value("decorated graphs for (g,n)=(2,1)", std::size_t{12}, g12.size());
    std::ostringstream sp;
    sp << split[0] << "," << split[1] << "," << split[2];
    c.expect("b1 split for (g,n)=(2,1)", split == std::vector<int>{6, 4, 2}, "6,4,2", sp.str());

    int checked = 0;
    int bad = 0;
    std::string first_bad;
    for (int n = 1; n <= 4; ++n) {
      for (int g = 0; 2 * g - 2 + n <= 4; ++g) {
        for (const auto& d : enumerate_decorated(n, g)) {
          if (d.edge_count() > 5) continue;
          ++checked;
          if (automorphism_count(d) != brute_force_automorphisms(d)) {
            ++bad;
            if (first_bad.empty()) first_bad = d.canonical();
          }
        }
      }
    }
    c.expect("brute-force |Aut| on " + std::to_string(checked) + " graphs with at most 5 edges", bad == 0, "0 mismatches",
             std::to_string(bad) + " mismatches" + (first_bad.empty() ? "" : " first " + first_bad));
  });
}

Polynomial z1() { return Polynomial::variable(var_zi(1)); }

MultiSeries random_c01(std::mt19937& rng, int degree) {
  std::uniform_int_distribution<long> num(-3, 3);
  std::uniform_int_distribution<long> den(1, 3);
  std::vector<std::pair<MultiSeries::Exponents, Rational>> c{{{0}, Rational(1)}};
  for (int k = 1; k <= degree; ++k) c.push_back({{k}, ratio(num(rng), den(rng))});
  return MultiSeries::from_coefficients(1, kExactOrder, c);
}

MultiSeries random_c02(std::mt19937& rng, int degree) {
  std::uniform_int_distribution<long> num(-3, 3);
  std::uniform_int_distribution<long> den(1, 3);
  std::vector<std::pair<MultiSeries::Exponents, Rational>> c;
  for (int a = 0; a <= degree; ++a) {
    for (int b = a; a + b <= degree; ++b) {
      Rational v = ratio(num(rng), den(rng));
      c.push_back({{a, b}, v});
      if (a != b) c.push_back({{b, a}, v});
    }
  }
  return MultiSeries::from_coefficients(2, kExactOrder, c);
}

// Cleared second-order relation, both sides as two-variable series.
bool second_order_holds(const CumulantSeries& c, int order) {
  MultiSeries m2 = moments_from_cumulants(c, 0, 2, order);
  MultiSeries m1 = solve_first_order(*c.find(0, 1), order + 6);
  MultiSeries y = MultiSeries(1, kExactOrder, z1()) * m1;
  MultiSeries y1 = y.embedded(2, 1);
  MultiSeries y2 = y.embedded(2, 2);
  MultiSeries dy1 = y.derivative(1).embedded(2, 1);
  MultiSeries dy2 = y.derivative(1).embedded(2, 2);
  const MultiSeries x1(2, kExactOrder, Polynomial::variable(var_zi(1)));
  const MultiSeries x2(2, kExactOrder, Polynomial::variable(var_zi(2)));
  const MultiSeries dx = x1 - x2;
  const MultiSeries dyy = y1 - y2;
  MultiSeries c2(2, kExactOrder);
  for (const auto& [e, k] : c.find(0, 2)->coefficients()) {
    MultiSeries term = MultiSeries::constant(2, kExactOrder, k);
    for (int i = 0; i < e[0]; ++i) term = term * y1;
    for (int i = 0; i < e[1]; ++i) term = term * y2;
    c2 = c2 + term;
  }
  MultiSeries lhs = (m2 * dx * dx + x1 * x2) * dyy * dyy * y1 * y2;
  MultiSeries rhs = x1 * x2 * dy1 * dy2 * dx * dx * (c2 * dyy * dyy + y1 * y2);
  return std::min(lhs.order(), rhs.order()) >= order + 6 && lhs.agrees_with(rhs);
}

void free_probability(Tables& tables, VerifyReport& report) {
  Collector c(report, 7);
  c.guarded("semicircle first order", [&] {
    std::vector<std::pair<MultiSeries::Exponents, Rational>> k{{{0}, Rational(1)}, {{2}, Rational(1)}};
    MultiSeries m = solve_first_order(MultiSeries::from_coefficients(1, kExactOrder, k), 10);
    // Oracle: M <- 1 + X^2 M^2, truncated.
    Polynomial oracle(1);
    for (int i = 0; i <= 10; ++i) oracle = MultiSeries(1, 10, Polynomial(1) + z1() * z1() * oracle * oracle).poly();
    c.expect("semicircle M_1 vs fixed-point oracle", m.poly() == oracle, oracle.to_string(), m.poly().to_string());
    std::ostringstream got;
    for (int j = 0; j <= 5; ++j) got << to_string(m.coeff({2 * j})) << (j < 5 ? "," : "");
    c.expect("catalan coefficients at orders 0..10", got.str() == "1,1,2,5,14,42", "1,1,2,5,14,42", got.str());
  });
  c.guarded("second-order relation", [&] {
    std::mt19937 rng(20261016);
    int ok = 0;
    for (int trial = 0; trial < 20; ++trial) {
      CumulantSeries cs;
      cs.entries[{0, 1}] = random_c01(rng, 4);
      cs.entries[{0, 2}] = random_c02(rng, 3);
      ok += second_order_holds(cs, 8) ? 1 : 0;
    }
    c.equal_value("second-order relation to order 8 on random inputs", 20, ok);
  });
  c.guarded("shifted identity", [&] {
    std::vector<std::pair<MultiSeries::Exponents, Rational>> k{{{0}, Rational(1)}, {{2}, Rational(1)}};
    ShiftedForms s = shifted_series(MultiSeries::from_coefficients(1, kExactOrder, k), 10);
    c.expect("shifted identity to order 10", s.identity_holds && s.composition.size() == 11, "1/X",
             s.identity_holds ? "1/X" : "differs");
  });
  c.guarded("gaussian cross-pipeline", [&] {
    CorrelatorTable& t = tables.get(catalog_curve("gaussian"));
    CumulantSeries cs = identify_with_swap(t, SeriesSide::Cumulants, {{0, 1}, {0, 2}, {1, 1}}, 10);
    for (auto [g, n] : Cases{{0, 2}, {1, 1}}) {
      MultiSeries a = moments_from_cumulants(cs, g, n, 8);
      MultiSeries b = identify_entry(t, SeriesSide::Moments, g, n, 8);
      c.expect("gaussian M" + case_name(g, n) + " from cumulants vs direct", a.poly() == b.poly() && a.order() == 8,
               b.to_string(), a.to_string());
    }
  });
}

void engine_properties(Tables& tables, VerifyReport& report, int criterion, const SpectralCurve& curve) {
  Collector c(report, criterion);
  const std::string tag = curve.name().empty() ? curve.canonical_key() : curve.name();
  CorrelatorTable& t = tables.get(curve);
  const auto xs = locations(curve, Branch::X);
  const auto ys = locations(curve, Branch::Y);
  SwapEngine e(t);
  for (auto [g, n] : kLowOrders) {
    const std::string label = tag + " " + case_name(g, n);
    c.guarded(label, [&, g = g, n = n] {
      RationalFunction w = t.get(g, n);
      c.expect(label + " W symmetric", is_symmetric(w, n), "symmetric", is_symmetric(w, n) ? "symmetric" : "not symmetric");
      c.expect(label + " W poles at x-ramification", poles_within(w, n, xs), "poles in ramification set", w.to_string());
      c.equal(label + " W stable under +4 truncation", w, t.compute_direct(g, n, 4));
      RationalFunction d = e.swap_correlator(g, n);
      c.expect(label + " dual symmetric", is_symmetric(d, n), "symmetric", is_symmetric(d, n) ? "symmetric" : "not symmetric");
      c.expect(label + " dual poles at y-ramification", poles_within(d, n, ys), "poles in ramification set", d.to_string());
    });
  }
}

void curve_suite(Tables& tables, VerifyReport& report, const SpectralCurve& curve) {
  engine_properties(tables, report, 0, curve);
  Collector c(report, 0);
  const std::string tag = curve.name().empty() ? curve.canonical_key() : curve.name();
  c.guarded(tag + " round trip", [&] {
    CorrelatorTable& t = tables.get(curve);
    CorrelatorTable& dual = tables.get(swap_roles(curve));
    SwapEngine e(t);
    for (auto [g, n] : kLowOrders) {
      RationalFunction ref = e.swap_correlator(g, n);
      c.equal(tag + " dual W" + case_name(g, n) + " vs direct recursion", dual.get(g, n), ref);
      for (auto m : {SwapMethod::Operator, SwapMethod::Tree, SwapMethod::Exponential, SwapMethod::Hand}) {
        if (!SwapEngine::applies(m, g, n)) continue;
        c.equal(tag + " " + case_name(g, n) + " " + to_string(m) + " vs graphs", ref, e.compute(g, n, m));
      }
    }
  });
}

}  // namespace

bool VerifyReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

std::vector<int> VerifyReport::criteria() const {
  std::set<int> s;
  for (const auto& c : checks) s.insert(c.criterion);
  return {s.begin(), s.end()};
}

bool VerifyReport::criterion_passed(int criterion) const {
  bool any = false;
  for (const auto& c : checks) {
    if (c.criterion != criterion) continue;
    any = true;
    if (!c.passed) return false;
  }
  return any;
}

std::string VerifyReport::summary_line(int criterion) const {
  int total = 0;
  int failed = 0;
  const Check* first = nullptr;
  for (const auto& c : checks) {
    if (c.criterion != criterion) continue;
    ++total;
    if (!c.passed) {
      ++failed;
      if (!first) first = &c;
    }
  }
  std::ostringstream os;
  os << (criterion == 0 ? std::string("curve suite") : "criterion " + std::to_string(criterion)) << ": ";
  if (total == 0) {
    os << "FAIL (no checks ran)";
  } else if (failed == 0) {
    os << "PASS (" << total << " checks)";
  } else {
    os << "FAIL (" << failed << " of " << total << " checks failed; first: " << first->name << ": expected "
       << first->expected << ", got " << first->actual << ")";
  }
  return os.str();
}

std::string VerifyReport::to_text() const {
  std::ostringstream os;
  for (const auto& c : checks) {
    os << (c.passed ? "[PASS] " : "[FAIL] ") << c.criterion << " " << c.name;
    if (c.passed) {
      os << ": " << c.actual;
    } else {
      os << ": expected " << c.expected << ", got " << c.actual;
    }
    os << "\n";
  }
  return os.str();
}

VerifyReport run_verify(const VerifyConfig& config) {
  VerifyReport report;
  Tables tables;
  tables.cache = config.cache_dir;
  if (config.curve) {
    curve_suite(tables, report, *config.curve);
    return report;
  }
  std::vector<int> which = config.criteria;
  if (which.empty()) {
    for (int k = 1; k <= kCriterionCount; ++k) which.push_back(k);
  }
  for (int k : which) {
    switch (k) {
      case 1: airy_table(tables, report); break;
      case 2: airy_swap(tables, report); break;
      case 3: reverse_airy(tables, report); break;
      case 4: two_sided_round_trip(tables, report); break;
      case 5: methods_agree(tables, report); break;
      case 6: graph_combinatorics(report); break;
      case 7: free_probability(tables, report); break;
      case 8:
        for (const auto& name : catalog_names()) engine_properties(tables, report, 8, catalog_curve(name));
        break;
      default: throw ContractViolation("unknown acceptance criterion " + std::to_string(k));
    }
  }
  return report;
}

}  // namespace trxy
