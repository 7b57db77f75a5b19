#include "trxy/serialize.hpp"

#include <json.hpp>

#include "trxy/errors.hpp"
#include "trxy/factored.hpp"

namespace trxy {

namespace {

using json = nlohmann::ordered_json;

json parse_json(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what(), e.byte);
  }
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

template <typename T>
T field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw ParseError(std::string("missing field \"") + key + "\"");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ParseError(std::string("field \"") + key + "\" has the wrong type");
  }
}

Rational rational_of(const json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<long>());
  throw ParseError("coefficient must be a \"p/q\" string or an integer");
}

std::vector<Var> label_vars(int n) {
  std::vector<Var> v;
  for (int i = 1; i <= n; ++i) v.push_back(var_zi(i));
  return v;
}

json polynomial_json(const Polynomial& p, const std::vector<Var>& vars) {
  VarMask allowed = 0;
  for (Var v : vars) allowed |= VarMask(1) << v;
  if (p.var_mask() & ~allowed) throw ContractViolation("polynomial uses variables outside the declared list");
  json out = json::array();
  for (const auto& t : p.terms()) {
    json e = json::array();
    for (Var v : vars) e.push_back(t.m.e[static_cast<std::size_t>(v)]);
    out.push_back(json::array({e, to_string(t.c)}));
  }
  return out;
}

Polynomial polynomial_of(const json& j, const std::vector<Var>& vars) {
  if (!j.is_array()) throw ParseError("polynomial must be an array of terms");
  std::vector<Term> terms;
  for (const auto& t : j) {
    if (!t.is_array() || t.size() != 2 || !t[0].is_array() || t[0].size() != vars.size()) {
      throw ParseError("polynomial term must be [exponent-vector, \"p/q\"]");
    }
    Monomial m;
    for (std::size_t i = 0; i < vars.size(); ++i) {
      if (!t[0][i].is_number_integer() || t[0][i].get<long>() < 0) throw ParseError("exponents must be nonnegative integers");
      m.e[static_cast<std::size_t>(vars[i])] = static_cast<std::uint16_t>(t[0][i].get<long>());
      m.deg += static_cast<std::uint32_t>(t[0][i].get<long>());
    }
    terms.push_back(Term{m, rational_of(t[1])});
  }
  return Polynomial::from_terms(std::move(terms));
}

json function_json(const RationalFunction& f, const std::vector<Var>& vars) {
  json j;
  j["numerator"] = polynomial_json(f.num(), vars);
  j["denominator"] = polynomial_json(f.den(), vars);
  return j;
}

RationalFunction function_of(const json& j, const std::vector<Var>& vars) {
  Polynomial num = polynomial_of(j.at("numerator"), vars);
  Polynomial den = polynomial_of(j.at("denominator"), vars);
  if (den.is_zero()) throw ParseError("zero denominator");
  return FactoredFunction::quotient(num, den).to_function();
}

std::vector<Var> variables_of(const json& j) {
  std::vector<Var> vars;
  for (const auto& name : field<std::vector<std::string>>(j, "variables")) {
    auto v = find_var(name);
    if (!v) throw ParseError("unknown variable \"" + name + "\"");
    vars.push_back(*v);
  }
  return vars;
}

json variable_names(const std::vector<Var>& vars) {
  json names = json::array();
  for (Var v : vars) names.push_back(var_name(v));
  return names;
}

json graph_json(const DecoratedGraph& g) {
  json j;
  j["n"] = g.n;
  j["genus"] = g.genus();
  j["b1"] = g.betti1();
  j["aut"] = automorphism_count(g);
  json blacks = json::array();
  for (const auto& b : g.blacks) {
    json edges = json::array();
    for (const auto& e : b.edges) edges.push_back(json::array({e.label, e.h}));
    blacks.push_back(json{{"genus", b.genus}, {"edges", edges}});
  }
  j["blacks"] = blacks;
  return j;
}

DecoratedGraph graph_of(const json& j) {
  DecoratedGraph g;
  g.n = field<int>(j, "n");
  for (const auto& b : j.at("blacks")) {
    BlackVertex v;
    v.genus = field<int>(b, "genus");
    for (const auto& e : b.at("edges")) {
      if (!e.is_array() || e.size() != 2) throw ParseError("edge must be [label, h]");
      v.edges.push_back(EdgeEnd{e[0].get<int>(), e[1].get<int>()});
    }
    g.blacks.push_back(std::move(v));
  }
  return normalized(std::move(g));
}

json series_json(int g, int n, const MultiSeries& s) {
  json j;
  j["g"] = g;
  j["n"] = n;
  if (s.order() < kExactOrder) j["order"] = s.order();
  json coeffs = json::array();
  for (const auto& [e, c] : s.coefficients()) coeffs.push_back(json::array({e, to_string(c)}));
  j["coefficients"] = coeffs;
  return j;
}

std::pair<std::pair<int, int>, MultiSeries> series_of(const json& j) {
  const int g = field<int>(j, "g");
  const int n = field<int>(j, "n");
  if (g < 0 || n < 1 || n > kMaxIndexedZ) throw ParseError("series index (g, n) out of range");
  const int order = j.contains("order") ? field<int>(j, "order") : kExactOrder;
  std::vector<std::pair<MultiSeries::Exponents, Rational>> coeffs;
  for (const auto& t : j.at("coefficients")) {
    if (!t.is_array() || t.empty()) throw ParseError("coefficient entry must be an array");
    MultiSeries::Exponents e;
    json value;
    if (t.size() == 2 && t[0].is_array()) {
      for (const auto& k : t[0]) e.push_back(k.get<int>());
      value = t[1];
    } else {
      for (std::size_t i = 0; i + 1 < t.size(); ++i) e.push_back(t[i].get<int>());
      value = t.back();
    }
    if (static_cast<int>(e.size()) != n) throw ParseError("coefficient entry needs " + std::to_string(n) + " exponents");
    coeffs.emplace_back(std::move(e), rational_of(value));
  }
  try {
    return {{g, n}, MultiSeries::from_coefficients(n, order, coeffs)};
  } catch (const ContractViolation& e) {
    throw ParseError(e.what());
  }
}

}  // namespace

std::string emit_correlator(const CorrelatorRecord& r) {
  const auto vars = label_vars(r.n);
  json j;
  j["curve"] = json{{"name", r.curve_name}, {"x", r.x}, {"y", r.y}};
  j["g"] = r.g;
  j["n"] = r.n;
  j["variables"] = variable_names(vars);
  j["text"] = r.value.to_string();
  const json f = function_json(r.value, vars);
  j["numerator"] = f["numerator"];
  j["denominator"] = f["denominator"];
  return dump(j);
}

CorrelatorRecord parse_correlator(std::string_view text) {
  const json j = parse_json(text);
  try {
    CorrelatorRecord r;
    const json& c = j.at("curve");
    r.curve_name = field<std::string>(c, "name");
    r.x = field<std::string>(c, "x");
    r.y = field<std::string>(c, "y");
    r.g = field<int>(j, "g");
    r.n = field<int>(j, "n");
    r.value = function_of(j, variables_of(j));
    return r;
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad correlator record: ") + e.what());
  }
}

std::string emit_term_report(const TermReportRecord& r) {
  const auto vars = label_vars(r.n);
  json j;
  j["g"] = r.g;
  j["n"] = r.n;
  j["variables"] = variable_names(vars);
  json entries = json::array();
  for (const auto& e : r.report.entries) {
    json t;
    t["graph"] = graph_json(e.graph);
    t["group"] = e.group;
    t["inverse_aut"] = to_string(e.inverse_aut);
    t["contribution"] = function_json(e.contribution, vars);
    t["running_total"] = function_json(e.running_total, vars);
    entries.push_back(t);
  }
  j["entries"] = entries;
  j["total"] = function_json(r.report.total, vars);
  return dump(j);
}

TermReportRecord parse_term_report(std::string_view text) {
  const json j = parse_json(text);
  try {
    TermReportRecord r;
    r.g = field<int>(j, "g");
    r.n = field<int>(j, "n");
    const auto vars = variables_of(j);
    for (const auto& t : j.at("entries")) {
      TermEntry e;
      e.graph = graph_of(t.at("graph"));
      e.group = field<std::string>(t, "group");
      e.inverse_aut = parse_rational(field<std::string>(t, "inverse_aut"));
      e.contribution = function_of(t.at("contribution"), vars);
      e.running_total = function_of(t.at("running_total"), vars);
      r.report.entries.push_back(std::move(e));
    }
    r.report.total = function_of(j.at("total"), vars);
    return r;
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad term report: ") + e.what());
  }
}

std::string emit_graphs(const std::vector<DecoratedGraph>& graphs) {
  json out = json::array();
  for (const auto& g : graphs) out.push_back(graph_json(g));
  return dump(out);
}

std::vector<DecoratedGraph> parse_graphs(std::string_view text) {
  const json j = parse_json(text);
  if (!j.is_array()) throw ParseError("graph list must be an array");
  std::vector<DecoratedGraph> out;
  try {
    for (const auto& g : j) out.push_back(graph_of(g));
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad graph: ") + e.what());
  }
  return out;
}

std::string emit_series(const SeriesRecord& r) { return dump(series_json(r.g, r.n, r.series)); }

GeneratingSeries parse_series_file(std::string_view text) {
  const json j = parse_json(text);
  GeneratingSeries out;
  auto add = [&](const json& e) {
    auto [key, s] = series_of(e);
    if (!out.entries.emplace(key, std::move(s)).second) {
      throw ParseError("duplicate series entry (" + std::to_string(key.first) + "," + std::to_string(key.second) + ")");
    }
  };
  try {
    if (j.is_array()) {
      for (const auto& e : j) add(e);
    } else if (j.is_object() && j.contains("entries")) {
      for (const auto& e : j.at("entries")) add(e);
    } else {
      add(j);
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad series file: ") + e.what());
  }
  return out;
}

std::string emit_series_file(const GeneratingSeries& s) {
  json entries = json::array();
  for (const auto& [key, series] : s.entries) entries.push_back(series_json(key.first, key.second, series));
  return dump(json{{"entries", entries}});
}

}  // namespace trxy
