#include "trxy/free_probability.hpp"

#include <algorithm>
#include <sstream>
#include <tuple>

#include "trxy/errors.hpp"
#include "trxy/factored.hpp"
#include "trxy/graphs.hpp"
#include "trxy/swap.hpp"

namespace trxy {

namespace {

int add_orders(long a, long b) { return static_cast<int>(std::min<long>(kExactOrder, a + b)); }

int low_degree(const Polynomial& p) { return p.is_zero() ? kExactOrder : static_cast<int>(p.terms().back().m.deg); }

Polynomial truncate(const Polynomial& p, int order) {
  if (p.is_zero() || static_cast<int>(p.terms().front().m.deg) <= order) return p;
  std::vector<Term> keep;
  for (const auto& t : p.terms()) {
    if (static_cast<int>(t.m.deg) <= order) keep.push_back(t);
  }
  return Polynomial::from_terms(std::move(keep));
}

// a * b with every term of total degree above `order` dropped.
Polynomial truncated_product(const Polynomial& a, const Polynomial& b, int order) {
  std::vector<Term> out;
  for (const auto& s : a.terms()) {
    const int room = order - static_cast<int>(s.m.deg);
    if (room < 0) continue;
    for (auto it = b.terms().rbegin(); it != b.terms().rend(); ++it) {
      if (static_cast<int>(it->m.deg) > room) break;
      out.push_back(Term{monomial_mul(s.m, it->m), s.c * it->c});
    }
  }
  return Polynomial::from_terms(std::move(out));
}

Rational constant_term(const Polynomial& p) {
  if (p.is_zero() || p.terms().back().m.deg != 0) return Rational(0);
  return p.terms().back().c;
}

Polynomial var_poly(Var v) { return Polynomial::variable(v); }

Monomial power_of(Var v, int k) {
  Monomial m;
  m.e[static_cast<std::size_t>(v)] = static_cast<std::uint16_t>(k);
  m.deg = static_cast<std::uint32_t>(k);
  return m;
}

// num / (prod v^shift[v] * prod (a - b)^diag[(a, b)]) with num known through
// total degree prec.
struct PoleSeries {
  Polynomial num;
  int prec = kExactOrder;
  std::map<Var, int> shift;
  std::map<std::pair<Var, Var>, int> diag;  // a < b, factor (a - b)
};

PoleSeries pole_times(const PoleSeries& a, const PoleSeries& b) {
  PoleSeries r;
  r.prec = std::min(add_orders(a.prec, low_degree(b.num)), add_orders(b.prec, low_degree(a.num)));
  r.num = truncated_product(a.num, b.num, r.prec);
  r.shift = a.shift;
  for (const auto& [v, k] : b.shift) r.shift[v] += k;
  r.diag = a.diag;
  for (const auto& [p, k] : b.diag) r.diag[p] += k;
  return r;
}

PoleSeries pole_times(const PoleSeries& a, const Polynomial& s, int sprec) {
  PoleSeries b;
  b.num = s;
  b.prec = sprec;
  return pole_times(a, b);
}

Polynomial difference(std::pair<Var, Var> p) { return var_poly(p.first) - var_poly(p.second); }

PoleSeries pole_sum(const PoleSeries& a, const PoleSeries& b) {
  PoleSeries r;
  r.shift = a.shift;
  for (const auto& [v, k] : b.shift) r.shift[v] = std::max(r.shift[v], k);
  r.diag = a.diag;
  for (const auto& [p, k] : b.diag) r.diag[p] = std::max(r.diag[p], k);
  auto lift = [&](const PoleSeries& x, int& prec) {
    Polynomial n = x.num;
    prec = x.prec;
    for (const auto& [v, k] : r.shift) {
      auto it = x.shift.find(v);
      int d = k - (it == x.shift.end() ? 0 : it->second);
      if (d > 0) {
        n = n.times_monomial(power_of(v, d), Rational(1));
        prec = add_orders(prec, d);
      }
    }
    for (const auto& [p, k] : r.diag) {
      auto it = x.diag.find(p);
      int d = k - (it == x.diag.end() ? 0 : it->second);
      if (d > 0) {
        n *= difference(p).pow(static_cast<unsigned>(d));
        prec = add_orders(prec, d);
      }
    }
    return n;
  };
  int pa = 0;
  int pb = 0;
  Polynomial na = lift(a, pa);
  Polynomial nb = lift(b, pb);
  r.prec = std::min(pa, pb);
  r.num = truncate(na + nb, r.prec);
  return r;
}

PoleSeries pole_derivative(const PoleSeries& a, Var v) {
  struct Dep {
    Polynomial f;
    Polynomial df;
    int e;
  };
  std::vector<Dep> deps;
  PoleSeries r = a;
  if (auto it = a.shift.find(v); it != a.shift.end() && it->second > 0) {
    deps.push_back({var_poly(v), Polynomial(1), it->second});
    ++r.shift[v];
  }
  for (const auto& [p, k] : a.diag) {
    if (k == 0 || (p.first != v && p.second != v)) continue;
    deps.push_back({difference(p), Polynomial(p.first == v ? 1 : -1), k});
    ++r.diag[p];
  }
  r.prec = add_orders(a.prec, static_cast<long>(deps.size()) - 1);
  Polynomial all(1);
  for (const auto& d : deps) all *= d.f;
  Polynomial n = a.num.derivative(v) * all;
  for (std::size_t k = 0; k < deps.size(); ++k) {
    Polynomial others(1);
    for (std::size_t j = 0; j < deps.size(); ++j) {
      if (j != k) others *= deps[j].f;
    }
    n -= (a.num * deps[k].df * others).scaled(Rational(deps[k].e));
  }
  r.num = truncate(n, r.prec);
  return r;
}

PoleSeries pole_times_power(const PoleSeries& a, Var v, int k) {
  PoleSeries r = a;
  int& s = r.shift[v];
  int d = std::min(s, k);
  s -= d;
  if (k > d) {
    r.num = r.num.times_monomial(power_of(v, k - d), Rational(1));
    r.prec = add_orders(r.prec, k - d);
  }
  return r;
}

// The power series num / den, exact through the returned order.
std::pair<Polynomial, int> pole_finalize(const PoleSeries& a) {
  Polynomial den(1);
  int e = 0;
  for (const auto& [v, k] : a.shift) {
    if (k <= 0) continue;
    den *= var_poly(v).pow(static_cast<unsigned>(k));
    e += k;
  }
  for (const auto& [p, k] : a.diag) {
    if (k <= 0) continue;
    den *= difference(p).pow(static_cast<unsigned>(k));
    e += k;
  }
  std::map<int, std::vector<Term>> parts;
  for (const auto& t : a.num.terms()) {
    if (static_cast<int>(t.m.deg) <= a.prec) parts[static_cast<int>(t.m.deg)].push_back(t);
  }
  Polynomial out;
  for (auto& [deg, terms] : parts) {
    auto q = divide_exact(Polynomial::from_terms(std::move(terms)), den);
    if (!q) throw AssumptionViolated("series has a pole at the expansion point");
    out += *q;
  }
  return {out, a.prec - e};
}

// p(v -> s(v)) where s has zero constant term and is exact through sprec.
std::pair<Polynomial, int> substitute_series(const Polynomial& p, int prec, Var v, const Polynomial& s, int sprec) {
  const int out_prec = std::min(prec, sprec);
  auto coeffs = p.coefficients_in(v);
  if (coeffs.size() <= 1) return {truncate(p, out_prec), out_prec};
  Polynomial r = coeffs.back();
  for (std::size_t k = coeffs.size() - 1; k-- > 0;) r = truncated_product(r, s, out_prec) + coeffs[k];
  return {truncate(r, out_prec), out_prec};
}

Polynomial univariate_in(const MultiSeries& s, Var v) { return s.poly().renamed(var_zi(1), v); }

// (s(a) - s(b)) / (a - b) for a univariate series s, exact through s.order() - 1.
Polynomial divided_difference(const MultiSeries& s, Var a, Var b) {
  Polynomial out;
  for (const auto& t : s.poly().terms()) {
    const int k = t.m.e[static_cast<std::size_t>(var_zi(1))];
    for (int p = 0; p < k; ++p) {
      Monomial m;
      m.e[static_cast<std::size_t>(a)] = static_cast<std::uint16_t>(p);
      m.e[static_cast<std::size_t>(b)] = static_cast<std::uint16_t>(k - 1 - p);
      m.deg = static_cast<std::uint32_t>(k - 1);
      out += Polynomial::monomial(m, t.c);
    }
  }
  return out;
}

MultiSeries unit_inverse(int n, int prec, const Polynomial& p) { return MultiSeries(n, prec, p).inverse(); }

Polynomial power_truncated(const Polynomial& p, int k, int prec) {
  Polynomial r(1);
  for (int i = 0; i < k; ++i) r = truncated_product(r, p, prec);
  return r;
}

// ---------- moments from cumulants ----------

struct Substitution {
  int n = 1;
  MultiSeries y;      // Y(X) = X M_1(X)
  MultiSeries yinv;   // 1 / M_1
  MultiSeries dy;     // dY/dX
};

PoleSeries to_x_side(PoleSeries w, const Substitution& sub) {
  std::vector<Var> vars;
  for (Var v = 0; v < kMaxVars; ++v) {
    if ((w.num.var_mask() >> v) & 1u) vars.push_back(v);
  }
  for (Var v : vars) {
    auto [p, prec] = substitute_series(w.num, w.prec, v, univariate_in(sub.y, v), sub.y.order());
    w.num = std::move(p);
    w.prec = prec;
  }
  const auto shifts = w.shift;
  const auto diags = w.diag;
  for (const auto& [v, k] : shifts) {
    if (k <= 0) continue;
    w = pole_times(w, power_truncated(univariate_in(sub.yinv, v), k, sub.yinv.order()), sub.yinv.order());
  }
  for (const auto& [p, k] : diags) {
    if (k <= 0) continue;
    const int qprec = sub.y.order() - 1;
    Polynomial q = divided_difference(sub.y, p.first, p.second);
    MultiSeries qi = unit_inverse(kMaxIndexedZ, qprec, q);
    w = pole_times(w, power_truncated(qi.poly(), k, qprec), qprec);
  }
  return w;
}

MultiSeries entry_or_zero(const CumulantSeries& c, int g, int n, int work) {
  const MultiSeries* s = c.find(g, n);
  if (!s) return MultiSeries(n, kExactOrder);
  return s->truncated(std::min(s->order(), work));
}

// Free weight of one black vertex, written in the X variables.
PoleSeries free_weight(const CumulantSeries& c, const BlackVertex& b, const Substitution& sub, int work) {
  const int k = static_cast<int>(b.edges.size());
  if (k > kMaxSlots) throw UnsupportedGraph("black vertex valence exceeds the slot registry");
  std::array<Var, kMaxVars> to_slots{};
  for (int i = 0; i < kMaxVars; ++i) to_slots[static_cast<std::size_t>(i)] = i;
  for (int j = 1; j <= k; ++j) to_slots[static_cast<std::size_t>(var_zi(j))] = var_slot(j);
  MultiSeries base = entry_or_zero(c, b.genus, k, work);
  PoleSeries w;
  w.num = base.poly().renamed(to_slots);
  w.prec = base.order();
  for (int j = 1; j <= k; ++j) w.shift[var_slot(j)] = 1;
  if (b.genus == 0 && k == 2 && b.edges[0].label != b.edges[1].label) {
    Polynomial d = var_poly(var_slot(1)) - var_poly(var_slot(2));
    w.num = w.num * d * d + var_poly(var_slot(1)) * var_poly(var_slot(2));
    w.prec = add_orders(w.prec, 2);
    w.diag[{var_slot(1), var_slot(2)}] = 2;
  }
  if (w.num.is_zero()) return PoleSeries{Polynomial(), kExactOrder, {}, {}};
  Rational scale(1);
  for (int j = 1; j <= k; ++j) {
    const int h = b.edges[static_cast<std::size_t>(j - 1)].h;
    for (int t = 0; t < 2 * h; ++t) w = pole_derivative(w, var_slot(j));
    scale *= s_coefficient(h);
  }
  w.num = w.num.scaled(scale);
  // Slots onto the white labels.
  std::array<Var, kMaxVars> to_labels{};
  for (int i = 0; i < kMaxVars; ++i) to_labels[static_cast<std::size_t>(i)] = i;
  for (int j = 1; j <= k; ++j) to_labels[static_cast<std::size_t>(var_slot(j))] = var_zi(b.edges[static_cast<std::size_t>(j - 1)].label);
  PoleSeries r;
  r.num = w.num.renamed(to_labels);
  r.prec = w.prec;
  for (const auto& [v, s] : w.shift) r.shift[to_labels[static_cast<std::size_t>(v)]] += s;
  for (const auto& [p, e] : w.diag) {
    Var a = to_labels[static_cast<std::size_t>(p.first)];
    Var bb = to_labels[static_cast<std::size_t>(p.second)];
    if (a == bb) throw UnsupportedGraph("pole part between coinciding labels");
    if (a > bb) {
      std::swap(a, bb);
      if (e % 2) r.num = -r.num;
    }
    r.diag[{a, bb}] += e;
  }
  return to_x_side(std::move(r), sub);
}

MultiSeries moments_at(const CumulantSeries& c, int g, int n, int work) {
  const MultiSeries* c01 = c.find(0, 1);
  if (!c01) throw ContractViolation("cumulant series needs C_{0,1}");
  Substitution sub;
  sub.n = n;
  MultiSeries m1 = solve_first_order(*c01, work);
  MultiSeries x(1, kExactOrder, var_poly(var_zi(1)));
  sub.y = x * m1;
  sub.yinv = m1.inverse();
  sub.dy = sub.y.derivative(1);

  std::vector<DecoratedGraph> graphs = enumerate_decorated(n, g);
  PoleSeries total{Polynomial(), kExactOrder, {}, {}};
  for (const auto& d : graphs) {
    PoleSeries term{Polynomial(1), kExactOrder, {}, {}};
    bool zero = false;
    for (const auto& b : d.blacks) {
      PoleSeries w = free_weight(c, b, sub, work);
      if (w.num.is_zero()) {
        zero = true;
        break;
      }
      term = pole_times(term, w);
    }
    if (zero) continue;
    const auto valences = d.valences();
    const auto genera = d.edge_genera();
    for (int i = 1; i <= n; ++i) {
      const Var v = var_zi(i);
      Polynomial xdy = univariate_in(sub.dy, v) * var_poly(v) * var_poly(v);
      term = pole_times(term, xdy, add_orders(sub.dy.order(), 2));
      const int m = valences[static_cast<std::size_t>(i - 1)] + 2 * genera[static_cast<std::size_t>(i - 1)] - 1;
      for (int t = 0; t < m; ++t) term = pole_times_power(pole_derivative(term, v), v, 2);
    }
    term.num = term.num.scaled(Rational(1) / Rational(automorphism_count(d)));
    total = pole_sum(total, term);
  }
  if (g == 0 && n == 2) {
    PoleSeries pole;
    pole.num = -(var_poly(var_zi(1)) * var_poly(var_zi(1)) * var_poly(var_zi(2)) * var_poly(var_zi(2)));
    pole.diag[{var_zi(1), var_zi(2)}] = 2;
    total = pole_sum(total, pole);
  }
  for (int i = 1; i <= n; ++i) total.shift[var_zi(i)] += 1;
  auto [p, order] = pole_finalize(total);
  return MultiSeries(n, order, p);
}

// ---------- identification ----------

struct Expansion {
  Rational z0;
  MultiSeries t;  // z - z0 as a series in the generating variable
};

Rational eval_at(const Polynomial& p, const Rational& z0) { return p.substitute(var_z(), z0).constant_value(); }

int multiplicity_at(const Polynomial& p, const Rational& z0) {
  for (const auto& [r, m] : rational_roots_of(p)) {
    if (r == z0) return m;
  }
  return 0;
}

// Series reversion of a(t) = sum_{k>=1} a_k t^k.
MultiSeries revert(const std::vector<Rational>& a, int order) {
  if (a.size() < 2 || a[0] != 0 || a[1] == 0) throw ContractViolation("reversion needs a simple zero");
  Polynomial tail;
  for (std::size_t k = 2; k < a.size(); ++k) tail += Polynomial::monomial(power_of(var_zi(1), static_cast<int>(k)), a[k]);
  MultiSeries higher(1, order, tail);
  MultiSeries x(1, kExactOrder, var_poly(var_zi(1)));
  const Rational inv = Rational(1) / a[1];
  MultiSeries t = x.scaled(inv).truncated(order);
  for (int i = 0; i < order; ++i) t = (x - higher.compose(t)).scaled(inv).truncated(order);
  return t;
}

Expansion expansion_point(const SpectralCurve& curve, SeriesSide side, int order) {
  const RationalFunction& x = curve.x();
  const RationalFunction& y = curve.y();
  if (side == SeriesSide::Moments) {
    for (const auto& [z0, m] : rational_roots_of(x.den())) {
      if (m != 1 || eval_at(y.den(), z0) == 0 || eval_at(y.num(), z0) != 0) continue;
      return {z0, revert(taylor_coefficients(x.inverse(), z0, order), order)};
    }
    throw AssumptionViolated("no simple pole of x where y vanishes; the moment expansion X = 1/x is not available");
  }
  for (const auto& [z0, m] : rational_roots_of(y.num())) {
    if (m != 1 || multiplicity_at(x.den(), z0) != 1) continue;
    return {z0, revert(taylor_coefficients(y, z0, order), order)};
  }
  throw AssumptionViolated("no simple zero of y at a simple pole of x; the cumulant expansion is not available");
}

// f(z_i = z0 + t(X_i)) as a pole series in X_1..X_n.
PoleSeries expand_function(const RationalFunction& f, int n, const Expansion& ex) {
  FactoredFunction ff(f);
  const int tprec = ex.t.order();
  auto to_x = [&](Polynomial p) {
    int prec = kExactOrder;
    for (int i = 1; i <= n; ++i) {
      const Var v = var_zi(i);
      if (!((p.var_mask() >> v) & 1u)) continue;
      p = p.taylor_shift(v, ex.z0);
      auto [q, qp] = substitute_series(p, prec, v, univariate_in(ex.t, v), tprec);
      p = std::move(q);
      prec = qp;
    }
    return std::make_pair(p, prec);
  };
  PoleSeries r;
  std::tie(r.num, r.prec) = to_x(ff.num());
  for (const auto& fa : ff.factors()) {
    std::vector<Var> vars;
    for (Var v = 0; v < kMaxVars; ++v) {
      if ((fa.p.var_mask() >> v) & 1u) vars.push_back(v);
    }
    if (vars.size() == 2 && fa.linear && fa.p.size() == 2 && fa.p.terms()[0].c == -fa.p.terms()[1].c) {
      // alpha (z_a - z_b) -> alpha (X_a - X_b) Q_ab
      const Var a = std::min(vars[0], vars[1]);
      const Var b = std::max(vars[0], vars[1]);
      Rational alpha = fa.p.derivative(a).constant_value();
      const int qprec = tprec - 1;
      Polynomial q = divided_difference(ex.t, a, b).scaled(alpha);
      MultiSeries qi = unit_inverse(kMaxIndexedZ, qprec, q);
      r = pole_times(r, power_truncated(qi.poly(), fa.e, qprec), qprec);
      r.diag[{a, b}] += fa.e;
      continue;
    }
    auto [p, prec] = to_x(fa.p);
    int shift = 0;
    if (vars.size() == 1) {
      shift = low_degree(p);
      if (shift >= kExactOrder || shift > prec) throw TruncationError("factor vanishes to the working order", prec);
      p = exact_quotient(p, Polynomial::monomial(power_of(vars[0], shift), Rational(1)));
      prec -= shift;
    } else if (constant_term(p) == 0) {
      throw AssumptionViolated("correlator has a pole at the expansion point");
    }
    MultiSeries inv = unit_inverse(kMaxIndexedZ, prec, p);
    r = pole_times(r, power_truncated(inv.poly(), fa.e, prec), prec);
    if (shift) r.shift[vars[0]] += shift * fa.e;
  }
  return r;
}

MultiSeries identify_at(CorrelatorTable& table, SeriesSide side, int g, int n, int work) {
  const SpectralCurve& curve = table.curve();
  const Expansion ex = expansion_point(curve, side, work);
  const Var z1 = var_zi(1);
  RationalFunction f;
  if (side == SeriesSide::Moments) {
    if (g == 0 && n == 1) {
      f = curve.y().substitute(var_z(), RationalFunction::variable(z1));
    } else if (g == 0 && n == 2) {
      f = regularized_w02_two_point(curve, z1, var_zi(2));
    } else {
      f = table.get(g, n);
    }
  } else {
    if (g == 0 && n == 1) {
      f = curve.x().substitute(var_z(), RationalFunction::variable(z1));
    } else if (g == 0 && n == 2) {
      f = regularized_w02_two_point(swap_roles(curve), z1, var_zi(2));
    } else {
      SwapEngine engine(table);
      f = engine.swap_correlator(g, n);
    }
  }
  PoleSeries s = expand_function(f, n, ex);
  for (int i = 1; i <= n; ++i) {
    if (side == SeriesSide::Moments) {
      s.shift[var_zi(i)] += 1;
    } else {
      s = pole_times_power(s, var_zi(i), 1);
    }
  }
  auto [p, order] = pole_finalize(s);
  return MultiSeries(n, order, p);
}

// Runs `attempt(work)` with growing working order until the result reaches
// `order`; gives up when the achieved order stops improving.
template <typename F>
MultiSeries with_working_order(int order, int slack, F attempt) {
  int best = -1;
  for (int tries = 0; tries < 8; ++tries) {
    MultiSeries r = attempt(order + slack);
    if (r.order() >= order) return r.truncated(order);
    if (tries > 0 && r.order() <= best) throw TruncationError("input series too short for the requested order", r.order());
    best = std::max(best, r.order());
    slack += 4;
  }
  throw TruncationError("requested order not reached", best);
}

void check_stable(int g, int n) {
  if (g < 0 || n < 1) throw ContractViolation("need g >= 0 and n >= 1");
  if (n > kMaxIndexedZ) throw ContractViolation("n exceeds the variable registry");
}

}  // namespace

// ---------- MultiSeries ----------

MultiSeries::MultiSeries(int nvars, int order, const Polynomial& p) : n_(nvars), order_(order), p_(truncate(p, order)) {}

MultiSeries MultiSeries::constant(int nvars, int order, const Rational& c) { return MultiSeries(nvars, order, Polynomial(c)); }

MultiSeries MultiSeries::from_coefficients(int nvars, int order, const std::vector<std::pair<Exponents, Rational>>& coeffs) {
  if (nvars < 1 || nvars > kMaxIndexedZ) throw ContractViolation("series variable count out of range");
  std::vector<Term> terms;
  for (const auto& [e, c] : coeffs) {
    if (static_cast<int>(e.size()) != nvars) throw ContractViolation("exponent vector has the wrong length");
    Monomial m;
    for (int i = 0; i < nvars; ++i) {
      if (e[static_cast<std::size_t>(i)] < 0) throw ContractViolation("negative exponent in a power series");
      m.e[static_cast<std::size_t>(var_zi(i + 1))] = static_cast<std::uint16_t>(e[static_cast<std::size_t>(i)]);
      m.deg += static_cast<std::uint32_t>(e[static_cast<std::size_t>(i)]);
    }
    terms.push_back(Term{m, c});
  }
  return MultiSeries(nvars, order, Polynomial::from_terms(std::move(terms)));
}

int MultiSeries::valuation() const { return low_degree(p_); }

Rational MultiSeries::coeff(const Exponents& e) const {
  for (const auto& [k, c] : coefficients()) {
    if (k == e) return c;
  }
  return Rational(0);
}

std::vector<std::pair<MultiSeries::Exponents, Rational>> MultiSeries::coefficients() const {
  std::vector<std::pair<Exponents, Rational>> out;
  for (const auto& t : p_.terms()) {
    Exponents e(static_cast<std::size_t>(n_));
    for (int i = 0; i < n_; ++i) e[static_cast<std::size_t>(i)] = t.m.e[static_cast<std::size_t>(var_zi(i + 1))];
    out.emplace_back(std::move(e), t.c);
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    int da = 0;
    int db = 0;
    for (int v : a.first) da += v;
    for (int v : b.first) db += v;
    if (da != db) return da < db;
    return a.first > b.first;
  });
  return out;
}

MultiSeries MultiSeries::truncated(int order) const { return MultiSeries(n_, std::min(order, order_), p_); }

MultiSeries MultiSeries::scaled(const Rational& c) const { return MultiSeries(n_, order_, p_.scaled(c)); }

MultiSeries MultiSeries::derivative(int i) const { return MultiSeries(n_, order_ - 1, p_.derivative(var_zi(i))); }

MultiSeries MultiSeries::inverse() const {
  const Rational c = constant_term(p_);
  if (c == 0) throw DivisionByZero("series without constant term is not invertible");
  const Rational inv = Rational(1) / c;
  Polynomial r = p_.scaled(inv) - Polynomial(1);
  Polynomial neg = -r;
  Polynomial sum(1);
  Polynomial power(1);
  for (int k = 1; k <= order_; ++k) {
    power = truncated_product(power, neg, order_);
    if (power.is_zero()) break;
    sum += power;
  }
  return MultiSeries(n_, order_, sum.scaled(inv));
}

MultiSeries MultiSeries::compose(const MultiSeries& s) const {
  if (n_ != 1) throw ContractViolation("composition needs a univariate outer series");
  if (constant_term(s.p_) != 0) throw ContractViolation("inner series must have zero constant term");
  auto coeffs = p_.coefficients_in(var_zi(1));
  if (coeffs.empty()) return MultiSeries(s.n_, std::min(order_, s.order_));
  MultiSeries r(s.n_, kExactOrder, coeffs.back());
  for (std::size_t k = coeffs.size() - 1; k-- > 0;) r = r * s + MultiSeries(s.n_, kExactOrder, coeffs[k]);
  return r.truncated(order_);
}

MultiSeries MultiSeries::embedded(int nvars, int j) const {
  if (n_ != 1) throw ContractViolation("embedding needs a univariate series");
  return MultiSeries(nvars, order_, p_.renamed(var_zi(1), var_zi(j)));
}

MultiSeries operator+(const MultiSeries& a, const MultiSeries& b) {
  const int order = std::min(a.order_, b.order_);
  return MultiSeries(std::max(a.n_, b.n_), order, a.p_ + b.p_);
}

MultiSeries operator*(const MultiSeries& a, const MultiSeries& b) {
  const int order = std::min(add_orders(a.order_, b.valuation()), add_orders(b.order_, a.valuation()));
  MultiSeries r(std::max(a.n_, b.n_), order);
  r.p_ = truncated_product(a.p_, b.p_, order);
  return r;
}

bool MultiSeries::agrees_with(const MultiSeries& o) const {
  const int order = std::min(order_, o.order_);
  return truncate(p_, order) == truncate(o.p_, order);
}

std::string MultiSeries::to_string(const std::string& letter) const {
  std::ostringstream os;
  bool first = true;
  for (const auto& [e, c] : coefficients()) {
    const bool unit = !std::all_of(e.begin(), e.end(), [](int v) { return v == 0; });
    Rational mag = c < 0 ? Rational(-c) : c;
    if (first) {
      if (c < 0) os << "-";
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    first = false;
    bool need_star = false;
    if (!unit || mag != 1) {
      os << trxy::to_string(mag);
      need_star = true;
    }
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      if (need_star) os << "*";
      os << letter;
      if (n_ > 1) os << (i + 1);
      if (e[i] > 1) os << "^" << e[i];
      need_star = true;
    }
  }
  if (first) os << "0";
  if (order_ < kExactOrder) os << " + O(" << letter << "^" << (order_ + 1) << ")";
  return os.str();
}

const MultiSeries* GeneratingSeries::find(int g, int n) const {
  auto it = entries.find({g, n});
  return it == entries.end() ? nullptr : &it->second;
}

const char* to_string(SeriesSide s) { return s == SeriesSide::Moments ? "moments" : "cumulants"; }

// ---------- operations ----------

MultiSeries solve_first_order(const MultiSeries& c01, int order) {
  if (c01.nvars() != 1) throw ContractViolation("C_{0,1} must be univariate");
  if (constant_term(c01.poly()) != 1) throw ContractViolation("C_{0,1} must have constant term 1");
  const int work = std::min(order, c01.order());
  const MultiSeries x(1, kExactOrder, var_poly(var_zi(1)));
  MultiSeries m = MultiSeries::constant(1, work, Rational(1));
  for (int k = 0; k < work; ++k) m = c01.compose(x * m).truncated(work);
  if (!c01.compose(x * m).truncated(work).agrees_with(m)) throw Error("internal: first-order solution failed back-substitution");
  return m;
}

MultiSeries moments_from_cumulants(const CumulantSeries& c, int g, int n, int order) {
  check_stable(g, n);
  if (g == 0 && n == 1) {
    const MultiSeries* c01 = c.find(0, 1);
    if (!c01) throw ContractViolation("cumulant series needs C_{0,1}");
    MultiSeries m = solve_first_order(*c01, order);
    if (m.order() < order) throw TruncationError("C_{0,1} too short for the requested order", m.order());
    return m;
  }
  return with_working_order(order, 2 * (2 * g + n) + 4, [&](int work) { return moments_at(c, g, n, work); });
}

MultiSeries identify_entry(CorrelatorTable& table, SeriesSide side, int g, int n, int order) {
  check_stable(g, n);
  return with_working_order(order, 2 * n + 2, [&](int work) { return identify_at(table, side, g, n, work); });
}

GeneratingSeries identify_with_swap(CorrelatorTable& table, SeriesSide side, const std::vector<std::pair<int, int>>& which,
                                    int order) {
  GeneratingSeries out;
  for (auto [g, n] : which) out.entries.emplace(std::make_pair(g, n), identify_entry(table, side, g, n, order));
  return out;
}

ShiftedForms shifted_series(const MultiSeries& c01, int order) {
  ShiftedForms out;
  MultiSeries m1 = solve_first_order(c01, order);
  const int work = m1.order();
  const MultiSeries x(1, kExactOrder, var_poly(var_zi(1)));
  out.m_tilde = x * m1;
  out.c_tilde_times_y = c01.truncated(work);
  // C~_1(M~_1) = C_1(X M_1) / (X M_1) = X^{-1} C_1(X M_1) / M_1
  MultiSeries ratio = c01.compose(out.m_tilde).truncated(work) * m1.inverse();
  out.identity_holds = true;
  for (int k = 0; k <= work; ++k) {
    Rational c = ratio.coeff({k});
    out.composition.push_back(c);
    if (c != (k == 0 ? Rational(1) : Rational(0))) out.identity_holds = false;
  }
  return out;
}

}  // namespace trxy
