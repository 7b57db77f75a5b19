#include "trxy/swap.hpp"

#include <algorithm>
#include <limits>
#include <set>
#include <sstream>

#include "trxy/errors.hpp"

namespace trxy {

namespace {

// Key: exponent of hbar followed by the exponents of u_1 .. u_n.
using HuKey = std::vector<int>;
using HuSeries = std::map<HuKey, FactoredFunction>;

struct HuLimits {
  int hbar;
  int u;
};

void hu_add(HuSeries& s, const HuKey& k, const FactoredFunction& v) {
  if (v.is_zero()) return;
  auto [it, inserted] = s.emplace(k, v);
  if (inserted) return;
  it->second += v;
  if (it->second.is_zero()) s.erase(it);
}

bool within(const HuKey& k, const HuLimits& lim) {
  if (k[0] > lim.hbar) return false;
  for (std::size_t i = 1; i < k.size(); ++i) {
    if (k[i] > lim.u) return false;
  }
  return true;
}

HuSeries hu_mul(const HuSeries& a, const HuSeries& b, const HuLimits& lim) {
  HuSeries out;
  for (const auto& [ka, va] : a) {
    for (const auto& [kb, vb] : b) {
      HuKey k(ka.size());
      for (std::size_t i = 0; i < k.size(); ++i) k[i] = ka[i] + kb[i];
      if (within(k, lim)) hu_add(out, k, va * vb);
    }
  }
  return out;
}

HuSeries hu_one(std::size_t n) { return HuSeries{{HuKey(n + 1, 0), FactoredFunction(1)}}; }

// exp(e) for e without hbar^0 terms.
HuSeries hu_exp(const HuSeries& e, std::size_t n, const HuLimits& lim) {
  for (const auto& [k, v] : e) {
    if (k[0] <= 0) throw ContractViolation("exponential of a series with an hbar^0 term");
  }
  HuSeries out = hu_one(n);
  HuSeries term = hu_one(n);
  for (int j = 1;; ++j) {
    term = hu_mul(term, e, lim);
    if (term.empty()) break;
    for (auto& [k, v] : term) v = v.scaled(ratio(1, j));
    for (const auto& [k, v] : term) hu_add(out, k, v);
  }
  return out;
}

std::array<Var, kMaxVars> identity_perm() {
  std::array<Var, kMaxVars> p{};
  for (int i = 0; i < kMaxVars; ++i) p[static_cast<std::size_t>(i)] = i;
  return p;
}

// W written in z1..zk, moved to the variables listed in `to`.
RationalFunction moved(const RationalFunction& w, const std::vector<Var>& to) {
  auto perm = identity_perm();
  for (std::size_t j = 0; j < to.size(); ++j) perm[static_cast<std::size_t>(var_zi(static_cast<int>(j) + 1))] = to[j];
  return w.renamed(perm);
}

}  // namespace

std::string to_string(SwapMethod m) {
  switch (m) {
    case SwapMethod::Graphs: return "graphs";
    case SwapMethod::Operator: return "operator";
    case SwapMethod::Tree: return "tree";
    case SwapMethod::Exponential: return "exp";
    case SwapMethod::Hand: return "hand";
  }
  return "graphs";
}

std::optional<SwapMethod> parse_swap_method(std::string_view s) {
  for (auto m : {SwapMethod::Graphs, SwapMethod::Operator, SwapMethod::Tree, SwapMethod::Exponential, SwapMethod::Hand}) {
    if (to_string(m) == s) return m;
  }
  return std::nullopt;
}

std::map<std::string, RationalFunction> TermReport::group_totals() const {
  std::map<std::string, FactoredFunction> sums;
  for (const auto& e : entries) sums[e.group] += FactoredFunction(e.contribution);
  std::map<std::string, RationalFunction> out;
  for (const auto& [k, v] : sums) out[k] = v.to_function();
  return out;
}

Rational s_coefficient(int h) { return Rational(1 / (rational_pow(Rational(4), h) * factorial(static_cast<unsigned>(2 * h + 1)))); }

SwapEngine::SwapEngine(CorrelatorTable& table, bool compute_missing) : table_(table), compute_missing_(compute_missing) {}

const FactoredFunction& SwapEngine::inv_xprime(Var v) {
  auto it = inv_xp_.find(v);
  if (it == inv_xp_.end()) it = inv_xp_.emplace(v, FactoredFunction(derivative_in(curve(), Branch::X, v).inverse())).first;
  return it->second;
}

const FactoredFunction& SwapEngine::inv_yprime(Var v) {
  auto it = inv_yp_.find(v);
  if (it == inv_yp_.end()) it = inv_yp_.emplace(v, FactoredFunction(derivative_in(curve(), Branch::Y, v).inverse())).first;
  return it->second;
}

const FactoredFunction& SwapEngine::xprime_y_factored(Var v) {
  auto it = xp_y_.find(v);
  if (it == xp_y_.end()) it = xp_y_.emplace(v, FactoredFunction(xprime_y(v))).first;
  return it->second;
}

FactoredFunction SwapEngine::dx(FactoredFunction f, Var v, int times) {
  const FactoredFunction& inv = inv_xprime(v);
  for (int i = 0; i < times && !f.is_zero(); ++i) f = f.derivative(v) * inv;
  return f;
}

FactoredFunction SwapEngine::dy(FactoredFunction f, Var v, int times) {
  const FactoredFunction& inv = inv_yprime(v);
  for (int i = 0; i < times && !f.is_zero(); ++i) f = f.derivative(v) * inv;
  return f;
}

RationalFunction SwapEngine::d_x(const RationalFunction& f, Var v, int times) {
  return dx(FactoredFunction(f), v, times).to_function();
}

RationalFunction SwapEngine::d_y(const RationalFunction& f, Var v, int times) {
  return dy(FactoredFunction(f), v, times).to_function();
}

RationalFunction SwapEngine::xprime_y(Var v) const {
  return derivative_in(curve(), Branch::X, v) / derivative_in(curve(), Branch::Y, v);
}

RationalFunction SwapEngine::unstable(int g, int n) {
  if (g == 0 && n == 1) return curve().x().renamed(var_z(), var_zi(1));
  if (g == 0 && n == 2) {
    return (FactoredFunction(bergman(var_zi(1), var_zi(2))) * inv_yprime(var_zi(1)) * inv_yprime(var_zi(2))).to_function();
  }
  throw ContractViolation("(g, n) = (" + std::to_string(g) + ", " + std::to_string(n) + ") is not an unstable index");
}

RationalFunction SwapEngine::correlator(int g, int n) {
  if (g == 0 && n == 1) return table_.get(0, 1);
  if (g == 0 && n == 2) return table_.get(0, 2);
  if (auto w = table_.find(g, n)) return *w;
  if (!compute_missing_) require({{g, n}});
  return table_.get(g, n);
}

std::vector<std::pair<int, int>> SwapEngine::dependencies(int g, int n) const {
  std::set<std::pair<int, int>> deps;
  if (2 * g - 2 + n > 0) {
    for (const auto& d : enumerate_decorated(n, g)) {
      for (const auto& b : d.blacks) {
        int k = static_cast<int>(b.edges.size());
        if (2 * b.genus - 2 + k > 0) deps.insert({b.genus, k});
      }
    }
  }
  return {deps.begin(), deps.end()};
}

void SwapEngine::require(const std::vector<std::pair<int, int>>& deps) {
  if (compute_missing_) return;
  std::vector<std::string> missing;
  for (auto [g, n] : deps) {
    if (!table_.find(g, n)) missing.push_back("(" + std::to_string(g) + "," + std::to_string(n) + ")");
  }
  if (missing.empty()) return;
  std::ostringstream os;
  os << "missing correlators:";
  for (const auto& m : missing) os << " " << m;
  throw DependencyError(os.str());
}

const FactoredFunction& SwapEngine::weight_factored(const BlackVertex& b) {
  if (auto it = weights_.find(b); it != weights_.end()) return it->second;
  const int k = static_cast<int>(b.edges.size());
  if (k < 1 || k > kMaxSlots) throw UnsupportedGraph("black vertex valence " + std::to_string(k) + " outside 1..10");
  RationalFunction f;
  if (b.genus == 0 && k == 2 && b.edges[0].label == b.edges[1].label) {
    f = regularized_w02_two_point(curve(), var_slot(1), var_slot(2));
  } else {
    std::vector<Var> slots;
    for (int j = 1; j <= k; ++j) slots.push_back(var_slot(j));
    f = moved(correlator(b.genus, k), slots);
  }
  FactoredFunction ff(f);
  bool changed = false;
  for (int j = 0; j < k; ++j) {
    const int h = b.edges[static_cast<std::size_t>(j)].h;
    if (h > 0) {
      ff = dx(ff, var_slot(j + 1), 2 * h).scaled(s_coefficient(h));
      changed = true;
    }
  }
  if (changed) f = ff.to_function();
  for (int j = 0; j < k; ++j) {
    f = f.substitute(var_slot(j + 1), RationalFunction::variable(var_zi(b.edges[static_cast<std::size_t>(j)].label)));
  }
  return weights_.emplace(b, FactoredFunction(f)).first->second;
}

RationalFunction SwapEngine::weight(const BlackVertex& b) { return weight_factored(b).to_function(); }

FactoredFunction SwapEngine::apply_dual_operators(FactoredFunction f, const std::vector<int>& powers) {
  for (std::size_t i = 0; i < powers.size(); ++i) f = -(f * xprime_y_factored(var_zi(static_cast<int>(i) + 1)));
  for (std::size_t i = 0; i < powers.size(); ++i) {
    const int m = powers[i];
    if (m < 0) throw ContractViolation("negative derivative order");
    f = dy(std::move(f), var_zi(static_cast<int>(i) + 1), m);
    if (m % 2) f = -f;
  }
  return f;
}

RationalFunction SwapEngine::swap_correlator(int g, int n, TermReport* report) {
  if (n < 1 || g < 0) throw ContractViolation("swap needs n >= 1 and g >= 0");
  if (2 * g - 2 + n <= 0) {
    RationalFunction w = unstable(g, n);
    if (report) *report = TermReport{{}, w};
    return w;
  }
  require(dependencies(g, n));
  FactoredFunction total;
  if (report) report->entries.clear();
  for (const auto& d : enumerate_decorated(n, g)) {
    FactoredFunction f(1);
    for (const auto& b : d.blacks) f *= weight_factored(b);
    std::vector<int> powers = d.valences();
    std::vector<int> hs = d.edge_genera();
    for (std::size_t i = 0; i < powers.size(); ++i) powers[i] += 2 * hs[i] - 1;
    const Rational inv_aut = ratio(1, static_cast<long>(automorphism_count(d)));
    FactoredFunction term = apply_dual_operators(std::move(f), powers).scaled(inv_aut);
    total += term;
    if (report) {
      report->entries.push_back({d, shadow(d).canonical(), inv_aut, term.to_function(), total.to_function()});
    }
  }
  RationalFunction w = total.to_function();
  if (report) report->total = w;
  return w;
}

// hbar^{2g'+k-2} prod_slots (sum_h hbar^{1+2h} u^{1+2h} c_h d_x^{2h}) W_{g',k},
// with the regularized two-point function when g' = 0 and both slots carry
// the same label.
class HatSeries {
 public:
  HatSeries(SwapEngine& e, int n, HuLimits lim) : e_(e), n_(n), lim_(lim) {}

  const HuSeries& get(const std::vector<int>& labels) {
    auto it = cache_.find(labels);
    if (it != cache_.end()) return it->second;
    return cache_.emplace(labels, build(labels)).first->second;
  }

 private:
  HuSeries build(const std::vector<int>& labels) {
    const int k = static_cast<int>(labels.size());
    if (k > kMaxSlots) throw UnsupportedGraph("black vertex valence above 10");
    HuSeries out;
    for (int gp = 0; 2 * gp + 2 * k - 2 <= lim_.hbar; ++gp) {
      RationalFunction w;
      if (gp == 0 && k == 2 && labels[0] == labels[1]) {
        w = regularized_w02_two_point(e_.curve(), var_slot(1), var_slot(2));
      } else {
        std::vector<Var> slots;
        for (int j = 1; j <= k; ++j) slots.push_back(var_slot(j));
        w = moved(e_.correlator(gp, k), slots);
      }
      HuKey start(static_cast<std::size_t>(n_) + 1, 0);
      start[0] = 2 * gp + k - 2;
      HuSeries s{{start, FactoredFunction(w)}};
      for (int j = 0; j < k; ++j) {
        const Var slot = var_slot(j + 1);
        const auto label = static_cast<std::size_t>(labels[static_cast<std::size_t>(j)]);
        HuSeries next;
        for (const auto& [key, coef] : s) {
          FactoredFunction d = coef;
          for (int h = 0;; ++h) {
            HuKey nk = key;
            nk[0] += 1 + 2 * h;
            nk[label] += 1 + 2 * h;
            if (!within(nk, lim_) || d.is_zero()) break;
            hu_add(next, nk, d.scaled(s_coefficient(h)));
            d = e_.dx(d, slot, 2);
          }
        }
        s = std::move(next);
      }
      for (const auto& [key, coef] : s) {
        RationalFunction c = coef.to_function();
        for (int j = 0; j < k; ++j) {
          c = c.substitute(var_slot(j + 1), RationalFunction::variable(var_zi(labels[static_cast<std::size_t>(j)])));
        }
        hu_add(out, key, FactoredFunction(c));
      }
    }
    return out;
  }

  SwapEngine& e_;
  int n_;
  HuLimits lim_;
  std::map<std::vector<int>, HuSeries> cache_;
};

RationalFunction SwapEngine::via_operator_series(int g, int n, int* used_nu) {
  if (n < 1 || g < 0) throw ContractViolation("swap needs n >= 1 and g >= 0");
  if (2 * g - 2 + n <= 0) return unstable(g, n);
  if (n > kMaxSlots) throw UnsupportedGraph("operator form limited to n <= 10");
  require(dependencies(g, n));
  const int euler = 2 * g - 2 + n;
  const int target = euler + n;
  int nu = 6 * g + 3 * n;
  for (int attempt = 0; attempt < 6; ++attempt, nu += 2) {
    // One pass with the window widened by 2; the contributions with some
    // u-exponent beyond nu + 1 measure the change between the two windows.
    const HuLimits lim{target, nu + 3};
    HatSeries hat(*this, n, lim);
    std::vector<HuSeries> exps;
    for (int i = 1; i <= n; ++i) {
      HuSeries e = hat.get({i});
      HuKey bare(static_cast<std::size_t>(n) + 1, 0);
      bare[static_cast<std::size_t>(i)] = 1;
      e.erase(bare);
      exps.push_back(hu_exp(e, static_cast<std::size_t>(n), lim));
    }
    HuSeries base = hu_one(static_cast<std::size_t>(n));
    for (const auto& e : exps) base = hu_mul(base, e, lim);
    HuSeries collected;
    for (const auto& p : enumerate_plain(n, euler)) {
      HuSeries prod = base;
      for (const auto& b : p.blacks) prod = hu_mul(prod, hat.get(b), lim);
      const Rational inv_aut = ratio(1, static_cast<long>(automorphism_count(p)));
      for (const auto& [k, v] : prod) {
        if (k[0] == target) hu_add(collected, k, v.scaled(inv_aut));
      }
    }
    FactoredFunction inner, outer;
    for (const auto& [k, v] : collected) {
      std::vector<int> powers;
      bool in_window = true;
      for (int i = 1; i <= n; ++i) {
        powers.push_back(k[static_cast<std::size_t>(i)] - 1);
        if (k[static_cast<std::size_t>(i)] > nu + 1) in_window = false;
      }
      FactoredFunction term = apply_dual_operators(v, powers);
      (in_window ? inner : outer) += term;
    }
    if (outer.is_zero()) {
      if (used_nu) *used_nu = nu;
      return inner.to_function();
    }
  }
  throw Error("operator series did not stabilise in the u-truncation");
}

RationalFunction SwapEngine::genus0_tree(int n) {
  if (n < 3) throw ContractViolation("tree form needs n >= 3");
  require(dependencies(0, n));
  FactoredFunction total;
  for (const auto& p : enumerate_plain(n, n - 2)) {
    if (p.betti1() != 0) continue;
    FactoredFunction f(1);
    for (const auto& b : p.blacks) {
      std::vector<Var> to;
      for (int l : b) to.push_back(var_zi(l));
      f *= FactoredFunction(moved(correlator(0, static_cast<int>(b.size())), to));
    }
    std::vector<int> powers = p.valences();
    for (auto& r : powers) r -= 1;
    total += apply_dual_operators(std::move(f), powers).scaled(ratio(1, static_cast<long>(automorphism_count(p))));
  }
  return total.to_function();
}

RationalFunction SwapEngine::n1_exponential(int g) {
  if (g < 1) throw ContractViolation("exponential form needs g >= 1");
  require(dependencies(g, 1));
  // The hbar bound already makes every product finite.
  const HuLimits lim{2 * g, std::numeric_limits<int>::max()};
  HatSeries hat(*this, 1, lim);
  HuSeries exponent;
  for (int i = 1; 2 * i - 2 <= 2 * g; ++i) {
    const Rational inv = 1 / factorial(static_cast<unsigned>(i));
    for (const auto& [k, v] : hat.get(std::vector<int>(static_cast<std::size_t>(i), 1))) hu_add(exponent, k, v.scaled(inv));
  }
  // Removes the y u term.
  exponent.erase(HuKey{0, 1});
  FactoredFunction total;
  for (const auto& [k, v] : hu_exp(exponent, 1, lim)) {
    if (k[0] == 2 * g) total += apply_dual_operators(v, {k[1] - 1});
  }
  return total.to_function();
}

bool SwapEngine::applies(SwapMethod method, int g, int n) {
  if (n < 1 || g < 0) return false;
  switch (method) {
    case SwapMethod::Graphs:
    case SwapMethod::Operator: return true;
    case SwapMethod::Tree: return g == 0 && n >= 3;
    case SwapMethod::Exponential: return n == 1 && g >= 1;
    case SwapMethod::Hand: return (g == 1 && n == 1) || (g == 1 && n == 2) || (g == 2 && n == 1);
  }
  return false;
}

RationalFunction SwapEngine::compute(int g, int n, SwapMethod method) {
  if (!applies(method, g, n)) {
    throw ContractViolation("method " + to_string(method) + " does not apply to (" + std::to_string(g) + "," +
                            std::to_string(n) + ")");
  }
  switch (method) {
    case SwapMethod::Graphs: return swap_correlator(g, n);
    case SwapMethod::Operator: return via_operator_series(g, n);
    case SwapMethod::Tree: return genus0_tree(n);
    case SwapMethod::Exponential: return n1_exponential(g);
    case SwapMethod::Hand: return hand_coded(g, n);
  }
  return {};
}

RationalFunction SwapEngine::hand_coded(int g, int n, std::vector<RationalFunction>* parts) {
  if (!applies(SwapMethod::Hand, g, n)) throw ContractViolation("no hand-coded formula for this (g, n)");
  require(dependencies(g, n));
  using F = FactoredFunction;
  const Var z1 = var_zi(1);
  const Var z2 = var_zi(2);
  const F xp1 = xprime_y_factored(z1);
  const F y1(curve().y().renamed(var_z(), z1));
  const F hat1(regularized_diagonal_w02(curve(), z1));
  const Rational r24 = ratio(1, 24);
  const Rational half = ratio(1, 2);
  std::vector<F> p;

  if (g == 1 && n == 1) {
    const F dy_dx = F(derivative_in(curve(), Branch::Y, z1)) * inv_xprime(z1);
    p.push_back(-(xp1 * F(correlator(1, 1))));
    p.push_back(-dy(dy_dx, z1, 3).scaled(r24));
    p.push_back(dy(xp1 * hat1, z1).scaled(half));
  } else if (g == 1 && n == 2) {
    const F xp2 = xprime_y_factored(z2);
    const F y2(curve().y().renamed(var_z(), z2));
    const F hat2(regularized_diagonal_w02(curve(), z2));
    const RationalFunction w03 = correlator(0, 3);
    const F w02(correlator(0, 2));
    const F w11(correlator(1, 1));
    const F w11b(correlator(1, 1).renamed(z1, z2));
    const F xx = xp1 * xp2;
    F t1 = xx * F(correlator(1, 2));
    t1 -= dy(xx * w11 * w02, z1);
    t1 -= dy(xx * w11b * w02, z2);
    t1 -= dy(xx * dx(y1, z1, 2) * w02, z1, 3).scaled(r24);
    t1 -= dy(xx * dx(y2, z2, 2) * w02, z2, 3).scaled(r24);
    t1 += dy(xx * dx(w02, z1, 2), z1, 2).scaled(r24);
    t1 += dy(xx * dx(w02, z2, 2), z2, 2).scaled(r24);
    p.push_back(t1);
    // W_{0,3}(z1, z1, z2) and W_{0,3}(z1, z2, z2).
    const F w_112(w03.substitute(z2, RationalFunction::variable(z1)).substitute(var_zi(3), RationalFunction::variable(z2)));
    const F w_122(w03.substitute(var_zi(3), RationalFunction::variable(z2)));
    p.push_back(-(dy(xx * w_112, z1) + dy(xx * w_122, z2)).scaled(half));
    p.push_back((dy(xx * w02 * hat1, z1, 2) + dy(xx * w02 * hat2, z2, 2)).scaled(half));
    p.push_back(dy(dy(xx * w02 * w02, z1), z2).scaled(half));
  } else {
    const F w11(correlator(1, 1));
    const F yxx = dx(y1, z1, 2);
    const F w12diag(correlator(1, 2).substitute(z2, RationalFunction::variable(z1)));
    const F w03diag(
        correlator(0, 3).substitute(z2, RationalFunction::variable(z1)).substitute(var_zi(3), RationalFunction::variable(z1)));
    const F hat_xx(dx(F(regularized_w02_two_point(curve(), z1, z2)), z2, 2)
                       .to_function()
                       .substitute(z2, RationalFunction::variable(z1)));
    F t1 = -(xp1 * F(correlator(2, 1)));
    t1 -= dy(xp1 * dx(w11, z1, 2), z1, 2).scaled(r24);
    t1 -= dy(xp1 * dx(y1, z1, 4), z1, 4).scaled(ratio(1, 1920));
    t1 += dy(xp1 * w11 * w11, z1).scaled(half);
    t1 += dy(xp1 * w11 * yxx, z1, 3).scaled(r24);
    t1 += dy(xp1 * yxx * yxx, z1, 5).scaled(ratio(1, 1152));
    p.push_back(t1);
    F t2 = dy(xp1 * w12diag, z1).scaled(half);
    t2 -= dy(xp1 * hat1 * w11, z1, 2).scaled(half);
    t2 -= dy(xp1 * hat1 * yxx, z1, 4).scaled(ratio(1, 48));
    t2 += dy(xp1 * hat_xx, z1, 3).scaled(r24);
    p.push_back(t2);
    p.push_back(dy(xp1 * hat1 * hat1, z1, 3).scaled(ratio(1, 8)));
    p.push_back(-dy(xp1 * w03diag, z1, 2).scaled(ratio(1, 6)));
  }
  F total;
  for (const auto& t : p) total += t;
  if (parts) {
    parts->clear();
    for (const auto& t : p) parts->push_back(t.to_function());
  }
  return total.to_function();
}

}  // namespace trxy
