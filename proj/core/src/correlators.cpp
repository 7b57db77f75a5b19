#include "trxy/correlators.hpp"

#include <bit>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "trxy/errors.hpp"
#include "trxy/expression.hpp"

namespace trxy {

namespace {

RationalFunction rv(Var v) { return RationalFunction::variable(v); }

// Expansion through t^order; a leading order above `order` yields the zero series.
LaurentSeries expand(const RationalFunction& f, Var v, const Rational& center, int order) {
  try {
    return series_expand(f, v, center, std::numeric_limits<int>::min() / 4, order);
  } catch (const EmptySeriesError&) {
    return LaurentSeries::zero(order);
  }
}

std::array<Var, kMaxVars> identity_perm() {
  std::array<Var, kMaxVars> p{};
  for (int i = 0; i < kMaxVars; ++i) p[static_cast<std::size_t>(i)] = i;
  return p;
}

// Stored W_{g,m}(z1..zm) with z1 -> first and z_{k+2} -> rest[k].
RationalFunction place(const RationalFunction& w, Var first, const std::vector<Var>& rest) {
  auto perm = identity_perm();
  perm[static_cast<std::size_t>(var_zi(1))] = first;
  for (std::size_t k = 0; k < rest.size(); ++k) perm[static_cast<std::size_t>(var_zi(static_cast<int>(k) + 2))] = rest[k];
  return w.renamed(perm);
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace

RationalFunction bergman(Var a, Var b) { return (rv(a) - rv(b)).pow(-2); }

RationalFunction derivative_in(const SpectralCurve& curve, Branch b, Var v) {
  return curve.function(b).derivative(var_z()).renamed(var_z(), v);
}

RationalFunction regularized_w02_two_point(const SpectralCurve& curve, Var a, Var b) {
  RationalFunction xa = curve.x().renamed(var_z(), a);
  RationalFunction xb = curve.x().renamed(var_z(), b);
  RationalFunction w02 = bergman(a, b) / (derivative_in(curve, Branch::X, a) * derivative_in(curve, Branch::X, b));
  return w02 - (xa - xb).pow(-2);
}

RationalFunction regularized_diagonal_w02(const SpectralCurve& curve, Var at) {
  // x(z + s) - x(z) = sum_{k>=1} x_k s^k with x_k = x^{(k)}(z)/k!.
  const int order = 4;
  std::vector<RationalFunction> xk;  // x_1 .. x_{order}
  RationalFunction d = curve.x().renamed(var_z(), at);
  Rational fact = 1;
  for (int k = 1; k <= order; ++k) {
    d = d.derivative(at);
    fact *= k;
    xk.push_back(d.scaled(Rational(1) / fact));
  }
  // D(s) = (x(z+s) - x(z))/s, E(s) = x'(z+s)
  std::vector<RationalFunction> dc, ec;
  for (int k = 0; k < order - 1; ++k) {
    dc.push_back(xk[static_cast<std::size_t>(k)]);
    ec.push_back(xk[static_cast<std::size_t>(k)].scaled(k + 1));
  }
  LaurentSeries D(0, order - 2, dc), E(0, order - 2, ec);
  LaurentSeries term1 = E.inverse().scaled(xk[0].inverse()).shifted(-2);
  LaurentSeries term2 = D.pow(-2).shifted(-2);
  return (term1 - term2).coeff(0);
}

SpectralCurve swap_roles(const SpectralCurve& curve) {
  SpectralCurve s = curve.swapped();
  ramification_points(s, Branch::X);
  return s;
}

struct CorrelatorTable::Local {
  Rational alpha;
  LaurentSeries t;       // the local parameter itself
  LaurentSeries s;       // sigma(alpha + t) - alpha
  LaurentSeries r;       // x'(q) / (y(q) - y(sigma(q)))
  LaurentSeries diag02;  // W_{0,2}(q, sigma(q))
  LaurentSeries inv_xp_t, inv_xp_s;  // 1/x' at alpha + t and at alpha + s
};

namespace {

LaurentSeries constant_series(const Rational& c, int prec) { return LaurentSeries::from_rationals(0, prec, {c}); }

Rational rational_coeff(const LaurentSeries& s, int k) {
  RationalFunction c = s.coeff(k);
  return c.is_zero() ? Rational(0) : c.constant_value();
}

// Numerator over a product of powers of (v - beta_j), beta_j the ramification points.
// Stable correlators have no other poles, so sums never need a gcd.
struct PoleFraction {
  Polynomial num;
  std::vector<int> e;  // exponent of (v - beta_j) at index v * np + j
};

class PoleAlgebra {
 public:
  explicit PoleAlgebra(const std::vector<RamificationPoint>& ram) {
    for (const auto& p : ram) pts_.push_back(p.location);
  }

  std::size_t np() const { return pts_.size(); }
  const Rational& point(std::size_t j) const { return pts_[j]; }
  std::size_t index(Var v, std::size_t j) const { return static_cast<std::size_t>(v) * np() + j; }
  std::vector<int> none() const { return std::vector<int>(static_cast<std::size_t>(kMaxVars) * np(), 0); }

  PoleFraction constant(const Polynomial& p) const { return {p, none()}; }

  const Polynomial& linear_power(std::size_t idx, int d) {
    auto key = std::make_pair(idx, d);
    auto it = pow_.find(key);
    if (it != pow_.end()) return it->second;
    Var v = static_cast<Var>(idx / np());
    Polynomial lin = Polynomial::variable(v) - Polynomial(pts_[idx % np()]);
    return pow_.emplace(key, lin.pow(static_cast<unsigned>(d))).first->second;
  }

  void accumulate(PoleFraction& acc, const PoleFraction& b) {
    if (b.num.is_zero()) return;
    if (acc.num.is_zero()) {
      acc = b;
      return;
    }
    if (acc.e == b.e) {
      acc.num += b.num;
      return;
    }
    Polynomial pa(1), pb(1);
    for (std::size_t i = 0; i < acc.e.size(); ++i) {
      if (acc.e[i] < b.e[i]) {
        pa = pa * linear_power(i, b.e[i] - acc.e[i]);
        acc.e[i] = b.e[i];
      } else if (b.e[i] < acc.e[i]) {
        pb = pb * linear_power(i, acc.e[i] - b.e[i]);
      }
    }
    acc.num = acc.num * pa + b.num * pb;
  }

  static PoleFraction mul(const PoleFraction& a, const PoleFraction& b) {
    if (a.num.is_zero() || b.num.is_zero()) return {};
    PoleFraction r{a.num * b.num, a.e};
    for (std::size_t i = 0; i < r.e.size(); ++i) r.e[i] += b.e[i];
    return r;
  }

  PoleFraction from_function(const RationalFunction& f) {
    PoleFraction r{f.num(), none()};
    Polynomial den = f.den();
    for (Var v = 0; v < kMaxVars; ++v) {
      if (!((den.var_mask() >> v) & 1u)) continue;
      for (std::size_t j = 0; j < np(); ++j) {
        while (den.substitute(v, pts_[j]).is_zero()) {
          den = divide_linear(den, v, pts_[j]);
          ++r.e[index(v, j)];
        }
      }
    }
    if (!den.is_constant()) throw Error("correlator has a pole away from the ramification points: " + f.to_string());
    r.num = r.num.scaled(Rational(1) / den.constant_value());
    return r;
  }

  RationalFunction to_function(PoleFraction f) {
    if (f.num.is_zero()) return RationalFunction();
    Polynomial den(1);
    for (std::size_t i = 0; i < f.e.size(); ++i) {
      if (f.e[i] <= 0) continue;
      Var v = static_cast<Var>(i / np());
      const Rational& b = pts_[i % np()];
      while (f.e[i] > 0 && f.num.substitute(v, b).is_zero()) {
        f.num = divide_linear(f.num, v, b);
        --f.e[i];
      }
      if (f.e[i] > 0) den = den * linear_power(i, f.e[i]);
    }
    return RationalFunction::from_coprime(std::move(f.num), std::move(den));
  }

  // p / (v - b) for p vanishing at v = b.
  static Polynomial divide_linear(const Polynomial& p, Var v, const Rational& b) {
    auto c = p.coefficients_in(v);
    std::vector<Polynomial> q(c.size() > 1 ? c.size() - 1 : 0);
    Polynomial carry;
    for (std::size_t k = c.size(); k-- > 1;) {
      carry = c[k] + carry.scaled(b);
      q[k - 1] = carry;
    }
    return Polynomial::from_coefficients(v, q);
  }

 private:
  std::vector<Rational> pts_;
  std::map<std::pair<std::size_t, int>, Polynomial> pow_;
};

// Truncated Laurent series in t with pole-fraction coefficients, exact through t^prec.
struct PoleSeries {
  int val = 0;
  int prec = 0;
  std::vector<PoleFraction> c;

  const PoleFraction* at(int k) const {
    if (k > prec) throw TruncationError("pole series coefficient beyond precision", prec);
    if (k < val || k >= val + static_cast<int>(c.size())) return nullptr;
    const PoleFraction& f = c[static_cast<std::size_t>(k - val)];
    return f.num.is_zero() ? nullptr : &f;
  }
};

PoleSeries make_series(int prec, std::map<int, PoleFraction> coeffs) {
  PoleSeries s;
  s.prec = prec;
  std::erase_if(coeffs, [](const auto& kv) { return kv.second.num.is_zero(); });
  if (coeffs.empty()) {
    s.val = prec + 1;
    return s;
  }
  s.val = coeffs.begin()->first;
  for (int k = s.val; k <= coeffs.rbegin()->first; ++k) {
    auto it = coeffs.find(k);
    s.c.push_back(it == coeffs.end() ? PoleFraction{} : std::move(it->second));
  }
  return s;
}

// Coefficient of t^j in a * b.
PoleFraction product_coeff(PoleAlgebra& alg, const PoleSeries& a, const PoleSeries& b, int j) {
  PoleFraction acc;
  if (a.c.empty() || b.c.empty()) return acc;
  if (j > a.prec + b.val || j > b.prec + a.val) {
    throw TruncationError("product coefficient beyond precision", std::min(a.prec + b.val, b.prec + a.val));
  }
  for (int i = a.val; i <= j - b.val; ++i) {
    const PoleFraction* x = a.at(i);
    if (!x) continue;
    const PoleFraction* y = b.at(j - i);
    if (!y) continue;
    alg.accumulate(acc, PoleAlgebra::mul(*x, *y));
  }
  return acc;
}

struct Substitution {
  Var v;
  const LaurentSeries* d;  // v = alpha + d(t), d of valuation >= 1
};

// f with each substituted variable replaced, as a series in t through t^upto.
PoleSeries expand_fraction(PoleAlgebra& alg, const PoleFraction& f, const std::vector<Substitution>& subs,
                           const Rational& alpha, int upto) {
  std::vector<int> rest = f.e;
  int prec = upto;
  for (const auto& sub : subs) prec = std::max(prec, sub.d->precision());
  LaurentSeries den = constant_series(1, prec);
  Polynomial num = f.num;
  for (const auto& sub : subs) {
    for (std::size_t j = 0; j < alg.np(); ++j) {
      int e = rest[alg.index(sub.v, j)];
      if (e == 0) continue;
      rest[alg.index(sub.v, j)] = 0;
      if (alg.point(j) == alpha) {
        den = den * sub.d->pow(-e);
      } else {
        den = den * (constant_series(alpha - alg.point(j), prec) + *sub.d).pow(-e);
      }
    }
    num = num.taylor_shift(sub.v, alpha);
  }
  std::vector<std::pair<std::vector<int>, Polynomial>> parts{{{}, num}};
  for (const auto& sub : subs) {
    std::vector<std::pair<std::vector<int>, Polynomial>> next;
    for (auto& [exps, p] : parts) {
      auto cs = p.coefficients_in(sub.v);
      for (std::size_t a = 0; a < cs.size(); ++a) {
        if (cs[a].is_zero()) continue;
        auto e = exps;
        e.push_back(static_cast<int>(a));
        next.emplace_back(std::move(e), std::move(cs[a]));
      }
    }
    parts = std::move(next);
  }
  std::vector<std::map<int, LaurentSeries>> powers(subs.size());
  auto power = [&](std::size_t i, int a) -> const LaurentSeries& {
    auto it = powers[i].find(a);
    if (it != powers[i].end()) return it->second;
    return powers[i].emplace(a, subs[i].d->pow(a)).first->second;
  };
  std::map<int, Polynomial> acc;
  for (const auto& [exps, p] : parts) {
    int low = den.valuation();
    for (std::size_t i = 0; i < subs.size(); ++i) low += exps[i] * subs[i].d->valuation();
    if (low > upto) continue;
    LaurentSeries term = den;
    for (std::size_t i = 0; i < subs.size(); ++i) {
      if (exps[i] > 0) term = term * power(i, exps[i]);
    }
    for (int k = term.valuation(); k <= upto; ++k) {
      Rational c = rational_coeff(term, k);
      if (c != 0) acc[k] += p.scaled(c);
    }
  }
  std::map<int, PoleFraction> out;
  for (auto& [k, p] : acc) out[k] = PoleFraction{std::move(p), rest};
  return make_series(upto, std::move(out));
}

PoleSeries rational_series(PoleAlgebra& alg, const LaurentSeries& s, int upto) {
  std::map<int, PoleFraction> out;
  for (int k = s.valuation(); k <= upto; ++k) {
    Rational c = rational_coeff(s, k);
    if (c != 0) out[k] = alg.constant(Polynomial(c));
  }
  return make_series(upto, std::move(out));
}

}  // namespace

CorrelatorTable::CorrelatorTable(SpectralCurve curve)
    : curve_(std::move(curve)), ram_(ramification_points(curve_, Branch::X)) {}

const CorrelatorTable::Local& CorrelatorTable::local(std::size_t point, int order) {
  auto key = std::make_pair(point, order);
  auto it = locals_.find(key);
  if (it != locals_.end()) return *it->second;
  auto L = std::make_shared<Local>();
  const RamificationPoint& pt = ram_[point];
  L->alpha = pt.location;
  const int ps = 2 * order + 16;
  LaurentSeries sigma = local_involution(curve_, pt, ps);
  L->t = LaurentSeries::from_rationals(1, ps, {1});
  L->s = sigma - constant_series(pt.location, ps);
  RationalFunction xprime = curve_.x().derivative(var_z());
  LaurentSeries xp = expand(xprime, var_z(), pt.location, ps);
  LaurentSeries yq = expand(curve_.y(), var_z(), pt.location, ps);
  LaurentSeries ys = series_compose(yq, L->s);
  L->r = xp * (yq - ys).inverse();
  L->inv_xp_t = expand(xprime.inverse(), var_z(), pt.location, ps);
  L->inv_xp_s = series_compose(L->inv_xp_t, L->s);
  L->diag02 = (L->t - L->s).pow(-2) * L->inv_xp_t * L->inv_xp_s;
  locals_[key] = L;
  return *L;
}

RationalFunction CorrelatorTable::compute(int g, int n, int order) {
  PoleAlgebra alg(ram_);
  const Var z0 = var_zi(n);
  std::vector<Var> I;
  for (int i = 1; i < n; ++i) I.push_back(var_zi(i));
  const Var q = var_q();
  const int ni = static_cast<int>(I.size());
  const unsigned full = (1u << ni) - 1u;

  // 1/x'(v) = Q(v) / (lead * prod_j (v - alpha_j)).
  RationalFunction xprime = curve_.x().derivative(var_z());
  Polynomial lin_prod(1);
  for (std::size_t j = 0; j < alg.np(); ++j) {
    lin_prod = lin_prod * (Polynomial::variable(var_z()) - Polynomial(alg.point(j)));
  }
  if (xprime.num() != lin_prod.scaled(xprime.num().leading_coeff())) {
    throw AssumptionViolated("zeros of dx are not the simple ramification points");
  }
  auto inverse_xprime = [&](Var v) {
    PoleFraction f{xprime.den().renamed(var_z(), v).scaled(Rational(1) / xprime.num().leading_coeff()), alg.none()};
    for (std::size_t j = 0; j < alg.np(); ++j) f.e[alg.index(v, j)] = 1;
    return f;
  };

  std::map<std::pair<int, unsigned>, PoleFraction> placed;
  auto lower = [&](int h, unsigned mask) -> const PoleFraction& {
    auto key = std::make_pair(h, mask);
    auto it = placed.find(key);
    if (it != placed.end()) return it->second;
    std::vector<Var> J;
    for (int i = 0; i < ni; ++i) {
      if (mask & (1u << i)) J.push_back(I[static_cast<std::size_t>(i)]);
    }
    RationalFunction w = place(get(h, 1 + static_cast<int>(J.size())), q, J);
    return placed.emplace(key, alg.from_function(w)).first->second;
  };

  PoleFraction total;
  for (std::size_t p = 0; p < ram_.size(); ++p) {
    const Local& L = local(p, order);
    const Rational& a = L.alpha;

    // W_{0,2}(alpha + d, z_i) for the single index in `mask`.
    auto w02_series = [&](unsigned mask, const LaurentSeries& d, const LaurentSeries& inv_xp) {
      Var zi = 0;
      for (int i = 0; i < ni; ++i) {
        if (mask & (1u << i)) zi = I[static_cast<std::size_t>(i)];
      }
      // 1/(alpha + d - z_i)^2 = sum_k (k+1) d^k / (z_i - alpha)^{k+2}
      Polynomial lin = Polynomial::variable(zi) - Polynomial(a);
      std::map<int, PoleFraction> tc;
      LaurentSeries dk = constant_series(1, d.precision());
      std::vector<LaurentSeries> dpow;
      for (int k = 0; k <= order + 1; ++k) {
        dpow.push_back(dk);
        dk = dk * d;
      }
      for (int m = 0; m <= order + 1; ++m) {
        Polynomial num;
        Polynomial lp(1);
        for (int k = m; k >= 0; --k) {
          Rational c = rational_coeff(dpow[static_cast<std::size_t>(k)], m);
          if (c != 0) num += lp.scaled(c * (k + 1));
          lp = lp * lin;
        }
        PoleFraction f{num, alg.none()};
        f.e[alg.index(zi, p)] = m + 2;
        tc[m] = std::move(f);
      }
      PoleSeries T = make_series(order + 1, std::move(tc));
      PoleSeries X = rational_series(alg, inv_xp, order + 1);
      PoleFraction scale = inverse_xprime(zi);
      std::map<int, PoleFraction> out;
      for (int j = T.val + X.val; j <= order; ++j) out[j] = PoleAlgebra::mul(product_coeff(alg, T, X, j), scale);
      return make_series(order, std::move(out));
    };

    auto at_point = [&](int h, unsigned mask, const LaurentSeries& d, const LaurentSeries& inv_xp) {
      if (h == 0 && std::popcount(mask) == 1) return w02_series(mask, d, inv_xp);
      return expand_fraction(alg, lower(h, mask), {{q, &d}}, a, order);
    };
    std::map<std::pair<int, unsigned>, PoleSeries> left_cache, right_cache;
    auto left = [&](int h, unsigned mask) -> const PoleSeries& {
      auto key = std::make_pair(h, mask);
      auto it = left_cache.find(key);
      if (it != left_cache.end()) return it->second;
      return left_cache.emplace(key, at_point(h, mask, L.t, L.inv_xp_t)).first->second;
    };
    auto right = [&](int h, unsigned mask) -> const PoleSeries& {
      auto key = std::make_pair(h, mask);
      auto it = right_cache.find(key);
      if (it != right_cache.end()) return it->second;
      return right_cache.emplace(key, at_point(h, mask, L.s, L.inv_xp_s)).first->second;
    };

    // Kernel (1/2)(1/(z0 - q) - 1/(z0 - sigma(q))) x'(q)/(y(q) - y(sigma(q))).
    Polynomial lin0 = Polynomial::variable(z0) - Polynomial(a);
    std::vector<LaurentSeries> spow{constant_series(1, L.s.precision())};
    for (int k = 1; k <= order; ++k) spow.push_back(spow.back() * L.s);
    std::map<int, PoleFraction> ka;
    for (int m = 1; m <= order; ++m) {
      Polynomial num(1);
      Polynomial lp(1);
      for (int k = m; k >= 0; --k) {
        Rational c = rational_coeff(spow[static_cast<std::size_t>(k)], m);
        if (c != 0) num -= lp.scaled(c);
        lp = lp * lin0;
      }
      PoleFraction f{num, alg.none()};
      f.e[alg.index(z0, p)] = m + 1;
      ka[m] = std::move(f);
    }
    PoleSeries KA = make_series(order, std::move(ka));
    PoleSeries R = rational_series(alg, L.r.scaled(RationalFunction(Rational(1, 2))), order);
    std::map<int, PoleFraction> kc;
    for (int m = KA.val + R.val; m <= order; ++m) kc[m] = product_coeff(alg, KA, R, m);
    PoleSeries K = make_series(order, std::move(kc));
    if (K.c.empty()) continue;
    const int need = -1 - K.val;

    std::map<int, PoleFraction> bracket;
    auto add_terms = [&](const PoleSeries& s) {
      for (int j = s.val; j <= need; ++j) {
        if (const PoleFraction* f = s.at(j)) alg.accumulate(bracket[j], *f);
      }
    };
    if (g >= 1) {
      if (g - 1 == 0 && n + 1 == 2) {
        add_terms(rational_series(alg, L.diag02, need));
      } else {
        std::vector<Var> rest{var_slot(1)};
        rest.insert(rest.end(), I.begin(), I.end());
        PoleFraction w = alg.from_function(place(get(g - 1, n + 1), q, rest));
        add_terms(expand_fraction(alg, w, {{q, &L.t}, {var_slot(1), &L.s}}, a, need));
      }
    }
    for (int h = 0; h <= g; ++h) {
      for (unsigned mask = 0; mask <= full; ++mask) {
        if (h == 0 && mask == 0) continue;
        if (h == g && mask == full) continue;
        const PoleSeries& l = left(h, mask);
        const PoleSeries& r = right(g - h, full & ~mask);
        if (l.c.empty() || r.c.empty()) continue;
        for (int j = l.val + r.val; j <= need; ++j) alg.accumulate(bracket[j], product_coeff(alg, l, r, j));
      }
    }
    if (bracket.empty()) continue;
    const int low = bracket.begin()->first;
    if (-1 - low > K.prec) throw TruncationError("kernel window too small", K.prec);
    for (const auto& [j, b] : bracket) {
      if (const PoleFraction* k = K.at(-1 - j)) alg.accumulate(total, PoleAlgebra::mul(*k, b));
    }
  }
  if (total.num.is_zero()) return RationalFunction();
  return alg.to_function(PoleAlgebra::mul(total, inverse_xprime(z0)));
}


RationalFunction CorrelatorTable::compute_direct(int g, int n, int extra_order) {
  std::lock_guard<std::recursive_mutex> lock(mu_);
  if (g < 0 || n < 1) throw ContractViolation("correlators need g >= 0 and n >= 1");
  if (n > kMaxIndexedZ - 1) throw ContractViolation("too many points");
  if (g == 0 && n == 1) return curve_.y().renamed(var_z(), var_zi(1));
  if (g == 0 && n == 2) {
    return bergman(var_zi(1), var_zi(2)) /
           (derivative_in(curve_, Branch::X, var_zi(1)) * derivative_in(curve_, Branch::X, var_zi(2)));
  }
  int order = 6 * g + 2 * n + 4 + extra_order;
  for (int attempt = 0; attempt < 8; ++attempt, order += 4) {
    try {
      RationalFunction w = compute(g, n, order);
      if (extra_order == 0) orders_[{g, n}] = order;
      return w;
    } catch (const TruncationError&) {
      continue;
    }
  }
  throw Error("residue computation did not reach the required order for (" + std::to_string(g) + "," +
              std::to_string(n) + ")");
}

RationalFunction CorrelatorTable::get(int g, int n) {
  std::lock_guard<std::recursive_mutex> lock(mu_);
  auto it = entries_.find({g, n});
  if (it != entries_.end()) return it->second;
  RationalFunction w = compute_direct(g, n);
  entries_[{g, n}] = w;
  if (cache_dir_ && 2 * g - 2 + n > 0) save_cache();
  return w;
}

std::optional<RationalFunction> CorrelatorTable::find(int g, int n) const {
  std::lock_guard<std::recursive_mutex> lock(mu_);
  auto it = entries_.find({g, n});
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

void CorrelatorTable::store(int g, int n, RationalFunction w) {
  std::lock_guard<std::recursive_mutex> lock(mu_);
  entries_[{g, n}] = std::move(w);
}

std::vector<std::pair<int, int>> CorrelatorTable::keys() const {
  std::lock_guard<std::recursive_mutex> lock(mu_);
  std::vector<std::pair<int, int>> out;
  for (const auto& [k, v] : entries_) out.push_back(k);
  return out;
}

std::optional<int> CorrelatorTable::working_order(int g, int n) const {
  std::lock_guard<std::recursive_mutex> lock(mu_);
  auto it = orders_.find({g, n});
  if (it == orders_.end()) return std::nullopt;
  return it->second;
}

std::filesystem::path CorrelatorTable::cache_file(const std::filesystem::path& dir, const SpectralCurve& curve) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(curve.canonical_key())));
  return dir / ("curve-" + std::string(buf) + ".cache");
}

void CorrelatorTable::attach_cache(const std::filesystem::path& dir) {
  std::lock_guard<std::recursive_mutex> lock(mu_);
  cache_dir_ = dir;
  load_cache();
}

void CorrelatorTable::load_cache() {
  std::ifstream in(cache_file(*cache_dir_, curve_));
  if (!in) return;
  std::string line;
  if (!std::getline(in, line) || line != "# trxy correlator cache") return;
  if (!std::getline(in, line) || line != std::string("engine ") + kEngineVersion) return;
  if (!std::getline(in, line) || line != "curve " + curve_.canonical_key()) return;
  while (std::getline(in, line)) {
    int g = 0, n = 0;
    char tail = 0;
    if (std::sscanf(line.c_str(), "(%d,%d)%c", &g, &n, &tail) != 3 || tail != ':') continue;
    auto colon = line.find(": ");
    if (colon == std::string::npos || g < 0 || n < 1 || n >= kMaxIndexedZ) continue;
    VarMask allowed = 0;
    for (int i = 1; i <= n; ++i) allowed |= VarMask(1) << var_zi(i);
    try {
      entries_[{g, n}] = parse_rational_function(line.substr(colon + 2), allowed);
    } catch (const Error&) {
      continue;
    }
  }
}

void CorrelatorTable::save_cache() const {
  std::lock_guard<std::recursive_mutex> lock(mu_);
  if (!cache_dir_) return;
  std::filesystem::create_directories(*cache_dir_);
  auto path = cache_file(*cache_dir_, curve_);
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    out << "# trxy correlator cache\n";
    out << "engine " << kEngineVersion << "\n";
    out << "curve " << curve_.canonical_key() << "\n";
    for (const auto& [k, w] : entries_) {
      if (2 * k.first - 2 + k.second <= 0) continue;
      out << "(" << k.first << "," << k.second << "): " << w.to_string() << "\n";
    }
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace trxy
