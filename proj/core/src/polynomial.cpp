#include "trxy/polynomial.hpp"

#include <algorithm>
#include <limits>

#include "trxy/errors.hpp"

namespace trxy {

namespace {

const std::array<std::string, kMaxVars>& registry() {
  static const std::array<std::string, kMaxVars> names = [] {
    std::array<std::string, kMaxVars> n;
    int k = 0;
    n[k++] = "z";
    for (int i = 1; i <= kMaxIndexedZ; ++i) n[k++] = "z" + std::to_string(i);
    n[k++] = "q";
    for (int i = 1; i <= kMaxSlots; ++i) n[k++] = "s" + std::to_string(i);
    return n;
  }();
  return names;
}

bool term_greater(const Term& a, const Term& b) { return compare(a.m, b.m) > 0; }

// Combine a list sorted descending by monomial, summing equal monomials.
std::vector<Term> combine_sorted(std::vector<Term>& in) {
  std::vector<Term> out;
  out.reserve(in.size());
  for (auto& t : in) {
    if (!out.empty() && out.back().m == t.m) {
      out.back().c += t.c;
      if (out.back().c == 0) out.pop_back();
    } else if (t.c != 0) {
      out.push_back(std::move(t));
    }
  }
  return out;
}

// Merge a + s*b for sorted term lists.
std::vector<Term> merge_add(const std::vector<Term>& a, const std::vector<Term>& b,
                            const Rational* scale, const Monomial* shift) {
  std::vector<Term> out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  Term tb;
  auto load_b = [&](std::size_t k) {
    tb.m = shift ? monomial_mul(b[k].m, *shift) : b[k].m;
    tb.c = scale ? Rational(b[k].c * *scale) : b[k].c;
  };
  if (j < b.size()) load_b(j);
  while (i < a.size() || j < b.size()) {
    if (j >= b.size()) {
      out.push_back(a[i++]);
      continue;
    }
    if (i >= a.size()) {
      out.push_back(tb);
      if (++j < b.size()) load_b(j);
      continue;
    }
    int c = compare(a[i].m, tb.m);
    if (c > 0) {
      out.push_back(a[i++]);
    } else if (c < 0) {
      out.push_back(tb);
      if (++j < b.size()) load_b(j);
    } else {
      Rational s = a[i].c + tb.c;
      if (s != 0) out.push_back(Term{a[i].m, s});
      ++i;
      if (++j < b.size()) load_b(j);
    }
  }
  return out;
}

}  // namespace

Var var_z() { return 0; }
Var var_zi(int i) {
  if (i < 1 || i > kMaxIndexedZ) throw ContractViolation("z index out of range");
  return i;
}
Var var_q() { return kMaxIndexedZ + 1; }
Var var_slot(int i) {
  if (i < 1 || i > kMaxSlots) throw ContractViolation("slot index out of range");
  return kMaxIndexedZ + 1 + i;
}
const std::string& var_name(Var v) { return registry().at(static_cast<std::size_t>(v)); }
std::optional<Var> find_var(std::string_view name) {
  const auto& r = registry();
  for (int i = 0; i < kMaxVars; ++i) {
    if (r[static_cast<std::size_t>(i)] == name) return i;
  }
  return std::nullopt;
}

VarMask Monomial::mask() const {
  VarMask m = 0;
  for (int i = 0; i < kMaxVars; ++i) {
    if (e[static_cast<std::size_t>(i)]) m |= VarMask(1) << i;
  }
  return m;
}

bool Monomial::divides(const Monomial& other) const {
  if (deg > other.deg) return false;
  for (std::size_t i = 0; i < kMaxVars; ++i) {
    if (e[i] > other.e[i]) return false;
  }
  return true;
}

Monomial monomial_mul(const Monomial& a, const Monomial& b) {
  Monomial r;
  for (std::size_t i = 0; i < kMaxVars; ++i) {
    unsigned s = unsigned(a.e[i]) + b.e[i];
    if (s > std::numeric_limits<std::uint16_t>::max()) throw Error("exponent overflow");
    r.e[i] = static_cast<std::uint16_t>(s);
  }
  r.deg = a.deg + b.deg;
  return r;
}

Monomial monomial_div(const Monomial& a, const Monomial& b) {
  Monomial r;
  for (std::size_t i = 0; i < kMaxVars; ++i) r.e[i] = static_cast<std::uint16_t>(a.e[i] - b.e[i]);
  r.deg = a.deg - b.deg;
  return r;
}

Monomial monomial_gcd(const Monomial& a, const Monomial& b) {
  Monomial r;
  for (std::size_t i = 0; i < kMaxVars; ++i) {
    r.e[i] = std::min(a.e[i], b.e[i]);
    r.deg += r.e[i];
  }
  return r;
}

int compare(const Monomial& a, const Monomial& b) {
  if (a.deg != b.deg) return a.deg > b.deg ? 1 : -1;
  for (std::size_t i = 0; i < kMaxVars; ++i) {
    if (a.e[i] != b.e[i]) return a.e[i] > b.e[i] ? 1 : -1;
  }
  return 0;
}

Polynomial::Polynomial(const Rational& c) {
  if (c != 0) terms_.push_back(Term{Monomial{}, c});
}

Polynomial Polynomial::variable(Var v) {
  Monomial m;
  m.e[static_cast<std::size_t>(v)] = 1;
  m.deg = 1;
  return monomial(m, 1);
}

Polynomial Polynomial::monomial(const Monomial& m, const Rational& c) {
  Polynomial p;
  if (c != 0) p.terms_.push_back(Term{m, c});
  return p;
}

Polynomial Polynomial::from_terms(std::vector<Term> terms) {
  std::sort(terms.begin(), terms.end(), term_greater);
  Polynomial p;
  p.terms_ = combine_sorted(terms);
  return p;
}

bool Polynomial::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_[0].m.is_one());
}

Rational Polynomial::constant_value() const {
  if (!is_constant()) throw ContractViolation("polynomial is not constant");
  return terms_.empty() ? Rational(0) : terms_[0].c;
}

VarMask Polynomial::var_mask() const {
  VarMask m = 0;
  for (const auto& t : terms_) m |= t.m.mask();
  return m;
}

int Polynomial::degree(Var v) const {
  int d = terms_.empty() ? -1 : 0;
  for (const auto& t : terms_) d = std::max<int>(d, t.m.e[static_cast<std::size_t>(v)]);
  return d;
}

int Polynomial::total_degree() const {
  return terms_.empty() ? -1 : static_cast<int>(terms_.front().m.deg);
}

Monomial Polynomial::monomial_content() const {
  if (terms_.empty()) return Monomial{};
  Monomial m = terms_[0].m;
  for (const auto& t : terms_) {
    if (m.is_one()) break;
    m = monomial_gcd(m, t.m);
  }
  return m;
}

Polynomial Polynomial::operator-() const {
  Polynomial r = *this;
  for (auto& t : r.terms_) t.c = -t.c;
  return r;
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
  if (o.is_zero()) return *this;
  if (is_zero()) return *this = o;
  terms_ = merge_add(terms_, o.terms_, nullptr, nullptr);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
  if (o.is_zero()) return *this;
  static const Rational minus_one(-1);
  terms_ = merge_add(terms_, o.terms_, &minus_one, nullptr);
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.is_zero() || b.is_zero()) return {};
  if (a.size() == 1) return b.times_monomial(a.terms_[0].m, a.terms_[0].c);
  if (b.size() == 1) return a.times_monomial(b.terms_[0].m, b.terms_[0].c);
  std::vector<Term> prods;
  prods.reserve(a.size() * b.size());
  for (const auto& x : a.terms_) {
    for (const auto& y : b.terms_) prods.push_back(Term{monomial_mul(x.m, y.m), x.c * y.c});
  }
  std::sort(prods.begin(), prods.end(), term_greater);
  Polynomial r;
  r.terms_ = combine_sorted(prods);
  return r;
}

Polynomial& Polynomial::operator*=(const Polynomial& o) { return *this = *this * o; }

bool operator==(const Polynomial& a, const Polynomial& b) {
  if (a.terms_.size() != b.terms_.size()) return false;
  for (std::size_t i = 0; i < a.terms_.size(); ++i) {
    if (!(a.terms_[i].m == b.terms_[i].m) || a.terms_[i].c != b.terms_[i].c) return false;
  }
  return true;
}

Polynomial Polynomial::scaled(const Rational& c) const {
  if (c == 0) return {};
  Polynomial r = *this;
  for (auto& t : r.terms_) t.c *= c;
  return r;
}

Polynomial Polynomial::times_monomial(const Monomial& m, const Rational& c) const {
  if (c == 0) return {};
  Polynomial r;
  r.terms_.reserve(terms_.size());
  for (const auto& t : terms_) r.terms_.push_back(Term{monomial_mul(t.m, m), t.c * c});
  return r;
}

Polynomial Polynomial::pow(unsigned k) const {
  Polynomial result(1);
  Polynomial base = *this;
  while (k) {
    if (k & 1u) result *= base;
    k >>= 1u;
    if (k) base = base * base;
  }
  return result;
}

Polynomial Polynomial::derivative(Var v) const {
  std::vector<Term> out;
  const auto iv = static_cast<std::size_t>(v);
  for (const auto& t : terms_) {
    if (t.m.e[iv] == 0) continue;
    Term d{t.m, t.c * t.m.e[iv]};
    d.m.e[iv]--;
    d.m.deg--;
    out.push_back(std::move(d));
  }
  return from_terms(std::move(out));
}

Polynomial Polynomial::renamed(const std::array<Var, kMaxVars>& perm) const {
  std::vector<Term> out;
  out.reserve(terms_.size());
  for (const auto& t : terms_) {
    Term r{Monomial{}, t.c};
    for (std::size_t i = 0; i < kMaxVars; ++i) {
      if (t.m.e[i]) r.m.e[static_cast<std::size_t>(perm[i])] += t.m.e[i];
    }
    r.m.deg = t.m.deg;
    out.push_back(std::move(r));
  }
  return from_terms(std::move(out));
}

Polynomial Polynomial::renamed(Var from, Var to) const {
  std::array<Var, kMaxVars> perm{};
  for (int i = 0; i < kMaxVars; ++i) perm[static_cast<std::size_t>(i)] = i;
  perm[static_cast<std::size_t>(from)] = to;
  return renamed(perm);
}

std::vector<Polynomial> Polynomial::coefficients_in(Var v) const {
  const auto iv = static_cast<std::size_t>(v);
  int d = degree(v);
  if (d < 0) return {};
  std::vector<std::vector<Term>> buckets(static_cast<std::size_t>(d) + 1);
  for (const auto& t : terms_) {
    Term r = t;
    unsigned k = r.m.e[iv];
    r.m.e[iv] = 0;
    r.m.deg -= k;
    buckets[k].push_back(std::move(r));
  }
  std::vector<Polynomial> out;
  out.reserve(buckets.size());
  for (auto& b : buckets) out.push_back(from_terms(std::move(b)));
  return out;
}

Polynomial Polynomial::from_coefficients(Var v, const std::vector<Polynomial>& coeffs) {
  std::vector<Term> out;
  const auto iv = static_cast<std::size_t>(v);
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    for (const auto& t : coeffs[k].terms_) {
      Term r = t;
      r.m.e[iv] = static_cast<std::uint16_t>(r.m.e[iv] + k);
      r.m.deg += static_cast<std::uint32_t>(k);
      out.push_back(std::move(r));
    }
  }
  return from_terms(std::move(out));
}

Polynomial Polynomial::substitute(Var v, const Polynomial& value) const {
  auto c = coefficients_in(v);
  if (c.empty()) return {};
  Polynomial r = c.back();
  for (std::size_t k = c.size() - 1; k-- > 0;) r = r * value + c[k];
  return r;
}

Polynomial Polynomial::substitute(Var v, const Rational& value) const {
  return substitute(v, Polynomial(value));
}

Polynomial Polynomial::taylor_shift(Var v, const Rational& c) const {
  if (c == 0) return *this;
  return substitute(v, variable(v) + Polynomial(c));
}

Polynomial Polynomial::primitive() const {
  if (terms_.empty()) return {};
  Integer den_lcm = 1, num_gcd = 0;
  for (const auto& t : terms_) {
    mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), t.c.get_den_mpz_t());
    mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), t.c.get_num_mpz_t());
  }
  Rational s(den_lcm, num_gcd);
  s.canonicalize();
  if (terms_.front().c < 0) s = -s;
  return scaled(s);
}

Polynomial Polynomial::monic() const {
  if (terms_.empty()) return {};
  if (terms_.front().c == 1) return *this;
  return scaled(Rational(1) / terms_.front().c);
}

std::string Polynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::string s;
  bool first = true;
  for (const auto& t : terms_) {
    Rational c = t.c;
    if (!first) s += c < 0 ? "-" : "+";
    else if (c < 0) s += "-";
    first = false;
    Rational a = abs(c);
    bool need_coeff = t.m.is_one() || a != 1;
    if (need_coeff) s += trxy::to_string(a);
    bool first_factor = !need_coeff;
    for (std::size_t i = 0; i < kMaxVars; ++i) {
      if (!t.m.e[i]) continue;
      if (!first_factor) s += "*";
      first_factor = false;
      s += var_name(static_cast<Var>(i));
      if (t.m.e[i] > 1) s += "^" + std::to_string(t.m.e[i]);
    }
  }
  return s;
}

std::optional<Polynomial> divide_exact(const Polynomial& a, const Polynomial& b) {
  if (b.is_zero()) throw DivisionByZero("polynomial division by zero");
  if (a.is_zero()) return Polynomial{};
  if (b.is_constant()) return a.scaled(Rational(1) / b.constant_value());
  if (b.total_degree() > a.total_degree()) return std::nullopt;
  if (b.is_monomial()) {
    const auto& bt = b.terms()[0];
    if (!bt.m.divides(a.monomial_content())) return std::nullopt;
    std::vector<Term> out;
    out.reserve(a.size());
    Rational inv = Rational(1) / bt.c;
    for (const auto& t : a.terms()) out.push_back(Term{monomial_div(t.m, bt.m), t.c * inv});
    return Polynomial::from_terms(std::move(out));
  }
  VarMask bm = b.var_mask();
  if ((bm & ~a.var_mask()) != 0) return std::nullopt;
  for (int v = 0; v < kMaxVars; ++v) {
    if ((bm >> v) & 1u) {
      if (b.degree(v) > a.degree(v)) return std::nullopt;
    }
  }
  // Long division in a variable where b has a constant leading coefficient.
  for (int v = 0; v < kMaxVars; ++v) {
    if (!((bm >> v) & 1u)) continue;
    std::vector<Polynomial> bc = b.coefficients_in(v);
    if (!bc.back().is_constant()) continue;
    std::vector<Polynomial> rc = a.coefficients_in(v);
    const std::size_t db = bc.size() - 1;
    const Rational inv = Rational(1) / bc.back().constant_value();
    std::vector<Polynomial> qc(rc.size() - db);
    for (std::size_t k = rc.size(); k-- > db;) {
      if (rc[k].is_zero()) continue;
      Polynomial q = rc[k].scaled(inv);
      for (std::size_t j = 0; j < db; ++j) {
        if (!bc[j].is_zero()) rc[k - db + j] -= q * bc[j];
      }
      qc[k - db] = std::move(q);
    }
    for (std::size_t k = 0; k < db; ++k) {
      if (!rc[k].is_zero()) return std::nullopt;
    }
    return Polynomial::from_coefficients(v, qc);
  }
  const Term& lb = b.terms().front();
  Rational inv_lb = Rational(1) / lb.c;
  std::vector<Term> rem = a.terms();
  std::vector<Term> quot;
  const auto& bt = b.terms();
  while (!rem.empty()) {
    const Term& lr = rem.front();
    if (!lb.m.divides(lr.m)) return std::nullopt;
    Monomial qm = monomial_div(lr.m, lb.m);
    Rational qc = lr.c * inv_lb;
    Rational neg = -qc;
    quot.push_back(Term{qm, qc});
    rem = merge_add(rem, bt, &neg, &qm);
  }
  Polynomial q = Polynomial::from_terms(std::move(quot));
  return q;
}

Polynomial exact_quotient(const Polynomial& a, const Polynomial& b) {
  auto q = divide_exact(a, b);
  if (!q) throw ContractViolation("inexact polynomial division");
  return *q;
}

namespace {

using UPoly = std::vector<Polynomial>;  // coefficient of v^k at index k

void trim(UPoly& p) {
  while (!p.empty() && p.back().is_zero()) p.pop_back();
}

Polynomial gcd_rec(const Polynomial& a, const Polynomial& b);

Polynomial content_of(const UPoly& p) {
  Polynomial g;
  for (const auto& c : p) {
    if (c.is_zero()) continue;
    g = g.is_zero() ? c.primitive() : gcd_rec(g, c);
    if (g.is_constant()) return Polynomial(1);
  }
  return g.primitive();
}

UPoly divide_coeffs(const UPoly& p, const Polynomial& d) {
  UPoly r;
  r.reserve(p.size());
  for (const auto& c : p) r.push_back(exact_quotient(c, d));
  return r;
}

UPoly pseudo_remainder(const UPoly& a, const UPoly& b) {
  UPoly r = a;
  const std::size_t n = b.size() - 1;
  const Polynomial& lcb = b.back();
  int e = static_cast<int>(a.size()) - static_cast<int>(b.size()) + 1;
  trim(r);
  while (!r.empty() && r.size() - 1 >= n) {
    Polynomial lcr = r.back();
    std::size_t shift = r.size() - 1 - n;
    for (auto& c : r) c = c * lcb;
    for (std::size_t k = 0; k <= n; ++k) r[k + shift] -= lcr * b[k];
    r.pop_back();
    trim(r);
    --e;
  }
  if (e > 0 && !r.empty()) {
    Polynomial f = lcb.pow(static_cast<unsigned>(e));
    for (auto& c : r) c = c * f;
  }
  return r;
}

std::vector<Rational> dense_univariate(const Polynomial& p, Var v) {
  std::vector<Rational> out(static_cast<std::size_t>(std::max(0, p.degree(v))) + 1);
  for (const auto& t : p.terms()) out[t.m.e[static_cast<std::size_t>(v)]] = t.c;
  return out;
}

Polynomial univariate_gcd(const Polynomial& pa, const Polynomial& pb, Var v) {
  auto a = dense_univariate(pa, v);
  auto b = dense_univariate(pb, v);
  auto trim_r = [](std::vector<Rational>& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
  };
  trim_r(a);
  trim_r(b);
  if (a.size() < b.size()) std::swap(a, b);
  while (!b.empty()) {
    Rational inv = Rational(1) / b.back();
    for (auto& c : b) c *= inv;
    while (a.size() >= b.size() && !a.empty()) {
      Rational lc = a.back();
      std::size_t shift = a.size() - b.size();
      for (std::size_t k = 0; k < b.size(); ++k) a[k + shift] -= lc * b[k];
      a.pop_back();
      trim_r(a);
    }
    std::swap(a, b);
  }
  std::vector<Term> terms;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (a[k] == 0) continue;
    Monomial m;
    m.e[static_cast<std::size_t>(v)] = static_cast<std::uint16_t>(k);
    m.deg = static_cast<std::uint32_t>(k);
    terms.push_back(Term{m, a[k]});
  }
  return Polynomial::from_terms(std::move(terms));
}

Polynomial subresultant_gcd(const Polynomial& pa, const Polynomial& pb, Var v) {
  UPoly a = pa.coefficients_in(v);
  UPoly b = pb.coefficients_in(v);
  if (a.size() < b.size()) std::swap(a, b);
  Polynomial ca = content_of(a), cb = content_of(b);
  Polynomial d = gcd_rec(ca, cb);
  a = divide_coeffs(a, ca);
  b = divide_coeffs(b, cb);
  Polynomial g(1), h(1);
  while (true) {
    int delta = static_cast<int>(a.size()) - static_cast<int>(b.size());
    UPoly r = pseudo_remainder(a, b);
    if (r.empty()) break;
    if (r.size() == 1) {
      b = UPoly{Polynomial(1)};
      break;
    }
    a = std::move(b);
    b = divide_coeffs(r, g * h.pow(static_cast<unsigned>(delta)));
    g = a.back();
    if (delta == 0) {
      // h unchanged
    } else if (delta == 1) {
      h = g;
    } else {
      h = exact_quotient(g.pow(static_cast<unsigned>(delta)), h.pow(static_cast<unsigned>(delta - 1)));
    }
  }
  Polynomial cb2 = content_of(b);
  b = divide_coeffs(b, cb2);
  return (d * Polynomial::from_coefficients(v, b)).primitive();
}

// gcd up to a rational unit.
Polynomial gcd_rec(const Polynomial& a0, const Polynomial& b0) {
  if (a0.is_zero()) return b0.primitive();
  if (b0.is_zero()) return a0.primitive();
  if (a0.is_constant() || b0.is_constant()) return Polynomial(1);
  Monomial ma = a0.monomial_content(), mb = b0.monomial_content();
  Monomial m = monomial_gcd(ma, mb);
  Polynomial mono = Polynomial::monomial(m, 1);
  Polynomial a = ma.is_one() ? a0 : exact_quotient(a0, Polynomial::monomial(ma, 1));
  Polynomial b = mb.is_one() ? b0 : exact_quotient(b0, Polynomial::monomial(mb, 1));
  if (a.is_constant() || b.is_constant()) return mono;

  // Variables present in only one argument: the gcd divides every
  // coefficient with respect to such a variable.
  while (true) {
    VarMask va = a.var_mask(), vb = b.var_mask();
    if ((va & vb) == 0) return mono;
    if (va == vb) break;
    VarMask only_a = va & ~vb, only_b = vb & ~va;
    if (only_a) {
      Var v = __builtin_ctz(only_a);
      a = content_of(a.coefficients_in(v));
      if (a.is_constant()) return mono;
    }
    if (only_b) {
      Var v = __builtin_ctz(only_b);
      b = content_of(b.coefficients_in(v));
      if (b.is_constant()) return mono;
    }
  }

  if (a.size() >= b.size()) {
    if (divide_exact(a, b)) return (mono * b).primitive();
  } else {
    if (divide_exact(b, a)) return (mono * a).primitive();
  }

  VarMask vars = a.var_mask();
  Var best = -1;
  int best_deg = std::numeric_limits<int>::max();
  int nvars = 0;
  for (Var v = 0; v < kMaxVars; ++v) {
    if (!((vars >> v) & 1u)) continue;
    ++nvars;
    int d = std::max(a.degree(v), b.degree(v));
    if (d < best_deg) {
      best_deg = d;
      best = v;
    }
  }
  Polynomial g = nvars == 1 ? univariate_gcd(a, b, best) : subresultant_gcd(a, b, best);
  return (mono * g).primitive();
}

}  // namespace

Polynomial gcd(const Polynomial& a, const Polynomial& b) {
  if (a.is_zero() && b.is_zero()) return {};
  return gcd_rec(a, b).monic();
}

}  // namespace trxy
