#include "trxy/factored.hpp"

#include <algorithm>

#include "trxy/errors.hpp"

namespace trxy {

namespace {

using Factor = FactoredFunction::Factor;

Factor make_factor(const Polynomial& p, int e) { return Factor{p.monic(), e, p.total_degree() == 1}; }

std::vector<Var> vars_of(const Polynomial& p) {
  std::vector<Var> out;
  VarMask m = p.var_mask();
  for (Var v = 0; v < kMaxVars; ++v) {
    if ((m >> v) & 1u) out.push_back(v);
  }
  return out;
}

// Writes r as a constant times a product of single-variable polynomials, if possible.
std::optional<std::vector<Polynomial>> univariate_split(const Polynomial& r) {
  const std::vector<Var> vars = vars_of(r);
  for (int attempt = 0; attempt < 4; ++attempt) {
    std::vector<Polynomial> parts;
    Polynomial product(1);
    bool ok = true;
    for (Var v : vars) {
      Polynomial u = r;
      long value = 2 + attempt * 7;
      for (Var w : vars) {
        if (w != v) u = u.substitute(w, Rational(value++));
      }
      if (u.is_zero()) {
        ok = false;
        break;
      }
      if (u.is_constant()) continue;
      parts.push_back(u.monic());
      product *= parts.back();
    }
    if (!ok) continue;
    auto q = divide_exact(r, product);
    if (q && q->is_constant()) return parts;
    return std::nullopt;
  }
  return std::nullopt;
}

void merge_factor(std::vector<Factor>& fs, const Factor& f) {
  for (auto& g : fs) {
    if (g.p == f.p) {
      g.e += f.e;
      return;
    }
  }
  fs.push_back(f);
}

// gcd(num, p) up to a unit. For p in one variable v, the gcd also divides
// num with the other variables fixed, which usually certifies coprimality
// without a multivariate gcd.
Polynomial common_factor(const Polynomial& num, const Polynomial& p) {
  const std::vector<Var> pv = vars_of(p);
  if (pv.size() == 1) {
    for (int attempt = 0; attempt < 3; ++attempt) {
      Polynomial u = num;
      long value = 3 + 11 * attempt;
      for (Var w : vars_of(num)) {
        if (w != pv[0]) u = u.substitute(w, Rational(value++));
      }
      if (u.is_zero()) continue;
      Polynomial g0 = gcd(u, p);
      if (g0.is_constant()) return Polynomial(1);
      if (divide_exact(num, g0)) return g0;
    }
  }
  return gcd(num, p);
}

}  // namespace

std::vector<Factor> split_denominator(const Polynomial& den) {
  if (den.is_zero()) throw DivisionByZero("zero denominator");
  std::vector<Factor> out;
  Polynomial r = den;
  const Monomial content = r.monomial_content();
  if (!content.is_one()) {
    for (Var v = 0; v < kMaxVars; ++v) {
      if (content.e[static_cast<std::size_t>(v)]) out.push_back(make_factor(Polynomial::variable(v), content.e[static_cast<std::size_t>(v)]));
    }
    r = exact_quotient(r, Polynomial::monomial(content, Rational(1)));
  }
  const std::vector<Var> vars = vars_of(r);
  for (std::size_t i = 0; i < vars.size(); ++i) {
    for (std::size_t j = i + 1; j < vars.size(); ++j) {
      const Polynomial diff = (Polynomial::variable(vars[i]) - Polynomial::variable(vars[j])).monic();
      int k = 0;
      while (auto q = divide_exact(r, diff)) {
        r = *q;
        ++k;
      }
      if (k) out.push_back(make_factor(diff, k));
    }
  }
  if (r.is_constant()) return out;
  if (vars_of(r).size() == 1) {
    out.push_back(make_factor(r, 1));
    return out;
  }
  if (auto parts = univariate_split(r)) {
    for (const auto& p : *parts) merge_factor(out, make_factor(p, 1));
  } else {
    out.push_back(make_factor(r, 1));
  }
  return out;
}

FactoredFunction::FactoredFunction(const RationalFunction& f) : FactoredFunction(quotient(f.num(), f.den())) {}

FactoredFunction FactoredFunction::quotient(const Polynomial& num, const Polynomial& den) {
  FactoredFunction r;
  r.den_ = split_denominator(den);
  if (num.is_zero()) {
    r.den_.clear();
    return r;
  }
  Polynomial product(1);
  for (const auto& fa : r.den_) product *= fa.p.pow(static_cast<unsigned>(fa.e));
  // den = c * product with c its leading coefficient ratio.
  r.num_ = num.scaled(product.leading_coeff() / den.leading_coeff());
  return r;
}

FactoredFunction FactoredFunction::operator-() const {
  FactoredFunction r = *this;
  r.num_ = -r.num_;
  return r;
}

FactoredFunction operator*(const FactoredFunction& a, const FactoredFunction& b) {
  FactoredFunction r;
  if (a.is_zero() || b.is_zero()) return r;
  r.num_ = a.num_ * b.num_;
  r.den_ = a.den_;
  for (const auto& f : b.den_) merge_factor(r.den_, f);
  return r;
}

FactoredFunction operator+(const FactoredFunction& a, const FactoredFunction& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  FactoredFunction r;
  r.den_ = a.den_;
  for (auto& f : r.den_) {
    for (const auto& g : b.den_) {
      if (g.p == f.p) f.e = std::max(f.e, g.e);
    }
  }
  for (const auto& g : b.den_) {
    bool found = false;
    for (const auto& f : r.den_) found = found || f.p == g.p;
    if (!found) r.den_.push_back(g);
  }
  auto lift = [&](const FactoredFunction& x) {
    Polynomial n = x.num_;
    for (const auto& f : r.den_) {
      int have = 0;
      for (const auto& g : x.den_) {
        if (g.p == f.p) have = g.e;
      }
      if (f.e > have) n *= f.p.pow(static_cast<unsigned>(f.e - have));
    }
    return n;
  };
  r.num_ = lift(a) + lift(b);
  if (r.num_.is_zero()) r.den_.clear();
  return r;
}

FactoredFunction FactoredFunction::scaled(const Rational& c) const {
  if (c == 0) return {};
  FactoredFunction r = *this;
  r.num_ = r.num_.scaled(c);
  return r;
}

FactoredFunction FactoredFunction::derivative(Var v) const {
  if (is_zero()) return {};
  std::vector<std::size_t> dep;
  for (std::size_t k = 0; k < den_.size(); ++k) {
    if ((den_[k].p.var_mask() >> v) & 1u) dep.push_back(k);
  }
  FactoredFunction r;
  r.den_ = den_;
  Polynomial all(1);
  for (auto k : dep) all *= den_[k].p;
  Polynomial n = num_.derivative(v) * all;
  for (auto k : dep) {
    Polynomial others(1);
    for (auto j : dep) {
      if (j != k) others *= den_[j].p;
    }
    n -= (num_ * den_[k].p.derivative(v) * others).scaled(Rational(den_[k].e));
    ++r.den_[k].e;
  }
  r.num_ = std::move(n);
  if (r.num_.is_zero()) r.den_.clear();
  return r;
}

RationalFunction FactoredFunction::to_function() const {
  if (is_zero()) return {};
  Polynomial num = num_;
  std::vector<Factor> work(den_.rbegin(), den_.rend());
  std::vector<Factor> done;
  while (!work.empty()) {
    Factor f = work.back();
    work.pop_back();
    while (f.e > 0) {
      auto q = divide_exact(num, f.p);
      if (!q) break;
      num = *q;
      --f.e;
    }
    if (f.e == 0) continue;
    if (!f.linear) {
      Polynomial g = common_factor(num, f.p);
      if (!g.is_constant()) {
        num = exact_quotient(num, g);
        Polynomial rest = exact_quotient(f.p, g);
        if (f.e > 1) work.push_back(make_factor(g, f.e - 1));
        work.push_back(make_factor(rest, f.e));
        continue;
      }
    }
    merge_factor(done, f);
  }
  Polynomial den(1);
  for (const auto& f : done) den *= f.p.pow(static_cast<unsigned>(f.e));
  return RationalFunction::from_coprime(std::move(num), std::move(den));
}

}  // namespace trxy
