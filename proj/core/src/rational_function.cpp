#include "trxy/rational_function.hpp"

#include "trxy/errors.hpp"

namespace trxy {

RationalFunction RationalFunction::make_canonical(Polynomial num, Polynomial den) {
  if (den.is_zero()) throw DivisionByZero("rational function with zero denominator");
  if (num.is_zero()) return RationalFunction();
  const Rational& lc = den.leading_coeff();
  if (lc != 1) {
    Rational inv = Rational(1) / lc;
    num = num.scaled(inv);
    den = den.scaled(inv);
  }
  return RationalFunction(std::move(num), std::move(den), Normalized{});
}

RationalFunction::RationalFunction(const Polynomial& num, const Polynomial& den) {
  if (den.is_zero()) throw DivisionByZero("rational function with zero denominator");
  Polynomial g = gcd(num, den);
  if (g.is_constant()) {
    *this = make_canonical(num, den);
  } else {
    *this = make_canonical(exact_quotient(num, g), exact_quotient(den, g));
  }
}

RationalFunction RationalFunction::operator-() const {
  return RationalFunction(-num_, den_, Normalized{});
}

RationalFunction operator+(const RationalFunction& a, const RationalFunction& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  if (a.den_ == b.den_) {
    if (a.den_.is_constant()) return RationalFunction(a.num_ + b.num_, a.den_, RationalFunction::Normalized{});
    return RationalFunction(a.num_ + b.num_, a.den_);
  }
  Polynomial g = gcd(a.den_, b.den_);
  if (g.is_constant()) {
    return RationalFunction::make_canonical(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
  }
  Polynomial ad = exact_quotient(a.den_, g);
  Polynomial bd = exact_quotient(b.den_, g);
  Polynomial num = a.num_ * bd + b.num_ * ad;
  if (num.is_zero()) return RationalFunction();
  Polynomial h = gcd(num, g);
  if (!h.is_constant()) {
    num = exact_quotient(num, h);
    g = exact_quotient(g, h);
  }
  return RationalFunction::make_canonical(std::move(num), ad * bd * g);
}

RationalFunction operator-(const RationalFunction& a, const RationalFunction& b) { return a + (-b); }

RationalFunction operator*(const RationalFunction& a, const RationalFunction& b) {
  if (a.is_zero() || b.is_zero()) return RationalFunction();
  if (a.is_constant()) return b.scaled(a.constant_value());
  if (b.is_constant()) return a.scaled(b.constant_value());
  Polynomial g1 = gcd(a.num_, b.den_);
  Polynomial g2 = gcd(b.num_, a.den_);
  Polynomial an = g1.is_constant() ? a.num_ : exact_quotient(a.num_, g1);
  Polynomial bd = g1.is_constant() ? b.den_ : exact_quotient(b.den_, g1);
  Polynomial bn = g2.is_constant() ? b.num_ : exact_quotient(b.num_, g2);
  Polynomial ad = g2.is_constant() ? a.den_ : exact_quotient(a.den_, g2);
  return RationalFunction::make_canonical(an * bn, ad * bd);
}

RationalFunction operator/(const RationalFunction& a, const RationalFunction& b) { return a * b.inverse(); }

RationalFunction RationalFunction::scaled(const Rational& c) const {
  if (c == 0) return RationalFunction();
  return RationalFunction(num_.scaled(c), den_, Normalized{});
}

RationalFunction RationalFunction::inverse() const {
  if (is_zero()) throw DivisionByZero("inverse of zero rational function");
  return make_canonical(den_, num_);
}

RationalFunction RationalFunction::pow(int k) const {
  if (k < 0) return inverse().pow(-k);
  return RationalFunction(num_.pow(static_cast<unsigned>(k)), den_.pow(static_cast<unsigned>(k)), Normalized{});
}

RationalFunction RationalFunction::derivative(Var v) const {
  const auto bit = VarMask(1) << v;
  if (!(num_.var_mask() & bit) && !(den_.var_mask() & bit)) return RationalFunction();
  if (den_.is_constant()) return RationalFunction(num_.derivative(v), den_, Normalized{});
  // d(n/d) = (n' d - n d') / d^2; divide out g = gcd(d, d') first.
  Polynomial dd = den_.derivative(v);
  Polynomial g = gcd(den_, dd);
  Polynomial d_over_g = exact_quotient(den_, g);
  Polynomial dd_over_g = exact_quotient(dd, g);
  Polynomial num = num_.derivative(v) * d_over_g - num_ * dd_over_g;
  return RationalFunction(num, den_ * d_over_g);
}

RationalFunction RationalFunction::renamed(const std::array<Var, kMaxVars>& perm) const {
  return make_canonical(num_.renamed(perm), den_.renamed(perm));
}

RationalFunction RationalFunction::renamed(Var from, Var to) const {
  return RationalFunction(num_.renamed(from, to), den_.renamed(from, to));
}

namespace {

// Homogenized substitution: p(v -> a/b) * b^deg.
Polynomial homogenized(const Polynomial& p, Var v, const Polynomial& a, const Polynomial& b, int deg) {
  auto c = p.coefficients_in(v);
  Polynomial r;
  Polynomial apow(1);
  std::vector<Polynomial> bpows{Polynomial(1)};
  for (int k = 1; k <= deg; ++k) bpows.push_back(bpows.back() * b);
  for (std::size_t k = 0; k < c.size(); ++k) {
    if (!c[k].is_zero()) r += c[k] * apow * bpows[static_cast<std::size_t>(deg) - k];
    apow = apow * a;
  }
  return r;
}

}  // namespace

RationalFunction RationalFunction::substitute(Var v, const RationalFunction& value) const {
  const auto bit = VarMask(1) << v;
  if (!(var_mask() & bit)) return *this;
  if (value.is_polynomial()) {
    Polynomial p = value.num_.scaled(Rational(1) / value.den_.constant_value());
    return RationalFunction(num_.substitute(v, p), den_.substitute(v, p));
  }
  int dn = std::max(num_.degree(v), 0), dd = std::max(den_.degree(v), 0);
  Polynomial n = homogenized(num_, v, value.num_, value.den_, dn);
  Polynomial d = homogenized(den_, v, value.num_, value.den_, dd);
  if (dn > dd) d = d * value.den_.pow(static_cast<unsigned>(dn - dd));
  if (dd > dn) n = n * value.den_.pow(static_cast<unsigned>(dd - dn));
  return RationalFunction(n, d);
}

RationalFunction RationalFunction::substitute(Var v, const Rational& value) const {
  return RationalFunction(num_.substitute(v, value), den_.substitute(v, value));
}

std::string RationalFunction::to_string() const {
  if (den_.is_constant()) return num_.to_string();
  return "(" + num_.to_string() + ")/(" + den_.to_string() + ")";
}

RationalFunction differentiate(const RationalFunction& f, Var v) { return f.derivative(v); }

}  // namespace trxy
