#pragma once

#include <ostream>
#include <string>

#include "trxy/polynomial.hpp"

namespace trxy {

// Canonical quotient of polynomials: gcd(num, den) = 1 and the denominator's
// leading graded-lex coefficient is 1, so structural equality is equality.
class RationalFunction {
 public:
  RationalFunction() : den_(1) {}
  RationalFunction(const Rational& c) : num_(c), den_(1) {}  // NOLINT(google-explicit-constructor)
  RationalFunction(long c) : RationalFunction(Rational(c)) {}  // NOLINT(google-explicit-constructor)
  RationalFunction(const Polynomial& p) : num_(p), den_(1) {}  // NOLINT(google-explicit-constructor)
  RationalFunction(const Polynomial& num, const Polynomial& den);

  static RationalFunction variable(Var v) { return RationalFunction(Polynomial::variable(v)); }
  // Caller guarantees gcd(num, den) = 1; only the leading coefficient is normalized.
  static RationalFunction from_coprime(Polynomial num, Polynomial den) {
    return make_canonical(std::move(num), std::move(den));
  }

  const Polynomial& num() const { return num_; }
  const Polynomial& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_constant() const { return num_.is_constant() && den_.is_constant(); }
  bool is_polynomial() const { return den_.is_constant(); }
  Rational constant_value() const { return num_.constant_value(); }
  VarMask var_mask() const { return num_.var_mask() | den_.var_mask(); }

  RationalFunction operator-() const;
  RationalFunction& operator+=(const RationalFunction& o) { return *this = *this + o; }
  RationalFunction& operator-=(const RationalFunction& o) { return *this = *this - o; }
  RationalFunction& operator*=(const RationalFunction& o) { return *this = *this * o; }
  RationalFunction& operator/=(const RationalFunction& o) { return *this = *this / o; }
  friend RationalFunction operator+(const RationalFunction& a, const RationalFunction& b);
  friend RationalFunction operator-(const RationalFunction& a, const RationalFunction& b);
  friend RationalFunction operator*(const RationalFunction& a, const RationalFunction& b);
  friend RationalFunction operator/(const RationalFunction& a, const RationalFunction& b);
  friend bool operator==(const RationalFunction& a, const RationalFunction& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }

  RationalFunction scaled(const Rational& c) const;
  RationalFunction inverse() const;
  RationalFunction pow(int k) const;
  RationalFunction derivative(Var v) const;
  // perm must be injective on the variables that occur.
  RationalFunction renamed(const std::array<Var, kMaxVars>& perm) const;
  RationalFunction renamed(Var from, Var to) const;
  RationalFunction substitute(Var v, const RationalFunction& value) const;
  RationalFunction substitute(Var v, const Rational& value) const;

  // "(num)/(den)", or the bare numerator when den = 1.
  std::string to_string() const;

 private:
  struct Normalized {};
  RationalFunction(Polynomial num, Polynomial den, Normalized) : num_(std::move(num)), den_(std::move(den)) {}
  static RationalFunction make_canonical(Polynomial num, Polynomial den);

  Polynomial num_;
  Polynomial den_;
};

RationalFunction differentiate(const RationalFunction& f, Var v);

inline std::ostream& operator<<(std::ostream& os, const RationalFunction& f) { return os << f.to_string(); }

}  // namespace trxy
