#pragma once

#include <utility>
#include <vector>

#include "trxy/rational_function.hpp"

namespace trxy {

// Numerator over a product of monic factors p_k^{e_k}, with no common factors
// removed. Sums, products and derivatives stay gcd-free; to_function() performs
// the single reduction to canonical form.
class FactoredFunction {
 public:
  struct Factor {
    Polynomial p;  // monic, non-constant
    int e = 0;
    bool linear = false;
  };

  FactoredFunction() = default;
  FactoredFunction(const Rational& c) : num_(c) {}  // NOLINT(google-explicit-constructor)
  FactoredFunction(long c) : num_(Rational(c)) {}   // NOLINT(google-explicit-constructor)
  // Splits the denominator into monomials, differences z_a - z_b and
  // single-variable factors where it can; anything else stays one factor.
  explicit FactoredFunction(const RationalFunction& f);
  // num / den for any nonzero den, without a gcd up front.
  static FactoredFunction quotient(const Polynomial& num, const Polynomial& den);

  bool is_zero() const { return num_.is_zero(); }
  const Polynomial& num() const { return num_; }
  const std::vector<Factor>& factors() const { return den_; }

  FactoredFunction operator-() const;
  FactoredFunction& operator+=(const FactoredFunction& o) { return *this = *this + o; }
  FactoredFunction& operator-=(const FactoredFunction& o) { return *this = *this - o; }
  FactoredFunction& operator*=(const FactoredFunction& o) { return *this = *this * o; }
  friend FactoredFunction operator+(const FactoredFunction& a, const FactoredFunction& b);
  friend FactoredFunction operator-(const FactoredFunction& a, const FactoredFunction& b) { return a + (-b); }
  friend FactoredFunction operator*(const FactoredFunction& a, const FactoredFunction& b);

  FactoredFunction scaled(const Rational& c) const;
  FactoredFunction derivative(Var v) const;

  RationalFunction to_function() const;

 private:
  Polynomial num_;
  std::vector<Factor> den_;
};

// Denominator factors of a polynomial in the sense of FactoredFunction.
std::vector<FactoredFunction::Factor> split_denominator(const Polynomial& den);

}  // namespace trxy
