#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "trxy/rational.hpp"

namespace trxy {

// Variables come from a fixed registry so that every polynomial shares one
// exponent layout and one term order:
//   z, z1 .. z12, q, s1 .. s10
// Earlier registry entries compare larger in the graded-lex order.
constexpr int kMaxVars = 24;
constexpr int kMaxIndexedZ = 12;
constexpr int kMaxSlots = 10;
using Var = int;
using VarMask = std::uint32_t;

Var var_z();
Var var_zi(int i);    // 1-based: z1 .. z12
Var var_q();
Var var_slot(int i);  // 1-based: s1 .. s10
const std::string& var_name(Var v);
std::optional<Var> find_var(std::string_view name);

struct Monomial {
  std::array<std::uint16_t, kMaxVars> e{};
  std::uint32_t deg = 0;

  bool is_one() const { return deg == 0; }
  VarMask mask() const;
  bool divides(const Monomial& other) const;
  friend bool operator==(const Monomial& a, const Monomial& b) { return a.e == b.e; }
};

Monomial monomial_mul(const Monomial& a, const Monomial& b);
Monomial monomial_div(const Monomial& a, const Monomial& b);  // requires b | a
Monomial monomial_gcd(const Monomial& a, const Monomial& b);

// Graded lexicographic: <0, 0, >0.
int compare(const Monomial& a, const Monomial& b);

struct Term {
  Monomial m;
  Rational c;
};

class Polynomial {
 public:
  Polynomial() = default;
  Polynomial(const Rational& c);  // NOLINT(google-explicit-constructor)
  Polynomial(long c) : Polynomial(Rational(c)) {}  // NOLINT(google-explicit-constructor)

  static Polynomial variable(Var v);
  static Polynomial monomial(const Monomial& m, const Rational& c);
  // Terms in any order, duplicates allowed; zeros dropped.
  static Polynomial from_terms(std::vector<Term> terms);

  const std::vector<Term>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  bool is_monomial() const { return terms_.size() == 1; }
  Rational constant_value() const;  // requires is_constant()
  const Rational& leading_coeff() const { return terms_.front().c; }
  const Monomial& leading_monomial() const { return terms_.front().m; }
  VarMask var_mask() const;
  int degree(Var v) const;
  int total_degree() const;
  Monomial monomial_content() const;

  Polynomial operator-() const;
  Polynomial& operator+=(const Polynomial& o);
  Polynomial& operator-=(const Polynomial& o);
  Polynomial& operator*=(const Polynomial& o);
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend bool operator==(const Polynomial& a, const Polynomial& b);

  Polynomial scaled(const Rational& c) const;
  Polynomial times_monomial(const Monomial& m, const Rational& c) const;
  Polynomial pow(unsigned k) const;
  Polynomial derivative(Var v) const;

  // Simultaneous renaming: variable i becomes perm[i].
  Polynomial renamed(const std::array<Var, kMaxVars>& perm) const;
  Polynomial renamed(Var from, Var to) const;

  // Coefficients c_k with p = sum c_k v^k; no c_k involves v.
  std::vector<Polynomial> coefficients_in(Var v) const;
  static Polynomial from_coefficients(Var v, const std::vector<Polynomial>& coeffs);

  Polynomial substitute(Var v, const Polynomial& value) const;
  Polynomial substitute(Var v, const Rational& value) const;
  // p(v) -> p(v + c)
  Polynomial taylor_shift(Var v, const Rational& c) const;

  // Integer-cleared primitive form with positive leading coefficient.
  Polynomial primitive() const;
  Polynomial monic() const;

  std::string to_string() const;

 private:
  std::vector<Term> terms_;  // strictly descending graded-lex, nonzero coefficients
};

// Exact multivariate division; nullopt when b does not divide a.
std::optional<Polynomial> divide_exact(const Polynomial& a, const Polynomial& b);
// Same, but throws ContractViolation when the division is not exact.
Polynomial exact_quotient(const Polynomial& a, const Polynomial& b);

// Monic gcd (leading graded-lex coefficient 1); gcd(0, 0) = 0.
Polynomial gcd(const Polynomial& a, const Polynomial& b);

inline std::ostream& operator<<(std::ostream& os, const Polynomial& p) { return os << p.to_string(); }

}  // namespace trxy
