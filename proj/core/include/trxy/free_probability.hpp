#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "trxy/correlators.hpp"

namespace trxy {

// Order used for series that are exact polynomials.
inline constexpr int kExactOrder = 1 << 20;

// Truncated power series in n variables, stored as a polynomial in z1..zn and
// exact through total degree order().
class MultiSeries {
 public:
  using Exponents = std::vector<int>;

  MultiSeries() = default;
  MultiSeries(int nvars, int order, const Polynomial& p = {});
  static MultiSeries constant(int nvars, int order, const Rational& c);
  static MultiSeries from_coefficients(int nvars, int order, const std::vector<std::pair<Exponents, Rational>>& coeffs);

  int nvars() const { return n_; }
  int order() const { return order_; }
  const Polynomial& poly() const { return p_; }
  bool is_zero() const { return p_.is_zero(); }
  // Lowest total degree present; kExactOrder for the zero series.
  int valuation() const;
  Rational coeff(const Exponents& e) const;
  // Nonzero coefficients ordered by total degree, then exponent vector.
  std::vector<std::pair<Exponents, Rational>> coefficients() const;

  MultiSeries truncated(int order) const;
  MultiSeries scaled(const Rational& c) const;
  MultiSeries derivative(int i) const;
  // Multiplicative inverse; requires a nonzero constant term.
  MultiSeries inverse() const;
  // Univariate composition f(s(X)); s needs zero constant term.
  MultiSeries compose(const MultiSeries& s) const;
  // Variable i renamed to variable j of an nvars-variable series.
  MultiSeries embedded(int nvars, int j) const;

  MultiSeries operator-() const { return scaled(Rational(-1)); }
  friend MultiSeries operator+(const MultiSeries& a, const MultiSeries& b);
  friend MultiSeries operator-(const MultiSeries& a, const MultiSeries& b) { return a + (-b); }
  friend MultiSeries operator*(const MultiSeries& a, const MultiSeries& b);
  // Equal coefficients through the smaller of the two orders.
  bool agrees_with(const MultiSeries& o) const;

  // "1 + 2*X1^2 + O(X^5)"; letter names the variables.
  std::string to_string(const std::string& letter = "X") const;

 private:
  int n_ = 1;
  int order_ = 0;
  Polynomial p_;
};

// Generating series M_{g,n} or C_{g,n} keyed by (g, n).
struct GeneratingSeries {
  std::map<std::pair<int, int>, MultiSeries> entries;
  const MultiSeries* find(int g, int n) const;
};
using CumulantSeries = GeneratingSeries;
using MomentSeries = GeneratingSeries;

enum class SeriesSide { Moments, Cumulants };
const char* to_string(SeriesSide s);

// M_1 with C_1(X M_1(X)) = M_1(X), through X^order (or less if C_1 is shorter).
MultiSeries solve_first_order(const MultiSeries& c01, int order);

// M_{g,n} through total degree `order` from the cumulant series. Entries
// missing from C are zero. Throws TruncationError when C is too short.
MultiSeries moments_from_cumulants(const CumulantSeries& c, int g, int n, int order);

// Expansion of the curve's correlators into moment series (x = 1/X around a
// simple pole of x where y vanishes) or of the dual correlators into cumulant
// series (y = Y around a simple zero of y where x has a simple pole).
// Throws AssumptionViolated when the curve has no such point.
MultiSeries identify_entry(CorrelatorTable& table, SeriesSide side, int g, int n, int order);
GeneratingSeries identify_with_swap(CorrelatorTable& table, SeriesSide side,
                                    const std::vector<std::pair<int, int>>& which, int order);

struct ShiftedForms {
  MultiSeries m_tilde;         // X M_1(X)
  MultiSeries c_tilde_times_y; // C_1(Y), i.e. Y times C~_1(Y) = C_1(Y)/Y
  // Coefficients of X^{k-1}, k = 0..order, in C~_1(M~_1(X)).
  std::vector<Rational> composition;
  bool identity_holds = false;  // composition equals 1/X
};

ShiftedForms shifted_series(const MultiSeries& c01, int order);

}  // namespace trxy
