#pragma once

#include <functional>
#include <limits>
#include <ostream>
#include <vector>

#include "trxy/rational_function.hpp"

namespace trxy {

// Truncated Laurent series sum_{k=valuation}^{precision} c_k t^k + O(t^{precision+1})
// in a local parameter t = v - center. Coefficients are rational functions of
// spectator variables. Stored coefficients start at the first nonzero one; a
// series with no known nonzero coefficient has valuation precision + 1.
class LaurentSeries {
 public:
  LaurentSeries() : val_(1), prec_(0) {}
  LaurentSeries(int valuation, int precision, std::vector<RationalFunction> coeffs);

  static LaurentSeries zero(int precision);
  static LaurentSeries monomial(const RationalFunction& c, int k, int precision);
  // Exact series with given coefficients starting at t^valuation.
  static LaurentSeries from_rationals(int valuation, int precision, const std::vector<Rational>& coeffs);

  int valuation() const { return val_; }
  int precision() const { return prec_; }
  bool is_zero() const { return c_.empty(); }
  // Coefficient of t^k; zero below the valuation. Throws TruncationError above the precision.
  RationalFunction coeff(int k) const;
  const std::vector<RationalFunction>& coeffs() const { return c_; }

  // Local-parameter bookkeeping (informational: which variable and center produced this series).
  Var local_variable() const { return var_; }
  const Rational& center() const { return center_; }
  LaurentSeries& set_origin(Var v, const Rational& center) {
    var_ = v;
    center_ = center;
    return *this;
  }

  LaurentSeries operator-() const;
  friend LaurentSeries operator+(const LaurentSeries& a, const LaurentSeries& b);
  friend LaurentSeries operator-(const LaurentSeries& a, const LaurentSeries& b);
  friend LaurentSeries operator*(const LaurentSeries& a, const LaurentSeries& b);
  friend LaurentSeries operator/(const LaurentSeries& a, const LaurentSeries& b);
  LaurentSeries& operator+=(const LaurentSeries& o) { return *this = *this + o; }
  LaurentSeries& operator*=(const LaurentSeries& o) { return *this = *this * o; }

  LaurentSeries scaled(const RationalFunction& c) const;
  LaurentSeries shifted(int k) const;  // multiply by t^k
  LaurentSeries truncated(int precision) const;
  LaurentSeries inverse() const;
  LaurentSeries pow(int k) const;
  LaurentSeries derivative() const;  // d/dt
  LaurentSeries map_coeffs(const std::function<RationalFunction(const RationalFunction&)>& f) const;

  friend bool operator==(const LaurentSeries& a, const LaurentSeries& b);

  std::string to_string() const;

 private:
  void normalize();
  int val_;
  int prec_;
  std::vector<RationalFunction> c_;
  Var var_ = 0;
  Rational center_;
};

// Laurent expansion of f in t = v - center, exact through t^max_deg.
// Throws EmptySeriesError when max_deg is below the leading order and
// ContractViolation when min_deg is above it.
LaurentSeries series_expand(const RationalFunction& f, Var v, const Rational& center, int min_deg, int max_deg);

// Coefficient of t^-1; ContractViolation when the precision is below -1.
RationalFunction series_residue(const LaurentSeries& s);

// outer(inner(t)); inner must have valuation >= 1. When the achievable
// precision is below `required`, throws TruncationError naming it.
LaurentSeries series_compose(const LaurentSeries& outer, const LaurentSeries& inner,
                             int required = std::numeric_limits<int>::min());

inline std::ostream& operator<<(std::ostream& os, const LaurentSeries& s) { return os << s.to_string(); }

}  // namespace trxy
