#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace trxy {

using Integer = mpz_class;
using Rational = mpq_class;

// "p/q", or "p" when the denominator is 1.
std::string to_string(const Rational& r);

// Accepts "p", "-p", "p/q". Throws ParseError on malformed input.
Rational parse_rational(std::string_view text);

// Canonicalized n/d (mpq_class(n, d) alone does not reduce).
Rational ratio(long n, long d);

Rational factorial(unsigned n);
Rational rational_pow(const Rational& base, int exponent);

}  // namespace trxy
