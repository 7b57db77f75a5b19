#include <gtest/gtest.h>

#include <random>

#include "trxy/errors.hpp"
#include "trxy/factored.hpp"
#include "trxy/laurent_series.hpp"
#include "trxy/rational_function.hpp"

using namespace trxy;

namespace {

RationalFunction V(Var v) { return RationalFunction::variable(v); }
Polynomial P(Var v) { return Polynomial::variable(v); }

Polynomial random_poly(std::mt19937& rng, const std::vector<Var>& vars, int max_deg, int max_terms) {
  std::uniform_int_distribution<int> coef(-4, 4), deg(0, max_deg), nterms(1, max_terms);
  Polynomial p;
  int n = nterms(rng);
  for (int i = 0; i < n; ++i) {
    Polynomial t(ratio(coef(rng), 1 + (coef(rng) + 4) % 3));
    for (Var v : vars) t = t * P(v).pow(static_cast<unsigned>(deg(rng) / static_cast<int>(vars.size())));
    p += t;
  }
  return p;
}

RationalFunction random_rf(std::mt19937& rng, const std::vector<Var>& vars) {
  Polynomial d;
  while (d.is_zero()) d = random_poly(rng, vars, 3, 3);
  return RationalFunction(random_poly(rng, vars, 3, 3), d);
}

// Denominators built from the factor shapes the swap produces, plus a random tail.
RationalFunction structured_rf(std::mt19937& rng) {
  std::uniform_int_distribution<int> e(0, 2);
  const Polynomial z1 = P(var_zi(1)), z2 = P(var_zi(2));
  Polynomial den = (z1 - z2).pow(static_cast<unsigned>(e(rng))) * (z1 * z1 - Polynomial(1)).pow(static_cast<unsigned>(e(rng))) *
                   z2.pow(static_cast<unsigned>(e(rng))) * (z2 * z2 + Polynomial(3)).pow(static_cast<unsigned>(e(rng)));
  if (e(rng) == 2) den *= random_poly(rng, {var_zi(1), var_zi(2)}, 2, 2) + Polynomial(5);
  return RationalFunction(random_poly(rng, {var_zi(1), var_zi(2)}, 4, 4), den);
}

}  // namespace

TEST(Rational, RenderAndParse) {
  EXPECT_EQ(to_string(Rational(-105, 2048)), "-105/2048");
  EXPECT_EQ(to_string(ratio(6, 3)), "2");
  EXPECT_EQ(parse_rational("-10/4"), Rational(-5, 2));
  EXPECT_THROW(parse_rational("1/0"), ParseError);
  EXPECT_THROW(parse_rational("1.5"), ParseError);
}

TEST(Polynomial, GradedLexOrder) {
  Polynomial p = P(var_zi(2)).pow(4) * Rational(5) + P(var_zi(1)).pow(4) * Rational(5) +
                 P(var_zi(1)).pow(2) * P(var_zi(2)).pow(2) * Rational(3);
  EXPECT_EQ(p.to_string(), "5*z1^4+3*z1^2*z2^2+5*z2^4");
}

TEST(Polynomial, ExactDivisionAndGcd) {
  Polynomial a = (P(var_zi(1)) - P(var_zi(2))).pow(3) * (P(var_zi(1)) + 1);
  Polynomial b = (P(var_zi(1)) - P(var_zi(2))).pow(2) * (P(var_zi(2)) - 3);
  EXPECT_EQ(gcd(a, b), (P(var_zi(1)) - P(var_zi(2))).pow(2));
  EXPECT_FALSE(divide_exact(a, b).has_value());
  EXPECT_EQ(exact_quotient(a * b, b), a);
  EXPECT_EQ(gcd(Polynomial(), P(var_z()) * Rational(3)), P(var_z()));
  EXPECT_EQ(gcd(P(var_zi(1)) + 1, P(var_zi(2)) + 1), Polynomial(1));
}

TEST(Polynomial, GcdOfRandomProducts) {
  std::mt19937 rng(7);
  std::vector<Var> vars{var_zi(1), var_zi(2), var_zi(3)};
  for (int i = 0; i < 40; ++i) {
    Polynomial g = random_poly(rng, vars, 3, 3);
    Polynomial a = random_poly(rng, vars, 3, 3);
    Polynomial b = random_poly(rng, vars, 3, 3);
    if (g.is_zero() || a.is_zero() || b.is_zero()) continue;
    Polynomial h = gcd(a * g, b * g);
    EXPECT_TRUE(divide_exact(h, g.monic()).has_value()) << g.to_string() << " | " << h.to_string();
    EXPECT_TRUE(divide_exact(a * g, h).has_value());
    EXPECT_TRUE(divide_exact(b * g, h).has_value());
  }
}

TEST(RationalFunction, SpecDerivativeExamples) {
  Var z = var_z();
  EXPECT_EQ(differentiate(V(z).pow(2), z), V(z).scaled(2));
  EXPECT_EQ(differentiate(V(z).inverse(), z), -(V(z).pow(2).inverse()));
  Var z1 = var_zi(1), z2 = var_zi(2);
  RationalFunction f = (V(z1) * V(z2) * (V(z1) - V(z2)).pow(2)).scaled(4).inverse();
  RationalFunction expected = -(V(z1).scaled(3) - V(z2)) / (V(z1).pow(2) * V(z2) * (V(z1) - V(z2)).pow(3)).scaled(4);
  EXPECT_EQ(differentiate(f, z1), expected);
  EXPECT_EQ(differentiate(f, var_zi(3)), RationalFunction());
}

TEST(RationalFunction, CanonicalRendering) {
  Var z1 = var_zi(1), z2 = var_zi(2);
  RationalFunction w = RationalFunction(Rational(-105, 2048)) / V(z1).pow(11);
  EXPECT_EQ(w.to_string(), "(-105/2048)/(z1^11)");
  RationalFunction w12 =
      (V(z1).pow(4).scaled(5) + V(z2).pow(4).scaled(5) + (V(z1) * V(z2)).pow(2).scaled(3)) /
      (V(z1).pow(7) * V(z2).pow(7)).scaled(128);
  EXPECT_EQ(w12.to_string(), "(5/128*z1^4+3/128*z1^2*z2^2+5/128*z2^4)/(z1^7*z2^7)");
  EXPECT_EQ(RationalFunction(Polynomial(2) * P(z1) + 2, P(z1) * 4 + 4).to_string(), "1/2");
}

TEST(RationalFunction, RingLawsRandom) {
  std::mt19937 rng(11);
  std::vector<Var> vars{var_zi(1), var_zi(2)};
  for (int i = 0; i < 60; ++i) {
    RationalFunction f = random_rf(rng, vars), g = random_rf(rng, vars), h = random_rf(rng, vars);
    EXPECT_EQ((f + g) * h, f * h + g * h);
    EXPECT_EQ(f * g, g * f);
    EXPECT_EQ((f - f), RationalFunction());
    if (!g.is_zero()) EXPECT_EQ((f / g) * g, f);
  }
}

TEST(RationalFunction, LeibnizRandom) {
  std::mt19937 rng(3);
  std::vector<Var> vars{var_zi(1), var_zi(2)};
  for (int i = 0; i < 100; ++i) {
    RationalFunction f = random_rf(rng, vars), g = random_rf(rng, vars);
    Var v = vars[static_cast<std::size_t>(i % 2)];
    EXPECT_EQ(differentiate(f * g, v), differentiate(f, v) * g + f * differentiate(g, v));
  }
}

TEST(RationalFunction, Substitution) {
  Var z = var_z(), z1 = var_zi(1);
  RationalFunction f = (V(z).pow(2) + 1) / V(z);
  RationalFunction g = f.substitute(z, V(z1).inverse());
  EXPECT_EQ(g, (V(z1).pow(2) + 1) / V(z1));
  EXPECT_EQ(f.substitute(z, Rational(2)), RationalFunction(Rational(5, 2)));
}

TEST(LaurentSeries, SpecExpandExamples) {
  Var z = var_z();
  auto s = series_expand((V(z) * (V(z) - 1)).inverse(), z, 0, -1, 1);
  EXPECT_EQ(s.valuation(), -1);
  EXPECT_EQ(s.coeff(-1), RationalFunction(-1));
  EXPECT_EQ(s.coeff(0), RationalFunction(-1));
  EXPECT_EQ(s.coeff(1), RationalFunction(-1));

  auto sq = series_expand(V(z).pow(2), z, 0, 0, 4);
  EXPECT_EQ(sq.valuation(), 2);
  EXPECT_EQ(sq.coeffs().size(), 1u);

  Var w = var_zi(1);
  auto g = series_expand((V(w) - V(z)).inverse(), z, 0, 0, 3);
  for (int k = 0; k <= 3; ++k) EXPECT_EQ(g.coeff(k), V(w).pow(-(k + 1)));

  EXPECT_THROW(series_expand(V(z).pow(3), z, 0, 0, 2), EmptySeriesError);
}

TEST(LaurentSeries, ExpandIsRingMorphism) {
  std::mt19937 rng(5);
  Var z = var_z(), w = var_zi(1);
  for (int i = 0; i < 20; ++i) {
    RationalFunction f = random_rf(rng, {z, w}), g = random_rf(rng, {z, w});
    if (f.is_zero() || g.is_zero()) continue;
    auto ef = series_expand(f, z, 1, -20, 6);
    auto eg = series_expand(g, z, 1, -20, 6);
    auto prod = ef * eg;
    auto efg = series_expand(f * g, z, 1, -40, prod.precision());
    EXPECT_EQ(prod, efg);
  }
}

TEST(LaurentSeries, ResidueExamples) {
  EXPECT_EQ(series_residue(LaurentSeries::from_rationals(-1, 3, {1})), RationalFunction(1));
  EXPECT_EQ(series_residue(LaurentSeries::from_rationals(0, 3, {3, 2})), RationalFunction());
  Var w = var_zi(1);
  LaurentSeries s(-2, 0, {V(w), RationalFunction(2), RationalFunction(5)});
  EXPECT_EQ(series_residue(s), RationalFunction(2));
  EXPECT_THROW(series_residue(LaurentSeries::from_rationals(-4, -2, {1})), ContractViolation);
}

TEST(LaurentSeries, ResidueOfDerivativeVanishes) {
  std::mt19937 rng(9);
  std::uniform_int_distribution<int> c(-9, 9), v(-6, 0);
  for (int i = 0; i < 50; ++i) {
    std::vector<Rational> coeffs;
    for (int k = 0; k < 10; ++k) coeffs.push_back(ratio(c(rng), 1 + (k % 4)));
    auto p = LaurentSeries::from_rationals(v(rng), 4, coeffs);
    EXPECT_EQ(series_residue(p.derivative()), RationalFunction());
  }
}

TEST(LaurentSeries, ComposeExamples) {
  auto sq = LaurentSeries::from_rationals(2, 10, {1});
  auto neg = LaurentSeries::from_rationals(1, 10, {-1});
  auto c1 = series_compose(sq, neg);
  EXPECT_EQ(c1.coeff(2), RationalFunction(1));
  EXPECT_EQ(c1.coeff(3), RationalFunction());

  auto inv = LaurentSeries::from_rationals(-1, 10, {1});
  auto inner = LaurentSeries::from_rationals(1, 10, {1, 1});
  auto c2 = series_compose(inv, inner);
  for (int k = -1; k <= c2.precision(); ++k) EXPECT_EQ(c2.coeff(k), RationalFunction((k + 1) % 2 == 0 ? 1 : -1)) << k;
  EXPECT_GE(c2.precision(), 7);

  auto id = LaurentSeries::from_rationals(1, 12, {1});
  auto s = LaurentSeries::from_rationals(1, 8, {2, 0, 3, 1});
  auto c3 = series_compose(id, s);
  for (int k = 1; k <= 8; ++k) EXPECT_EQ(c3.coeff(k), s.coeff(k));

  auto short_outer = LaurentSeries::from_rationals(-1, 0, {1, 1});
  try {
    series_compose(short_outer, LaurentSeries::from_rationals(1, 3, {1}), 4);
    FAIL() << "expected TruncationError";
  } catch (const TruncationError& e) {
    EXPECT_EQ(e.achievable(), 0);
  }
}

TEST(Polynomial, ExactDivisionRandom) {
  std::mt19937 rng(13);
  std::vector<Var> vars{var_zi(1), var_zi(2), var_zi(3)};
  for (int i = 0; i < 60; ++i) {
    Polynomial a = random_poly(rng, vars, 4, 5);
    Polynomial b = random_poly(rng, vars, 3, 3);
    if (b.is_zero() || b.is_constant()) continue;
    auto q = divide_exact(a * b, b);
    ASSERT_TRUE(q.has_value());
    EXPECT_EQ(*q, a);
    EXPECT_FALSE(divide_exact(a * b + Polynomial(1), b).has_value());
  }
}

TEST(FactoredFunction, RoundTripAndArithmetic) {
  std::mt19937 rng(17);
  for (int i = 0; i < 60; ++i) {
    RationalFunction f = structured_rf(rng), g = structured_rf(rng);
    FactoredFunction ff(f), fg(g);
    EXPECT_EQ(ff.to_function(), f);
    EXPECT_EQ((ff + fg).to_function(), f + g);
    EXPECT_EQ((ff * fg).to_function(), f * g);
    EXPECT_EQ((ff - ff).to_function(), RationalFunction());
    for (Var v : {var_zi(1), var_zi(2)}) EXPECT_EQ(ff.derivative(v).to_function(), differentiate(f, v));
  }
}

TEST(FactoredFunction, SplitsSwapDenominators) {
  const Polynomial z1 = P(var_zi(1)), z2 = P(var_zi(2));
  Polynomial den = (z1 - z2).pow(2) * z1.pow(3) * (z2 * z2 - Polynomial(1));
  auto fs = split_denominator(den);
  int linear = 0, total = 0;
  for (const auto& f : fs) {
    linear += f.linear ? 1 : 0;
    total += f.e * f.p.total_degree();
  }
  EXPECT_EQ(total, den.total_degree());
  EXPECT_EQ(linear, 2);
}
