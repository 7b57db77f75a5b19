#include <gtest/gtest.h>

#include <random>

#include "trxy/errors.hpp"
#include "trxy/free_probability.hpp"

using namespace trxy;

namespace {

Polynomial X(int i = 1) { return Polynomial::variable(var_zi(i)); }

MultiSeries univariate(std::initializer_list<long> coeffs, int order = kExactOrder) {
  std::vector<std::pair<MultiSeries::Exponents, Rational>> c;
  int k = 0;
  for (long v : coeffs) c.push_back({{k++}, Rational(v)});
  return MultiSeries::from_coefficients(1, order, c);
}

Rational small_rational(std::mt19937& rng) {
  std::uniform_int_distribution<long> num(-3, 3);
  std::uniform_int_distribution<long> den(1, 3);
  return ratio(num(rng), den(rng));
}

// 1 + random coefficients up to degree `degree`.
MultiSeries random_c01(std::mt19937& rng, int degree) {
  std::vector<std::pair<MultiSeries::Exponents, Rational>> c{{{0}, Rational(1)}};
  for (int k = 1; k <= degree; ++k) c.push_back({{k}, small_rational(rng)});
  return MultiSeries::from_coefficients(1, kExactOrder, c);
}

MultiSeries random_symmetric_c02(std::mt19937& rng, int degree) {
  std::vector<std::pair<MultiSeries::Exponents, Rational>> c;
  for (int a = 0; a <= degree; ++a) {
    for (int b = a; a + b <= degree; ++b) {
      Rational v = small_rational(rng);
      c.push_back({{a, b}, v});
      if (a != b) c.push_back({{b, a}, v});
    }
  }
  return MultiSeries::from_coefficients(2, kExactOrder, c);
}

// Truncated fixed-point iteration M <- step(M) on plain polynomials.
Polynomial fixed_point(int order, const std::function<Polynomial(const Polynomial&)>& step) {
  Polynomial m(1);
  for (int k = 0; k <= order; ++k) {
    Polynomial next = step(m);
    std::vector<Term> keep;
    for (const auto& t : next.terms()) {
      if (static_cast<int>(t.m.deg) <= order) keep.push_back(t);
    }
    m = Polynomial::from_terms(keep);
  }
  return m;
}

// f(Y1(X1), Y2(X2)) for a two-variable series f.
MultiSeries compose2(const MultiSeries& f, const MultiSeries& y1, const MultiSeries& y2) {
  MultiSeries out(2, f.order());
  for (const auto& [e, c] : f.coefficients()) {
    MultiSeries term = MultiSeries::constant(2, kExactOrder, c);
    for (int k = 0; k < e[0]; ++k) term = term * y1;
    for (int k = 0; k < e[1]; ++k) term = term * y2;
    out = out + term;
  }
  return out;
}

}  // namespace

TEST(FreeProbability, VanishingCumulantsGiveUnitMoment) {
  MultiSeries m = solve_first_order(univariate({1}), 10);
  EXPECT_EQ(m.poly(), Polynomial(1));
  EXPECT_EQ(m.order(), 10);
}

TEST(FreeProbability, SemicircleGivesCatalan) {
  MultiSeries m = solve_first_order(univariate({1, 0, 1}), 12);
  Polynomial oracle = fixed_point(12, [](const Polynomial& p) { return Polynomial(1) + X() * X() * p * p; });
  EXPECT_EQ(m.poly(), oracle);
  const long catalan[] = {1, 1, 2, 5, 14, 42, 132};
  for (int k = 0; k <= 6; ++k) {
    EXPECT_EQ(m.coeff({2 * k}), Rational(catalan[k])) << k;
    EXPECT_EQ(m.coeff({2 * k + 1}), Rational(0)) << k;
  }
}

TEST(FreeProbability, LinearCumulantFixedPoint) {
  // C_1(Y) = 1 + Y gives M = 1 + X M.
  MultiSeries m = solve_first_order(univariate({1, 1}), 8);
  Polynomial oracle = fixed_point(8, [](const Polynomial& p) { return Polynomial(1) + X() * p; });
  EXPECT_EQ(m.poly(), oracle);
  for (int k = 0; k <= 4; ++k) EXPECT_EQ(m.coeff({k}), Rational(1)) << k;
}

TEST(FreeProbability, BackSubstitutionOnRandomInputs) {
  std::mt19937 rng(20261016);
  for (int trial = 0; trial < 100; ++trial) {
    MultiSeries c = random_c01(rng, 1 + trial % 6);
    MultiSeries m = solve_first_order(c, 8);
    ASSERT_EQ(m.order(), 8);
    // C_1(X M) evaluated term by term with plain polynomial arithmetic.
    Polynomial xm = X() * m.poly();
    Polynomial lhs;
    Polynomial power(1);
    for (const auto& [e, k] : c.coefficients()) {
      Polynomial pw(1);
      for (int i = 0; i < e[0]; ++i) pw *= xm;
      lhs += pw.scaled(k);
    }
    EXPECT_TRUE(MultiSeries(1, 8, lhs).agrees_with(m)) << trial;
  }
}

TEST(FreeProbability, RejectsNonUnitConstantTerm) {
  EXPECT_THROW(solve_first_order(univariate({2, 1}), 5), ContractViolation);
}

TEST(FreeProbability, SecondOrderDisplayOnRandomInputs) {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    CumulantSeries c;
    c.entries[{0, 1}] = random_c01(rng, 4);
    c.entries[{0, 2}] = random_symmetric_c02(rng, 3);
    MultiSeries m2 = moments_from_cumulants(c, 0, 2, 8);
    ASSERT_EQ(m2.order(), 8);
    MultiSeries m1 = solve_first_order(c.entries[{0, 1}], 14);
    MultiSeries y = MultiSeries(1, kExactOrder, X()) * m1;
    MultiSeries y1 = y.embedded(2, 1);
    MultiSeries y2 = y.embedded(2, 2);
    MultiSeries dy1 = y.derivative(1).embedded(2, 1);
    MultiSeries dy2 = y.derivative(1).embedded(2, 2);
    const MultiSeries x1(2, kExactOrder, X(1));
    const MultiSeries x2(2, kExactOrder, X(2));
    const MultiSeries dx = x1 - x2;
    const MultiSeries dyy = y1 - y2;
    // (M2 (X1-X2)^2 + X1 X2)(Y1-Y2)^2 Y1 Y2 = X1 X2 Y1' Y2' (X1-X2)^2 (C2 (Y1-Y2)^2 + Y1 Y2)
    MultiSeries lhs = (m2 * dx * dx + x1 * x2) * dyy * dyy * y1 * y2;
    MultiSeries c2 = compose2(c.entries[{0, 2}], y1, y2);
    MultiSeries rhs = x1 * x2 * dy1 * dy2 * dx * dx * (c2 * dyy * dyy + y1 * y2);
    EXPECT_GE(std::min(lhs.order(), rhs.order()), 14);
    EXPECT_TRUE(lhs.agrees_with(rhs)) << trial;
  }
}

TEST(FreeProbability, ZeroCumulantsGiveZeroMoments) {
  CumulantSeries c;
  c.entries[{0, 1}] = univariate({1});
  for (auto [g, n] : std::vector<std::pair<int, int>>{{0, 2}, {0, 3}, {1, 1}, {1, 2}, {2, 1}}) {
    MultiSeries m = moments_from_cumulants(c, g, n, 6);
    EXPECT_TRUE(m.is_zero()) << g << "," << n << ": " << m.to_string();
    EXPECT_EQ(m.order(), 6);
  }
}

TEST(FreeProbability, ShortInputReportsAchievableOrder) {
  CumulantSeries c;
  c.entries[{0, 1}] = univariate({1, 0, 1}, 3);
  c.entries[{0, 2}] = MultiSeries(2, 2);
  try {
    moments_from_cumulants(c, 0, 2, 8);
    FAIL() << "expected TruncationError";
  } catch (const TruncationError& e) {
    EXPECT_LT(e.achievable(), 8);
  }
  EXPECT_THROW(moments_from_cumulants(c, 0, 1, 8), TruncationError);
}

TEST(FreeProbability, ShiftedIdentity) {
  ShiftedForms trivial = shifted_series(univariate({1}), 6);
  EXPECT_EQ(trivial.m_tilde.poly(), X());
  EXPECT_TRUE(trivial.identity_holds);

  ShiftedForms semicircle = shifted_series(univariate({1, 0, 1}), 10);
  EXPECT_TRUE(semicircle.identity_holds);
  EXPECT_EQ(semicircle.composition.size(), 11u);

  std::mt19937 rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    ShiftedForms s = shifted_series(random_c01(rng, 5), 8);
    EXPECT_TRUE(s.identity_holds) << trial;
    EXPECT_EQ(s.composition.size(), 9u);
  }
}

TEST(FreeProbability, GaussianCumulantsAreSemicircle) {
  CorrelatorTable t(catalog_curve("gaussian"));
  GeneratingSeries c = identify_with_swap(t, SeriesSide::Cumulants, {{0, 1}, {0, 2}, {0, 3}, {1, 1}}, 8);
  EXPECT_EQ(c.find(0, 1)->poly(), Polynomial(1) + X() * X());
  EXPECT_TRUE(c.find(0, 2)->is_zero());
  EXPECT_TRUE(c.find(0, 3)->is_zero());
  EXPECT_TRUE(c.find(1, 1)->is_zero());
}

TEST(FreeProbability, GaussianMomentSideMatchesSolver) {
  CorrelatorTable t(catalog_curve("gaussian"));
  MultiSeries m = identify_entry(t, SeriesSide::Moments, 0, 1, 10);
  EXPECT_EQ(m.poly(), solve_first_order(univariate({1, 0, 1}), 10).poly());
}

TEST(FreeProbability, GaussianCrossPipeline) {
  CorrelatorTable t(catalog_curve("gaussian"));
  CumulantSeries c = identify_with_swap(t, SeriesSide::Cumulants, {{0, 1}, {0, 2}, {1, 1}}, 10);
  for (auto [g, n] : std::vector<std::pair<int, int>>{{0, 2}, {1, 1}}) {
    MultiSeries from_cumulants = moments_from_cumulants(c, g, n, 8);
    MultiSeries direct = identify_entry(t, SeriesSide::Moments, g, n, 8);
    EXPECT_EQ(from_cumulants.order(), 8);
    EXPECT_EQ(direct.order(), 8);
    EXPECT_EQ(from_cumulants.poly(), direct.poly()) << g << "," << n << "\n"
                                                    << from_cumulants.to_string() << "\n"
                                                    << direct.to_string();
  }
}

TEST(FreeProbability, GaussianGenusOneMoments) {
  // Genus-one parts of E tr M^{2k} for the GUE: 1, 10, 70 at k = 2, 3, 4.
  CumulantSeries c;
  c.entries[{0, 1}] = univariate({1, 0, 1});
  MultiSeries m = moments_from_cumulants(c, 1, 1, 8);
  EXPECT_EQ(m.coeff({4}), Rational(1));
  EXPECT_EQ(m.coeff({6}), Rational(10));
  EXPECT_EQ(m.coeff({8}), Rational(70));
  EXPECT_EQ(m.coeff({2}), Rational(0));
}

TEST(FreeProbability, AiryIdentificationRefused) {
  CorrelatorTable t(catalog_curve("airy"));
  EXPECT_THROW(identify_entry(t, SeriesSide::Moments, 0, 1, 6), AssumptionViolated);
  EXPECT_THROW(identify_entry(t, SeriesSide::Cumulants, 1, 1, 6), AssumptionViolated);
}

TEST(FreeProbability, SeriesFormatting) {
  EXPECT_EQ(univariate({1, 0, -2}, 4).to_string(), "1 - 2*X^2 + O(X^5)");
  MultiSeries two(2, kExactOrder, X(1) * X(2).scaled(ratio(1, 2)) + X(2));
  EXPECT_EQ(two.to_string("Y"), "Y2 + 1/2*Y1*Y2");
  EXPECT_EQ(MultiSeries(1, 3).to_string(), "0 + O(X^4)");
}
