#include <gtest/gtest.h>

#include "trxy/errors.hpp"
#include "trxy/expression.hpp"
#include "trxy/swap.hpp"

using namespace trxy;

namespace {

RationalFunction rf(const char* s) { return parse_rational_function(s); }

const std::vector<std::pair<int, int>> kLowOrders = {{0, 3}, {1, 1}, {1, 2}, {2, 1}};

}  // namespace

TEST(Swap, SCoefficients) {
  EXPECT_EQ(s_coefficient(0), Rational(1));
  EXPECT_EQ(s_coefficient(1), ratio(1, 24));
  EXPECT_EQ(s_coefficient(2), ratio(1, 1920));
}

TEST(Swap, AiryDualVanishes) {
  CorrelatorTable t(catalog_curve("airy"));
  SwapEngine e(t);
  for (auto [g, n] : kLowOrders) EXPECT_TRUE(e.swap_correlator(g, n).is_zero()) << g << "," << n;
}

TEST(Swap, AiryGenusTwoGroupSubtotals) {
  CorrelatorTable t(catalog_curve("airy"));
  SwapEngine e(t);
  TermReport report;
  EXPECT_TRUE(e.swap_correlator(2, 1, &report).is_zero());
  EXPECT_EQ(report.entries.size(), 12u);
  std::vector<RationalFunction> totals;
  for (const auto& [key, v] : report.group_totals()) totals.push_back(v);
  std::vector<RationalFunction> expected = {rf("87/(32*z1^10)"), rf("-477/(128*z1^10)"), rf("-63/(128*z1^10)"),
                                            rf("3/(2*z1^10)")};
  auto sorted = [](std::vector<RationalFunction> v) {
    std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.to_string() < b.to_string(); });
    return v;
  };
  EXPECT_EQ(sorted(totals), sorted(expected));
  EXPECT_EQ(report.entries.back().running_total, report.total);
}

TEST(Swap, HandCodedGroupsMatchShadowGroupsOnAiry) {
  CorrelatorTable t(catalog_curve("airy"));
  SwapEngine e(t);
  std::vector<RationalFunction> parts;
  EXPECT_TRUE(e.hand_coded(2, 1, &parts).is_zero());
  ASSERT_EQ(parts.size(), 4u);
  EXPECT_EQ(parts[0], rf("87/(32*z1^10)"));
  EXPECT_EQ(parts[1], rf("-477/(128*z1^10)"));
  EXPECT_EQ(parts[2], rf("-63/(128*z1^10)"));
  EXPECT_EQ(parts[3], rf("3/(2*z1^10)"));
}

TEST(Swap, ReverseAiryRecoversAiry) {
  CorrelatorTable t(swap_roles(catalog_curve("airy")));
  SwapEngine e(t);
  EXPECT_EQ(e.swap_correlator(2, 1).to_string(), "(-105/2048)/(z1^11)");
  EXPECT_EQ(e.swap_correlator(1, 1), rf("-1/(32*z1^5)"));
  EXPECT_EQ(e.swap_correlator(0, 3), rf("-1/(16*z1^3*z2^3*z3^3)"));
  EXPECT_EQ(e.swap_correlator(1, 2), rf("(5*z1^4+5*z2^4+3*z1^2*z2^2)/(128*z1^7*z2^7)"));
}

TEST(Swap, GaussianDualVanishes) {
  CorrelatorTable t(catalog_curve("gaussian"));
  SwapEngine e(t);
  for (auto [g, n] : kLowOrders) EXPECT_TRUE(e.swap_correlator(g, n).is_zero()) << g << "," << n;
}

TEST(Swap, TwoSidedRoundTrip) {
  SpectralCurve c = catalog_curve("two-sided");
  CorrelatorTable t(c);
  CorrelatorTable dual(swap_roles(c));
  SwapEngine e(t);
  for (auto [g, n] : kLowOrders) EXPECT_EQ(e.swap_correlator(g, n), dual.get(g, n)) << g << "," << n;
  EXPECT_EQ(e.swap_correlator(0, 1), dual.get(0, 1));
  EXPECT_EQ(e.swap_correlator(0, 2), dual.get(0, 2));
}

TEST(Swap, MethodsAgree) {
  for (const auto& name : catalog_names()) {
    CorrelatorTable t(catalog_curve(name));
    SwapEngine e(t);
    for (auto [g, n] : kLowOrders) {
      RationalFunction ref = e.swap_correlator(g, n);
      for (auto m : {SwapMethod::Operator, SwapMethod::Tree, SwapMethod::Exponential, SwapMethod::Hand}) {
        if (!SwapEngine::applies(m, g, n)) continue;
        EXPECT_EQ(e.compute(g, n, m), ref) << name << " " << to_string(m) << " " << g << "," << n;
      }
    }
  }
}

TEST(Swap, OperatorReportsWindow) {
  CorrelatorTable t(catalog_curve("two-sided"));
  SwapEngine e(t);
  int nu = 0;
  e.via_operator_series(1, 1, &nu);
  EXPECT_EQ(nu, 9);
}

TEST(Swap, DualIsSymmetric) {
  CorrelatorTable t(catalog_curve("two-sided"));
  SwapEngine e(t);
  for (auto [g, n] : std::vector<std::pair<int, int>>{{0, 3}, {1, 2}}) {
    RationalFunction w = e.swap_correlator(g, n);
    std::array<Var, kMaxVars> perm{};
    for (int k = 0; k < kMaxVars; ++k) perm[static_cast<std::size_t>(k)] = k;
    std::swap(perm[static_cast<std::size_t>(var_zi(1))], perm[static_cast<std::size_t>(var_zi(n))]);
    EXPECT_EQ(w.renamed(perm), w) << g << "," << n;
  }
}

TEST(Swap, PolesOnlyAtDualRamificationPoints) {
  SpectralCurve c = catalog_curve("two-sided");
  CorrelatorTable t(c);
  SwapEngine e(t);
  // y' = z^2 - 1 vanishes at z = 1 and z = -1.
  RationalFunction w = e.swap_correlator(1, 1);
  Polynomial den = w.den();
  Polynomial allowed = (Polynomial::variable(var_zi(1)) - Polynomial(1)) * (Polynomial::variable(var_zi(1)) + Polynomial(1));
  while (!den.is_constant()) {
    auto q = divide_exact(den, allowed);
    ASSERT_TRUE(q.has_value()) << w;
    den = *q;
  }
}

TEST(Swap, MixedDerivativesCommute) {
  CorrelatorTable t(catalog_curve("two-sided"));
  SwapEngine e(t);
  RationalFunction w = t.get(0, 3);
  EXPECT_EQ(e.d_y(e.d_x(w, var_zi(1)), var_zi(2)), e.d_x(e.d_y(w, var_zi(2)), var_zi(1)));
}

TEST(Swap, FrozenTableReportsMissingEntries) {
  CorrelatorTable t(catalog_curve("two-sided"));
  t.get(1, 1);
  SwapEngine e(t, false);
  try {
    e.swap_correlator(1, 2);
    FAIL() << "expected DependencyError";
  } catch (const DependencyError& err) {
    std::string what = err.what();
    EXPECT_NE(what.find("(0,3)"), std::string::npos);
    EXPECT_NE(what.find("(1,2)"), std::string::npos);
    EXPECT_EQ(what.find("(1,1)"), std::string::npos);
  }
  t.get(1, 2);
  EXPECT_NO_THROW(e.swap_correlator(1, 2));
}

TEST(Swap, MethodNames) {
  for (auto m : {SwapMethod::Graphs, SwapMethod::Operator, SwapMethod::Tree, SwapMethod::Exponential, SwapMethod::Hand}) {
    EXPECT_EQ(parse_swap_method(to_string(m)), m);
  }
  EXPECT_FALSE(parse_swap_method("bogus").has_value());
}
