#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "trxy/correlators.hpp"
#include "trxy/errors.hpp"
#include "trxy/expression.hpp"

using namespace trxy;

namespace {

RationalFunction rf(const char* s) { return parse_rational_function(s); }

}  // namespace

TEST(Correlators, AiryUnstableConventions) {
  CorrelatorTable t(catalog_curve("airy"));
  EXPECT_EQ(t.get(0, 1), rf("z1"));
  EXPECT_EQ(t.get(0, 2), rf("1/(4*z1*z2*(z1-z2)^2)"));
}

TEST(Correlators, AiryStableValues) {
  CorrelatorTable t(catalog_curve("airy"));
  EXPECT_EQ(t.get(0, 3), rf("-1/(16*z1^3*z2^3*z3^3)"));
  EXPECT_EQ(t.get(1, 1), rf("-1/(32*z1^5)"));
  EXPECT_EQ(t.get(1, 2), rf("(5*z1^4+5*z2^4+3*z1^2*z2^2)/(128*z1^7*z2^7)"));
  EXPECT_EQ(t.get(2, 1).to_string(), "(-105/2048)/(z1^11)");
}

TEST(Correlators, AiryRegularizedDiagonal) {
  SpectralCurve c = catalog_curve("airy");
  EXPECT_EQ(regularized_diagonal_w02(c, var_z()), rf("1/(16*z^4)"));
}

TEST(Correlators, RegularizedTwoPointIsRegularOnDiagonal) {
  for (const auto& name : catalog_names()) {
    SpectralCurve c = catalog_curve(name);
    RationalFunction two = regularized_w02_two_point(c, var_zi(1), var_zi(2));
    RationalFunction diag = two.substitute(var_zi(2), RationalFunction::variable(var_zi(1)));
    EXPECT_EQ(diag.renamed(var_zi(1), var_z()), regularized_diagonal_w02(c, var_z())) << name;
  }
}

TEST(Correlators, GaussianDisk) {
  CorrelatorTable t(catalog_curve("gaussian"));
  RationalFunction w03 = t.get(0, 3);
  // Symmetric in its arguments.
  std::array<Var, kMaxVars> perm{};
  for (int i = 0; i < kMaxVars; ++i) perm[static_cast<std::size_t>(i)] = i;
  std::swap(perm[static_cast<std::size_t>(var_zi(1))], perm[static_cast<std::size_t>(var_zi(3))]);
  EXPECT_EQ(w03.renamed(perm), w03);
}

TEST(Correlators, SymmetryAndStabilityAcrossCatalog) {
  for (const auto& name : catalog_names()) {
    CorrelatorTable t(catalog_curve(name));
    for (auto [g, n] : std::vector<std::pair<int, int>>{{0, 3}, {1, 1}, {1, 2}, {0, 4}}) {
      RationalFunction w = t.get(g, n);
      EXPECT_EQ(t.compute_direct(g, n, 4), w) << name << " " << g << "," << n;
      for (int i = 1; i < n; ++i) {
        std::array<Var, kMaxVars> perm{};
        for (int k = 0; k < kMaxVars; ++k) perm[static_cast<std::size_t>(k)] = k;
        std::swap(perm[static_cast<std::size_t>(var_zi(i))], perm[static_cast<std::size_t>(var_zi(n))]);
        EXPECT_EQ(w.renamed(perm), w) << name << " " << g << "," << n;
      }
    }
  }
}

TEST(Correlators, SwappedCurveAlsoRecurses) {
  SpectralCurve s = swap_roles(catalog_curve("two-sided"));
  CorrelatorTable t(s);
  EXPECT_FALSE(t.get(0, 3).is_zero());
  EXPECT_FALSE(t.get(1, 1).is_zero());
}

TEST(Correlators, CacheRoundTrip) {
  auto dir = std::filesystem::temp_directory_path() / "trxy-test-cache";
  std::filesystem::remove_all(dir);
  SpectralCurve c = catalog_curve("airy");
  {
    CorrelatorTable t(c);
    t.attach_cache(dir);
    t.get(1, 2);
  }
  CorrelatorTable u(c);
  u.attach_cache(dir);
  ASSERT_TRUE(u.find(1, 2).has_value());
  EXPECT_EQ(*u.find(1, 2), rf("(5*z1^4+5*z2^4+3*z1^2*z2^2)/(128*z1^7*z2^7)"));
  ASSERT_TRUE(u.find(1, 1).has_value());
  std::filesystem::remove_all(dir);
}

TEST(Correlators, StaleCacheVersionIgnored) {
  auto dir = std::filesystem::temp_directory_path() / "trxy-test-cache-stale";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  SpectralCurve c = catalog_curve("airy");
  {
    std::ofstream out(CorrelatorTable::cache_file(dir, c));
    out << "# trxy correlator cache\nengine trxy-engine-0\ncurve " << c.canonical_key() << "\n(1,1): 7/z1\n";
  }
  CorrelatorTable t(c);
  t.attach_cache(dir);
  EXPECT_FALSE(t.find(1, 1).has_value());
  EXPECT_EQ(t.get(1, 1), rf("-1/(32*z1^5)"));
  std::filesystem::remove_all(dir);
}
