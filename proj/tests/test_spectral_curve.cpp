#include <gtest/gtest.h>

#include "trxy/errors.hpp"
#include "trxy/spectral_curve.hpp"

using namespace trxy;

namespace {

RationalFunction Z() { return RationalFunction::variable(var_z()); }

std::vector<Rational> locations(const std::vector<RamificationPoint>& pts) {
  std::vector<Rational> out;
  for (const auto& p : pts) out.push_back(p.location);
  return out;
}

// sigma(alpha + t) - alpha as a series with valuation 1.
LaurentSeries displacement(const LaurentSeries& sigma, const Rational& alpha) {
  return sigma - LaurentSeries::from_rationals(0, sigma.precision(), {alpha});
}

LaurentSeries compose_function(const RationalFunction& f, const Rational& alpha, const LaurentSeries& sigma, int order) {
  auto fs = series_expand(f, var_z(), alpha, 0, order);
  return series_compose(fs, displacement(sigma, alpha));
}

}  // namespace

TEST(SpectralCurve, RamificationExamples) {
  auto airy = catalog_curve("airy");
  EXPECT_EQ(locations(ramification_points(airy, Branch::X)), std::vector<Rational>{0});
  EXPECT_TRUE(ramification_points(airy, Branch::Y).empty());
  auto gauss = catalog_curve("gaussian");
  EXPECT_EQ(locations(ramification_points(gauss, Branch::X)), (std::vector<Rational>{-1, 1}));
  auto two = catalog_curve("two-sided");
  EXPECT_EQ(locations(ramification_points(two, Branch::Y)), (std::vector<Rational>{-1, 1}));
}

TEST(SpectralCurve, RamificationErrors) {
  SpectralCurve irr(Z().pow(3) - Z().scaled(6), Z());  // dx = 3(z^2 - 2)
  try {
    ramification_points(irr, Branch::X);
    FAIL();
  } catch (const NonRationalRamification& e) {
    EXPECT_EQ(e.factor(), "z^2-2");
  }
  SpectralCurve cusp(Z().pow(3), Z().pow(2) + Z());
  EXPECT_THROW(ramification_points(cusp, Branch::X), UnsupportedRamificationProfile);
  SpectralCurve clash(Z().pow(2), Z().pow(2) + Z().pow(3));
  EXPECT_THROW(ramification_points(clash, Branch::X), AssumptionViolated);
  SpectralCurve pole(Z().pow(2), Z().inverse());
  EXPECT_THROW(ramification_points(pole, Branch::X), AssumptionViolated);
  SpectralCurve at_infinity(Z().pow(2).inverse(), Z() + 1);
  EXPECT_THROW(ramification_points(at_infinity, Branch::X), AssumptionViolated);
}

TEST(SpectralCurve, InvolutionExamples) {
  auto airy = catalog_curve("airy");
  auto pa = ramification_points(airy, Branch::X)[0];
  EXPECT_EQ(pa.mode, InvolutionMode::ExactGlobal);
  auto sa = local_involution(airy, pa, 8);
  EXPECT_EQ(sa, LaurentSeries::from_rationals(1, 8, {-1}));

  auto gauss = catalog_curve("gaussian");
  auto pg = ramification_points(gauss, Branch::X)[1];
  auto sg = local_involution(gauss, pg, 6);
  for (int k = 0; k <= 6; ++k) EXPECT_EQ(sg.coeff(k), RationalFunction(k == 0 ? 1 : (k % 2 ? -1 : 1)));

  auto two = catalog_curve("two-sided");
  auto pt = ramification_points(two, Branch::Y)[1];
  EXPECT_EQ(pt.location, 1);
  EXPECT_EQ(pt.mode, InvolutionMode::NewtonLocal);
  auto st = local_involution(two, pt, 6);
  EXPECT_EQ(st.coeff(0), RationalFunction(1));
  EXPECT_EQ(st.coeff(1), RationalFunction(-1));
  EXPECT_EQ(st.coeff(2), RationalFunction(ratio(-1, 3)));
  // Oracle: sigma solves s^2 + s q + q^2 - 3 = 0 with q = 1 + t.
  LaurentSeries q = LaurentSeries::from_rationals(0, 6, {1, 1});
  LaurentSeries rel = st * st + st * q + q * q - LaurentSeries::from_rationals(0, 6, {3});
  EXPECT_TRUE(rel.is_zero()) << rel;
}

TEST(SpectralCurve, InvolutionProperties) {
  const int N = 10;
  for (const auto& name : catalog_names()) {
    auto curve = catalog_curve(name);
    for (Branch b : {Branch::X, Branch::Y}) {
      for (const auto& pt : ramification_points(curve, b)) {
        const auto& f = curve.function(b);
        auto sigma = local_involution(curve, pt, N);
        EXPECT_EQ(sigma.coeff(1), RationalFunction(-1));
        auto fs = compose_function(f, pt.location, sigma, N);
        auto f0 = series_expand(f, var_z(), pt.location, 0, N);
        EXPECT_TRUE((fs - f0).is_zero()) << name;
        auto twice = series_compose(displacement(sigma, pt.location), displacement(sigma, pt.location));
        EXPECT_EQ(twice.truncated(N), LaurentSeries::from_rationals(1, N, {1})) << name;
        if (pt.mode == InvolutionMode::ExactGlobal) {
          auto newton = local_involution(curve, pt, N, InvolutionMode::NewtonLocal);
          EXPECT_EQ(newton, sigma.truncated(N)) << name;
        }
      }
    }
  }
}

TEST(SpectralCurve, SwapTwiceIsIdentity) {
  auto two = catalog_curve("two-sided");
  EXPECT_EQ(two.swapped().swapped(), two);
  EXPECT_EQ(two.swapped().x(), two.y());
}
