#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "trxy/errors.hpp"
#include "trxy/expression.hpp"
#include "trxy/serialize.hpp"
#include "trxy/verify.hpp"

using namespace trxy;

namespace {

std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("trxy-test-" + name + "-" + std::to_string(::getpid()));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST(Serialize, CorrelatorRoundTrip) {
  CorrelatorTable t(catalog_curve("airy"));
  CorrelatorRecord r{"airy", "z^2", "z", 1, 2, t.get(1, 2)};
  std::string text = emit_correlator(r);
  EXPECT_EQ(parse_correlator(text), r);
  EXPECT_EQ(emit_correlator(parse_correlator(text)), text);
  EXPECT_NE(text.find("\"numerator\""), std::string::npos);
  EXPECT_NE(text.find("\"5/128\""), std::string::npos);
}

TEST(Serialize, TermReportRoundTripAndSums) {
  CorrelatorTable t(catalog_curve("two-sided"));
  SwapEngine e(t);
  TermReport report;
  e.swap_correlator(1, 2, &report);
  std::string text = emit_term_report(TermReportRecord{1, 2, report});
  TermReportRecord back = parse_term_report(text);
  ASSERT_EQ(back.report.entries.size(), report.entries.size());
  FactoredFunction sum;
  for (std::size_t k = 0; k < report.entries.size(); ++k) {
    EXPECT_EQ(back.report.entries[k].graph, report.entries[k].graph);
    EXPECT_EQ(back.report.entries[k].group, report.entries[k].group);
    EXPECT_EQ(back.report.entries[k].inverse_aut, report.entries[k].inverse_aut);
    EXPECT_EQ(back.report.entries[k].contribution, report.entries[k].contribution);
    EXPECT_EQ(back.report.entries[k].running_total, report.entries[k].running_total);
    sum += FactoredFunction(back.report.entries[k].contribution);
  }
  EXPECT_EQ(sum.to_function(), back.report.total);
  EXPECT_EQ(emit_term_report(back), text);
}

TEST(Serialize, GraphsRoundTrip) {
  auto gs = enumerate_decorated(2, 1);
  EXPECT_EQ(parse_graphs(emit_graphs(gs)), gs);
}

TEST(Serialize, SeriesFileFormats) {
  const char* file = R"([
    {"g": 0, "n": 1, "coefficients": [[[0], "1"], [[2], "1"]]},
    {"g": 0, "n": 2, "order": 4, "coefficients": [[1, 1, "-1/2"]]}
  ])";
  GeneratingSeries s = parse_series_file(file);
  ASSERT_NE(s.find(0, 1), nullptr);
  EXPECT_EQ(s.find(0, 1)->to_string(), "1 + X^2");
  EXPECT_EQ(s.find(0, 2)->order(), 4);
  EXPECT_EQ(s.find(0, 2)->coeff({1, 1}), ratio(-1, 2));
  GeneratingSeries back = parse_series_file(emit_series_file(s));
  EXPECT_EQ(emit_series_file(back), emit_series_file(s));
  EXPECT_EQ(back.find(0, 2)->poly(), s.find(0, 2)->poly());
}

TEST(Serialize, MalformedInputs) {
  EXPECT_THROW(parse_series_file("{\"g\": 0"), ParseError);
  EXPECT_THROW(parse_series_file(R"({"g": 0, "n": 2, "coefficients": [[1, "1"]]})"), ParseError);
  EXPECT_THROW(parse_series_file(R"({"g": 0, "n": 1, "coefficients": [[[-1], "1"]]})"), ParseError);
  EXPECT_THROW(parse_correlator(R"({"g": 1})"), ParseError);
}

TEST(Verify, SelectedCriteriaPass) {
  VerifyConfig config;
  config.criteria = {1, 3};
  VerifyReport report = run_verify(config);
  EXPECT_TRUE(report.passed()) << report.to_text();
  EXPECT_EQ(report.criteria(), (std::vector<int>{1, 3}));
  EXPECT_EQ(report.summary_line(1).rfind("criterion 1: PASS", 0), 0u);
}

TEST(Verify, TwoSidedCurveSuitePasses) {
  VerifyConfig config;
  config.curve = catalog_curve("two-sided");
  VerifyReport report = run_verify(config);
  EXPECT_TRUE(report.passed()) << report.to_text();
}

TEST(Verify, CorruptedCacheEntryIsReported) {
  auto dir = scratch_dir("corrupt");
  {
    CorrelatorTable t(catalog_curve("airy"));
    t.attach_cache(dir);
    t.get(1, 1);
  }
  auto path = CorrelatorTable::cache_file(dir, catalog_curve("airy"));
  std::ifstream in(path);
  std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  in.close();
  const std::string good = "(-1/32)/(z1^5)";
  auto at = content.find(good);
  ASSERT_NE(at, std::string::npos) << content;
  content.replace(at, good.size(), "(-1/31)/(z1^5)");
  std::ofstream(path) << content;

  VerifyConfig config;
  config.criteria = {1};
  config.cache_dir = dir;
  VerifyReport report = run_verify(config);
  EXPECT_FALSE(report.passed());
  std::string line = report.summary_line(1);
  EXPECT_NE(line.find(good), std::string::npos) << line;
  EXPECT_NE(line.find("(-1/31)/(z1^5)"), std::string::npos) << line;
  std::filesystem::remove_all(dir);
}
