#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "trxy/spectral_curve.hpp"

namespace trxy {

inline constexpr int kCriterionCount = 8;

struct Check {
  int criterion = 0;  // 1..8, or 0 for the per-curve property suite
  std::string name;
  bool passed = false;
  std::string expected;
  std::string actual;
};

struct VerifyConfig {
  // Criteria to run; empty means all of 1..8.
  std::vector<int> criteria;
  // Runs the per-curve property suite on this curve instead of the criteria.
  std::optional<SpectralCurve> curve;
  std::optional<std::filesystem::path> cache_dir;
};

struct VerifyReport {
  std::vector<Check> checks;

  bool passed() const;
  // criteria present in the report, ascending
  std::vector<int> criteria() const;
  bool criterion_passed(int c) const;
  // "criterion 3: PASS (2 checks)" or the first failure with both forms.
  std::string summary_line(int c) const;
  // One line per check.
  std::string to_text() const;
};

// Checks are collected, never short-circuited; exceptions become failures.
VerifyReport run_verify(const VerifyConfig& config);

}  // namespace trxy
