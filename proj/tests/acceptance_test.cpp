#include <iostream>

#include "trxy/verify.hpp"

// One line per acceptance criterion; nonzero exit if any criterion fails.
int main() {
  trxy::VerifyReport report = trxy::run_verify(trxy::VerifyConfig{});
  bool ok = true;
  for (int k = 1; k <= trxy::kCriterionCount; ++k) {
    std::cout << report.summary_line(k) << "\n";
    ok = ok && report.criterion_passed(k);
  }
  return ok ? 0 : 1;
}
