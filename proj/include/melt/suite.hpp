#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace melt {

// One numbered entry of the acceptance battery. Every criterion bundles a few
// sub-checks, each with its own pinned tolerance; worst is the largest margin
// by which any sub-check exceeded its tolerance, so worst <= 0 passes and the
// magnitude of a negative worst is the slack that was left.
struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  double worst = 0.0;
  double seconds = 0.0;
  std::string detail;
};

// the full battery in criterion order; log (when given) receives one
// PASS/FAIL line per criterion as it completes
std::vector<CriterionResult> run_acceptance(std::uint64_t seed,
                                            std::ostream* log = nullptr);

bool suite_passed(const std::vector<CriterionResult>& rs);

}  // namespace melt
