#pragma once

#include <string>
#include <vector>

namespace melt {

// outcome of a numeric certificate: worst is the largest amount by which the
// checked inequality was violated (negative = margin), pass iff worst <= tol
struct CheckResult {
  std::string name;
  bool passed = false;
  double worst = 0.0;
  double tol = 0.0;
  std::string where;

  static CheckResult of(std::string name, double worst, double tol,
                        std::string where = {}) {
    CheckResult r;
    r.name = std::move(name);
    r.worst = worst;
    r.tol = tol;
    r.passed = worst <= tol;
    r.where = std::move(where);
    return r;
  }
};

inline bool all_passed(const std::vector<CheckResult>& rs) {
  for (const auto& r : rs)
    if (!r.passed) return false;
  return true;
}

}  // namespace melt
