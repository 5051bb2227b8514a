#include <cstdint>
#include <cstdlib>
#include <iostream>

#include "melt/suite.hpp"

int main(int argc, char** argv) {
  std::uint64_t seed = 20240817;
  if (argc > 1) seed = std::strtoull(argv[1], nullptr, 10);
  std::cout << "acceptance battery, seed " << seed << "\n";
  const auto rs = melt::run_acceptance(seed, &std::cout);
  int failed = 0;
  for (const auto& r : rs) failed += r.passed ? 0 : 1;
  if (failed == 0)
    std::cout << "all " << rs.size() << " criteria passed\n";
  else
    std::cout << failed << " of " << rs.size() << " criteria FAILED\n";
  return failed == 0 ? 0 : 1;
}
