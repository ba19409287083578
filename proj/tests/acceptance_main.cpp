// Acceptance gate: runs every criterion at full scale and prints one
// PASS/FAIL line per criterion. Exit code 0 only if all pass.

#include <iostream>

#include "flowsim/acceptance.hpp"

int main() {
  std::cout << "flowsim acceptance suite (full scale: 2x1 Gbps, 120 s horizon, 5 s warmup)\n";
  std::cout.flush();
  const auto results = flowsim::run_acceptance(std::cout);
  int failed = 0;
  for (const auto& r : results) {
    failed += r.pass ? 0 : 1;
  }
  std::cout << (failed == 0 ? "ALL CRITERIA PASSED" : "CRITERIA FAILED") << " (" << failed
            << " of " << results.size() << " failing)\n";
  return failed == 0 ? 0 : 2;
}
