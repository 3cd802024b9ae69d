// One line per acceptance criterion, followed by its individual checks.
// Exit status is non-zero if any criterion fails.

#include <chrono>
#include <cstdlib>
#include <iostream>
#include <string>

#include "matconvex/verify.hpp"

int main(int argc, char** argv) {
  using namespace matconvex;
  const std::uint64_t seed = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 1;
  const auto start = std::chrono::steady_clock::now();
  int failed = 0;
  for (const auto& task : suite_tasks("all")) {
    const auto t0 = std::chrono::steady_clock::now();
    CriterionResult c = task.run(seed);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    failed += c.pass() ? 0 : 1;
    std::cout << (c.pass() ? "PASS" : "FAIL") << "  criterion " << c.id << ": " << c.title << "  (" << secs << " s)\n";
    for (const auto& k : c.checks) {
      std::cout << "        " << (k.pass ? "ok   " : "FAIL ") << k.name << "  [observed " << format_real(k.observed)
                << ", bound " << format_real(k.bound) << "]" << (k.note.empty() ? "" : "  " + k.note) << "\n";
    }
  }
  const double total = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::cout << (failed == 0 ? "all criteria pass" : std::to_string(failed) + " criterion(s) failed") << " (seed " << seed
            << ", " << total << " s)\n";
  return failed == 0 ? 0 : 1;
}
