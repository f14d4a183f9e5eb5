// Acceptance gate: runs every release criterion at its stated tolerance and
// prints one PASS/FAIL line per criterion. Exit code 0 only if all gated
// criteria pass. The long-running enhancement study (part of criterion 9) is
// excluded from the default gate; enable it with --long.

#include <cstring>
#include <iostream>
#include <string>
#include <vector>

#include "sonorad/selftest.hpp"

int main(int argc, char** argv) {
  bool long_mode = false;
  int threads = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--long") == 0) long_mode = true;
    if (std::strcmp(argv[i], "--threads") == 0 && i + 1 < argc) {
      threads = std::atoi(argv[i + 1]);
    }
  }

  using sonorad::selftest::SuiteResult;
  struct Line {
    int criterion;
    SuiteResult result;
    bool gated;
  };
  std::vector<Line> lines;

  lines.push_back({1, sonorad::selftest::wronskian_suite(), true});
  lines.push_back({2, sonorad::selftest::born_limit_suite(), true});
  lines.push_back({3, sonorad::selftest::sw_coefficient_suite(), true});
  lines.push_back({4, sonorad::selftest::closed_chain_suite(), true});
  lines.push_back({5, sonorad::selftest::energy_spectrum_identity_suite(), true});
  lines.push_back({6, sonorad::selftest::temperature_suite(), true});
  lines.push_back({7, sonorad::selftest::engine_analytic_suite(threads), true});
  lines.push_back({8, sonorad::selftest::factorization_suite(), true});
  lines.push_back({9, sonorad::selftest::reference_energy_suite(), true});
  if (long_mode) {
    lines.push_back({9, sonorad::selftest::enhancement_suite(threads), true});
  }
  lines.push_back({10, sonorad::selftest::determinism_suite(), true});

  bool all_pass = true;
  for (const auto& line : lines) {
    std::cout << (line.result.pass ? "[PASS] " : "[FAIL] ") << "criterion "
              << line.criterion << " (" << line.result.name
              << "): " << line.result.details << "\n";
    if (line.gated) all_pass = all_pass && line.result.pass;
  }
  if (!long_mode) {
    std::cout << "[SKIP] criterion 9 (enhancement): factor-1000 study over the "
                 "full mode sum excluded from the default gate; run with "
                 "--long\n";
  }
  std::cout << (all_pass ? "acceptance: PASS\n" : "acceptance: FAIL\n");
  return all_pass ? 0 : 1;
}
