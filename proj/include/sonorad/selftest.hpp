#pragma once

#include <string>
#include <vector>

namespace sonorad::selftest {

struct SuiteResult {
  std::string name;
  bool pass = false;
  std::string details;
};

// Fast release-gate suites (seconds each).
SuiteResult wronskian_suite();
SuiteResult born_limit_suite();
SuiteResult sw_coefficient_suite();
SuiteResult closed_chain_suite();
SuiteResult energy_spectrum_identity_suite();
SuiteResult temperature_suite();
SuiteResult factorization_suite();

/// All fast suites in release-gate order.
std::vector<SuiteResult> run_quick();

// Heavier checks used by the acceptance binary.
SuiteResult engine_analytic_suite(int threads);
SuiteResult reference_energy_suite();      // report-only comparison
SuiteResult determinism_suite();
SuiteResult enhancement_suite(int threads);  // long; full mode-sum engine

}  // namespace sonorad::selftest
