#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace ehtcp {

/// One checked claim of the built-in examples suite.
struct ClaimResult {
  std::string fixture;
  std::string claim;
  bool passed = false;
  std::string detail;
};

struct SuiteOptions {
  std::uint64_t seed = 1;
  int threads = 1;
  long budget_restarts = 2000;   // default falsification budget
  long deep_restarts = 10000;    // budget for the headline no-witness claims
  double tol = 1e-9;
};

struct SuiteReport {
  std::vector<ClaimResult> claims;
  bool all_passed = false;
  int passed_count = 0;
  int failed_count = 0;

  /// Deterministic machine-readable body (no timings).
  std::string to_json(int indent = 2) const;
};

/// Runs every built-in fixture's assertions: class verdicts, closed-form
/// solution sets, degree gates, and witness propagation. Failures are
/// report entries, not exceptions.
SuiteReport run_examples_suite(const SuiteOptions& opts);

}  // namespace ehtcp
