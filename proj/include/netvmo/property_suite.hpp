#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace netvmo {

struct CheckResult {
  std::string name;
  std::size_t trials = 0;
  std::size_t failures = 0;
  double worst = 0.0;  // most adverse measured value; meaning depends on the check
  std::string criterion;

  bool passed() const { return failures == 0; }
};

struct SuiteReport {
  std::vector<CheckResult> checks;
  bool vacuous = false;  // no trials were run

  bool passed() const;
  std::string format() const;
};

struct SuiteOptions {
  std::uint64_t seed = 42;
  std::size_t trials = 10000;
  /// Harness self-test: negates the trace-inequality slack so that the
  /// suite must fail.
  bool corrupt_trace_inequality = false;
};

/// Seeded property checks: the rotation trace inequality, exp/log round
/// trips, image Jacobian against finite differences, the chordal mean
/// against gradient descent, and spanning-tree quantities against
/// brute-force enumeration. Expensive checks cap their own trial counts.
SuiteReport run_property_suite(const SuiteOptions& options);

}  // namespace netvmo
