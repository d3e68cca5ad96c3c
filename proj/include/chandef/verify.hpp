#pragma once
//
// Seeded invariant suites for every module, runnable from the CLI.  Each
// check recomputes one contract (an algebraic identity, a known value, a
// duality gap) on fresh random instances and reports the measured defect
// against its tolerance.  A healthy build passes everything; any failure is
// a bug, never noise, because the tolerances include the solver slack.
//

#include <cstdint>
#include <string>
#include <vector>

namespace chandef::verify {

struct CheckResult {
  std::string name;
  bool passed = false;
  double defect = 0.0;     // measured worst-case violation
  double tolerance = 0.0;  // accepted bound
};

std::vector<CheckResult> matops_suite(std::uint64_t seed);
std::vector<CheckResult> hmap_suite(std::uint64_t seed);
std::vector<CheckResult> cones_suite(std::uint64_t seed);
std::vector<CheckResult> conic_suite(std::uint64_t seed);
std::vector<CheckResult> norms_suite(std::uint64_t seed);
std::vector<CheckResult> deficiency_suite(std::uint64_t seed);
std::vector<CheckResult> ovs_suite(std::uint64_t seed);

// All of the above, in module order.
std::vector<CheckResult> run_all(std::uint64_t seed);

}  // namespace chandef::verify
