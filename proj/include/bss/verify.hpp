#pragma once

// Property and oracle checks shared by `bss verify` and the acceptance
// binary. Each check is self-contained, seeded and prints nothing.

#include <functional>
#include <string>
#include <vector>

namespace bss::verify {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
  double time_limit = 0.0;  // seconds; 0 means unlimited
};

struct Check {
  std::string name;
  double time_limit = 0.0;
  /// Full-size run; quick mode scales the sample counts down.
  std::function<CheckResult(bool quick)> run;
};

/// Acceptance checks in a fixed order.
std::vector<Check> acceptance_checks();

/// Runs one check, timing it; a time-limit overrun turns it into a failure.
CheckResult run_check(const Check& check, bool quick);

}  // namespace bss::verify
