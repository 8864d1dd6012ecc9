// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include <cstdio>
#include <cstring>

#include "bss/verify.hpp"

int main(int argc, char** argv) {
  const bool quick = argc > 1 && std::strcmp(argv[1], "--quick") == 0;
  int failed = 0;
  for (const auto& check : bss::verify::acceptance_checks()) {
    const auto r = bss::verify::run_check(check, quick);
    std::printf("%s %s (%.2fs): %s\n", r.passed ? "PASS" : "FAIL", r.name.c_str(), r.seconds, r.detail.c_str());
    std::fflush(stdout);
    if (!r.passed) ++failed;
  }
  std::printf("%d of %zu criteria failed\n", failed, bss::verify::acceptance_checks().size());
  return failed == 0 ? 0 : 1;
}
