// Acceptance run: one PASS/FAIL line per criterion, failed checks listed beneath.
// Exit status is 0 only when every criterion passes.

#include <catenoid/parallel.hpp>
#include <catenoid/verification.hpp>

#include <cmath>
#include <cstdio>

int main() {
  catenoid::VerifyConfig cfg;
  cfg.threads = catenoid::threads_from_env();
  const catenoid::VerificationReport rep = catenoid::run_verification(cfg);
  for (const auto& c : rep.criteria) {
    std::printf("[%s] criterion %2d: %s (%zu checks, %.3f s)\n", c.pass() ? "PASS" : "FAIL", c.number, c.title.c_str(),
                c.checks.size(), c.seconds);
    for (const auto& k : c.checks) {
      if (k.pass) continue;
      std::printf("         failed: %s  actual %.6e  expected %.6e  tolerance %.3e\n", k.name.c_str(), k.actual,
                  k.expected, k.tolerance);
    }
  }
  std::printf("%s: %zu criteria, %.2f s total\n", rep.pass() ? "ALL PASS" : "FAILURES", rep.criteria.size(), rep.seconds);
  return rep.pass() ? 0 : 1;
}
