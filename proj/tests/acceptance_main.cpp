// Acceptance runner: executes every criterion of the verification suite with
// the pinned production configuration and prints one pass/fail line per
// criterion.  Exit status 0 only when every criterion passes.

#include <cstdio>

#include "cfw/suite.hpp"

int main() {
  cfw::SuiteConfig cfg;  // pinned defaults; tolerances live in the suite
  std::vector<cfw::CriterionResult> results = cfw::run_suite(cfg);

  // Byte-identical reports on a reduced configuration, run twice.
  cfw::SuiteConfig reduced = cfg;
  reduced.vacuum_nodes = 17;
  reduced.dressed_nodes = 17;
  reduced.convergence = false;
  reduced.with_geometry = false;
  reduced.with_flows = false;
  results.push_back(cfw::determinism_check(reduced));

  bool all = true;
  int k = 0;
  for (const auto& r : results) {
    ++k;
    const bool ok = r.pass();
    std::printf("criterion %d [%s]: %s (%.1fs)\n", k, r.name.c_str(),
                ok ? "PASS" : "FAIL", r.seconds);
    for (const auto& c : r.checks)
      if (!c.pass)
        std::printf("    %-40s value=%.6e tol=%.6e %s\n", c.name.c_str(),
                    c.value, c.tol, c.note.c_str());
    all = all && ok;
  }
  std::printf("acceptance: %s\n", all ? "PASS" : "FAIL");
  return all ? 0 : 1;
}
