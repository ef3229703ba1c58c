#pragma once

// The end-to-end verification suite: each criterion bundles residual and
// convergence checks with pinned tolerances.  Shared by the CLI `verify`
// command and the acceptance runner.

#include <string>
#include <vector>

#include "cfw/conservation.hpp"
#include "cfw/eds.hpp"

namespace cfw {

struct CheckItem {
  std::string name;
  double value = 0.0;
  double tol = 0.0;
  bool pass = false;
  std::string note;  // e.g. "ratio", "skipped"
};

struct CriterionResult {
  std::string name;
  std::vector<CheckItem> checks;
  double seconds = 0.0;
  bool pass() const;
};

struct SuiteConfig {
  unsigned seed = 7;
  Cplx pole{1.0, 0.55};
  double extent = 1.6;
  int vacuum_nodes = 33;
  int dressed_nodes = 65;  // fine grid uses 2N-1 nodes
  int flow_nodes = 33;
  int flow_slices = 9;  // fine study uses 2M-1 slices
  double flow_t_half = 0.05;
  int depth = 6;
  double delta = 0.1;        // lambda step for the flat abelian map
  bool convergence = true;   // run the h-halving studies
  bool with_geometry = true;
  bool with_flows = true;
};

std::vector<CriterionResult> run_suite(const SuiteConfig& cfg);

// Deterministic JSON text for a suite run (no wall-clock content).
std::string suite_report_json(const SuiteConfig& cfg,
                              const std::vector<CriterionResult>& results);

// Runs a reduced configuration twice and compares report bytes.
CriterionResult determinism_check(const SuiteConfig& reduced);

}  // namespace cfw
