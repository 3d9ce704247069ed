#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "hypb/cli.hpp"

namespace hypb {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string details;   // measured numbers; deterministic given the seed
  double seconds = 0.0;  // wall time; logged but never written to artifacts
};

struct AcceptanceReport {
  std::vector<CriterionResult> results;
  bool all_passed = false;
};

// Runs the full acceptance suite against the pinned shipped configuration,
// honoring only seed, threads, and output_dir from cfg so the checked
// claims never drift with user configuration. Prints one pass/fail line per
// criterion to log and writes artifacts plus acceptance_report.json under
// output_dir; the written artifacts carry no timing data, so reruns with
// the same seed are byte-identical.
AcceptanceReport run_acceptance(const RunConfig& cfg, std::ostream& log);

}  // namespace hypb
