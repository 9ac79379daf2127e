#pragma once

// Exhaustive invariant suite at dims <= 8, runnable from the CLI. Output is
// deterministic (fixed dims, fixed seeds, no timing), one line per check.

#include <string>

namespace slicelab {

struct SelftestResult {
  int checks = 0;
  int failures = 0;
  std::string report;  // "ok <name>" / "FAIL <name>: <detail>" lines
};

SelftestResult run_selftest();

}  // namespace slicelab
