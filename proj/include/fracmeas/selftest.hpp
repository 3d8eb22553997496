#pragma once

// Built-in cross-module verification suite, runnable from the CLI. Each check
// exercises an invariant that ties at least two modules together (closed-form
// constants vs Monte-Carlo, exact 1D oracle vs estimator, algebraic identity
// suites), so a regression in any one module trips a named check.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace fracmeas {

enum class SelftestLevel { Quick, Full };

struct SelftestCheck {
  std::string name;
  bool passed = false;
  std::string detail;  // one-line diagnostic with the measured numbers
  double seconds = 0.0;
};

struct SelftestReport {
  std::vector<SelftestCheck> checks;
  bool allPassed() const;
};

// Quick targets well under a minute; Full adds the sigma-sweep convergence
// experiment and the proposal-invariance comparison. The suite includes a
// deliberately perturbed constants fixture as a negative control (the check
// passes when the perturbation is detected).
SelftestReport runSelftest(SelftestLevel level, std::uint64_t seed = 20240901);

// One "PASS name (1.2s): detail" line per check plus a summary line.
void printReport(const SelftestReport& report, std::ostream& out);

}  // namespace fracmeas
