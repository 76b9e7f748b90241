#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace cfp {

struct SelftestCheck {
  std::string name;
  bool pass = false;
  std::string detail;  // deterministic counters plus the first failure
};

struct SelftestReport {
  std::uint64_t seed = 0;
  std::vector<SelftestCheck> checks;

  bool all_pass() const;
};

/// Runs the built-in random-space oracle suites with the given seed:
/// contraction certificates vs brute-force fixed points, Caristi descent,
/// telescoping bounds on single- and set-valued orbits, the Hausdorff
/// oracle, gauge-reduction consistency, windowed-contraction deltas,
/// value-iteration convergence, and the split-modulus degeneracy report.
/// The report is a pure function of the seed.
SelftestReport run_selftest(std::uint64_t seed);

}  // namespace cfp
