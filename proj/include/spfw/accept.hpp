#ifndef SPFW_ACCEPT_HPP
#define SPFW_ACCEPT_HPP

#include <string>
#include <vector>

#include "spfw/config.hpp"

// Acceptance checks: each one builds its instance, runs the configured
// algorithm, and validates the proven per-iteration bounds at their stated
// tolerances. Checks report measured-versus-bound detail strings so a
// failure is diagnosable from the output alone.
namespace spfw::accept {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

// Names accepted by run_check, in suite order.
const std::vector<std::string>& check_names();

// Runs one named check; cfg supplies parameter overrides (seed, iters,
// dimension, mu, ...) and falls back to the check's standard instance.
CheckResult run_check(const std::string& name, const KeyValueMap& cfg);

// Runs every check with its standard configuration.
std::vector<CheckResult> run_all();

// True when the three recorded gaps satisfy the away-step sandwich
// 0.5 g_pfw <= max(g_fw, g_away) <= g_pfw within the slack.
bool gap_sandwich_ok(const GapReport& gaps, double slack);

}  // namespace spfw::accept

#endif  // SPFW_ACCEPT_HPP
