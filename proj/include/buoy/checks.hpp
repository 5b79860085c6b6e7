#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace buoy {

struct SuiteResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct CheckOptions {
  /// Replace the density by d = 0.3 everywhere in the detailed-balance suite.
  bool corrupt_density = false;
  std::uint64_t seed = 1;
};

/// detailed_balance, mu_monotonicity, fluid_limit, brute_force.
const std::vector<std::string>& suite_names();

/// Runs the named suites in the order given; throws ParamError on an unknown name.
std::vector<SuiteResult> run_checks(const std::vector<std::string>& suites,
                                    const CheckOptions& options = {});

}  // namespace buoy
