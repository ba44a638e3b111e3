#pragma once

#include <string>
#include <vector>

namespace opasim {

struct SelfCheckOptions {
  double oracle_tolerance = 1e-4;
  // Test hook: feeds a negative internal loss into the decay-rate check.
  bool inject_negative_loss = false;
};

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Invariant suite behind `opasim selfcheck`, on reduced grids.
std::vector<CheckResult> RunSelfCheck(const SelfCheckOptions& options);

}  // namespace opasim
