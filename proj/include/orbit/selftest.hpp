#pragma once

#include <string>
#include <vector>

namespace orbit {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Quick invariant suite over every module (a few seconds); used by the
/// `selftest` subcommand.
std::vector<CheckResult> run_selftest();

}  // namespace orbit
