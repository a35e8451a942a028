#pragma once

// Invariant suites behind `check --suite`.

#include <string>
#include <vector>

#include "freeconv/subordination.hpp"

namespace freeconv::cli {

struct CheckResult {
  std::string suite;
  std::string name;
  double residual = 0;
  double threshold = 0;
  bool pass() const { return residual <= threshold; }
};

std::vector<std::string> suite_names();

/// Runs one suite, or every suite for "all". Throws ParseError for unknown names.
std::vector<CheckResult> run_suite(const std::string& suite, const SolverConfig& cfg);

}  // namespace freeconv::cli
