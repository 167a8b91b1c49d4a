#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace lnlab {

struct CriterionResult {
  int id = 0;
  std::string group;
  std::string title;
  bool passed = false;
  std::string measured;
  std::string expected;
  double seconds = 0.0;
  double time_limit = 0.0;  // zero when the criterion has no time budget
};

struct AcceptanceOptions {
  /// Group names to run; empty runs everything.
  std::vector<std::string> only;
  std::uint64_t seed = 20240917;
};

/// Group names in criterion order.
std::vector<std::string> acceptance_groups();

/// Throws InvalidArgument for an unknown group name in options.only.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options);

/// One PASS/FAIL line per criterion, then a totals line.
void print_acceptance(std::ostream& os,
                      const std::vector<CriterionResult>& results);

}  // namespace lnlab
