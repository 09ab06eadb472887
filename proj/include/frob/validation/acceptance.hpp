#pragma once

#include <string>
#include <vector>

namespace frob::validation {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool passed = false;
  /// Measured quantities behind the verdict.
  std::string detail;
  double seconds = 0.0;
};

/// Criteria 1..9.
std::vector<int> criterion_ids();

/// Runs one criterion. Exceptions inside a criterion count as failures.
CriterionResult run_criterion(int id);

/// Runs the given criteria (all when empty) in order.
std::vector<CriterionResult> run_acceptance(const std::vector<int>& ids = {});

/// "PASS [3] title: detail (1.2 s)"
std::string format_line(const CriterionResult& r);

}  // namespace frob::validation
