#pragma once

#include <functional>
#include <string>
#include <vector>

namespace kt {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;  // measured statistics, or the error that aborted it
};

struct AcceptanceOptions {
  // invoked as each criterion finishes, before the next one starts
  std::function<void(const CriterionResult&)> on_result;
};

// The full pass/fail battery behind `suite`. Thresholds are pinned here;
// every criterion runs even if an earlier one fails.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt = {});

}  // namespace kt
