#pragma once

// The acceptance checks, runnable from the test suite and from
// `maxpart validate`. Each check compares against an oracle computed here,
// independently of the code path under test where one exists.

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace maxpart {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
  double budget_seconds = 0.0;
};

/// Ids 1..12.
std::vector<int> acceptance_ids();

/// Runs one check. A check that throws is reported as failed with the error
/// text; exceeding the time budget also fails it.
CriterionResult run_criterion(int id);

std::vector<CriterionResult> run_acceptance(
    std::span<const int> ids,
    const std::function<void(const CriterionResult&)>& on_result = {});

/// "PASS [ 1] name  detail", with "0.01s/1s" after the name when asked.
std::string format_result(const CriterionResult& r, bool with_time = true);

}  // namespace maxpart
