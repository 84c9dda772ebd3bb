// Prints one PASS/FAIL line per acceptance criterion. With arguments, runs
// only the listed ids. Exits non-zero if any criterion fails.

#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "maxpart/validation.hpp"

int main(int argc, char** argv) {
  std::vector<int> ids;
  for (int i = 1; i < argc; ++i) ids.push_back(std::atoi(argv[i]));
  if (ids.empty()) ids = maxpart::acceptance_ids();
  bool all = true;
  maxpart::run_acceptance(ids, [&](const maxpart::CriterionResult& r) {
    all = all && r.passed;
    std::cout << maxpart::format_result(r) << std::endl;
  });
  return all ? EXIT_SUCCESS : EXIT_FAILURE;
}
