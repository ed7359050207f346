#pragma once

// Acceptance criteria as reusable checks. Each run reports PASS/FAIL with the
// measured values, plus a fingerprint of its numeric output that must not
// depend on the worker count.

#include <cstdint>
#include <string>
#include <vector>

namespace certhom::criteria {

struct Options {
  std::uint64_t seed = 7;
  int threads = 1;
};

struct Result {
  int id = 0;
  std::string title;
  bool passed = true;
  std::vector<std::string> details;
  std::string fingerprint;
  double seconds = 0.0;
};

Result condition_exactness(const Options& options);      // 1
Result fekete_quartic_mu(const Options& options);        // 2
Result r_optimization(const Options& options);           // 3
Result certified_average_steps(const Options& options);  // 4
Result one_root_ordering(const Options& options);        // 5
Result step_rule_compliance(const Options& options);     // 6
Result path_jump_freedom(const Options& options);        // 7
Result random_pair_invariants(const Options& options);   // 8
Result desk_scale_search(const Options& options);        // 9

// Reruns 4, 5, 7 and 9 with a different worker count and compares
// fingerprints against `baseline` (results of those criteria, any order).
Result determinism(const Options& options, const std::vector<Result>& baseline);

Result run(int id, const Options& options);

// Criteria that need no long Monte Carlo runs.
const std::vector<int>& deterministic_subset();

// "PASS [id] title" followed by indented detail lines.
std::string format(const Result& result);

}  // namespace certhom::criteria
