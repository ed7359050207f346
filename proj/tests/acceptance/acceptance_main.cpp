// Acceptance suite: one PASS/FAIL line per criterion, detail lines indented
// beneath it. Exit status is nonzero when any criterion fails.
//
//   certhom_acceptance [--seed N] [--threads N] [--only 1,2,...]

#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "criteria.hpp"

namespace {

std::vector<int> parse_ids(const std::string& text) {
  std::vector<int> ids;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) ids.push_back(std::stoi(item));
  return ids;
}

}  // namespace

int main(int argc, char** argv) {
  namespace cr = certhom::criteria;
  cr::Options options;
  std::vector<int> ids = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  for (int i = 1; i + 1 < argc; i += 2) {
    const std::string flag = argv[i];
    if (flag == "--seed")
      options.seed = std::stoull(argv[i + 1]);
    else if (flag == "--threads")
      options.threads = std::stoi(argv[i + 1]);
    else if (flag == "--only")
      ids = parse_ids(argv[i + 1]);
    else {
      std::cerr << "unknown flag " << flag << "\n";
      return 2;
    }
  }
  std::cout << "acceptance seed " << options.seed << ", threads "
            << options.threads << "\n"
            << std::flush;

  std::vector<cr::Result> results;
  int failed = 0;
  for (int id : ids) {
    cr::Result r =
        id == 10 ? cr::determinism(options, results) : cr::run(id, options);
    std::cout << cr::format(r) << std::flush;
    if (!r.passed) ++failed;
    results.push_back(std::move(r));
  }

  std::cout << "\nsummary\n";
  for (const auto& r : results)
    std::cout << (r.passed ? "PASS" : "FAIL") << " criterion " << r.id << ": "
              << r.title << "\n";
  std::cout << failed << " of " << results.size() << " criteria failed\n";
  return failed == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
