#include <cstdio>

#include "krontrace/acceptance.hpp"

// One line per criterion, pass/fail summary, exit 0 iff everything passed.
int main() {
  kt::AcceptanceOptions opt;
  opt.on_result = [](const kt::CriterionResult& c) {
    std::printf("[%2d/15] %s %-22s %s\n", c.id, c.pass ? "PASS" : "FAIL",
                c.name.c_str(), c.detail.c_str());
    std::fflush(stdout);
  };
  auto results = kt::run_acceptance(opt);
  int failed = 0;
  for (const auto& c : results)
    if (!c.pass) ++failed;
  if (failed == 0)
    std::printf("ALL PASS (%zu criteria)\n", results.size());
  else
    std::printf("%d of %zu criteria FAILED\n", failed, results.size());
  return failed == 0 ? 0 : 1;
}
