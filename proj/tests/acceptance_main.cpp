// Acceptance runner: executes the nine verification criteria and prints one
// pass/fail line each.  Exit status is nonzero if any criterion fails.
#include <cstdio>

#include "ceq/acceptance.hpp"

int main() {
  ceq::Report report = ceq::acceptance::run_all();
  int failures = 0;
  for (const auto& row : report.rows) {
    std::printf("[%s] %s - %s\n      %s\n", row.id.c_str(), row.pass ? "PASS" : "FAIL",
                row.name.c_str(), row.detail.c_str());
    if (!row.pass) ++failures;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(report.rows.size()) - failures,
              report.rows.size());
  return failures == 0 ? 0 : 1;
}
