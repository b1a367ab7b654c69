// Acceptance suite: runs every reproduction check at its pinned
// tolerance and prints one PASS/FAIL line per criterion.

#include <cstdio>

#include "incisor/verify.hpp"

int main() {
  incisor::VerifyConfig config;
  config.out_dir = "acceptance_out";
  config.on_check = [](const incisor::CheckOutcome& outcome) {
    std::printf("[%s] %-4s %s (%.1fs)\n", outcome.pass ? "PASS" : "FAIL", outcome.id.c_str(),
                outcome.name.c_str(), outcome.seconds);
    if (!outcome.detail.empty()) std::printf("       %s\n", outcome.detail.c_str());
    std::fflush(stdout);
  };
  const auto outcomes = incisor::run_verification(config);
  int failures = 0;
  for (const auto& outcome : outcomes) failures += outcome.pass ? 0 : 1;
  std::printf("%zu checks, %d failed\n", outcomes.size(), failures);
  return failures == 0 ? 0 : 1;
}
