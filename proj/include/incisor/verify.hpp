#pragma once

#include <functional>
#include <string>
#include <vector>

namespace incisor {

struct CheckOutcome {
  std::string id;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

struct VerifyConfig {
  std::string out_dir; // empty: no artifact files written
  std::function<void(const CheckOutcome&)> on_check; // progress callback, may be null
};

/// The reproduction suite: every headline quantity and qualitative claim
/// the solver is expected to reproduce, each with a pinned tolerance.
/// Returns one outcome per check; writes curve/report artifacts and a
/// summary CSV when out_dir is set.
std::vector<CheckOutcome> run_verification(const VerifyConfig& config);

} // namespace incisor
