#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace sphq::cli {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  /// key measured numbers, one line
  std::string detail;
  double seconds = 0.0;
};

struct AcceptanceOptions {
  std::uint64_t seed = 20240531;
  /// empty: all criteria
  std::vector<int> only;
};

inline constexpr int kCriterionCount = 10;

/// Runs one criterion. An exception inside the check counts as a failure with its message.
CriterionResult run_criterion(int id, const AcceptanceOptions& opts);

/// Runs the selected criteria in order, calling on_result after each.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts,
                                            const std::function<void(const CriterionResult&)>& on_result = {});

/// "PASS [3] name: detail"
std::string format_result(const CriterionResult& r);

}  // namespace sphq::cli
