#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include <Eigen/Core>

namespace bsdtest {

/// reject[i] is true when H_0i is rejected.
using DecisionVector = std::vector<bool>;

struct StageRecord {
  Eigen::Index stage = 0;   // 1-based stage number
  Eigen::Index index = 0;   // chosen original index (0-based)
  double statistic = 0.0;   // log S for BSD, |U| for MRD
  bool rejected = false;
};

struct StepTrace {
  std::vector<StageRecord> stages;
  /// Stage at which the first acceptance happened, or m + 1 if every
  /// hypothesis was rejected.
  Eigen::Index stop_stage = 1;
};

struct StepDownResult {
  DecisionVector decisions;
  StepTrace trace;
};

std::size_t count_rejections(const DecisionVector& d);

/// Human-readable trace, one line per stage, indices printed 1-based.
void print_trace(std::ostream& out, const StepDownResult& result, const char* statistic_name);

}  // namespace bsdtest
