#include "bsdtest/step_down.hpp"

#include <algorithm>
#include <ostream>

namespace bsdtest {

std::size_t count_rejections(const DecisionVector& d) {
  return static_cast<std::size_t>(std::count(d.begin(), d.end(), true));
}

void print_trace(std::ostream& out, const StepDownResult& result, const char* statistic_name) {
  const auto old = out.precision(10);
  out << "stage\tindex\t" << statistic_name << "\tdecision\n";
  for (const auto& s : result.trace.stages)
    out << s.stage << '\t' << s.index + 1 << '\t' << s.statistic << '\t'
        << (s.rejected ? "reject" : "accept") << '\n';
  out << "stop_stage\t" << result.trace.stop_stage << '\n';
  out << "rejected\t" << count_rejections(result.decisions) << " of " << result.decisions.size()
      << '\n';
  out.precision(old);
}

}  // namespace bsdtest
