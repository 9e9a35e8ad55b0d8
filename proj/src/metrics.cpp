#include "testprio/metrics.hpp"

namespace testprio {

double apfd(const std::vector<Outcome>& trace) {
  if (trace.empty()) throw DataError("apfd: empty trace");

  std::size_t faults = 0;
  std::uint64_t position_sum = 0;
  for (std::size_t i = 0; i < trace.size(); ++i) {
    switch (trace[i]) {
      case Outcome::Fault:
        ++faults;
        position_sum += i + 1;
        break;
      case Outcome::Pass:
        break;
      case Outcome::Excluded:
        throw DataError("apfd: trace contains an excluded test at position " +
                        std::to_string(i + 1));
    }
  }
  if (faults == 0) throw DataError("apfd: no faults in trace, metric undefined");

  const double n = static_cast<double>(trace.size());
  const double m = static_cast<double>(faults);
  return 1.0 - static_cast<double>(position_sum) / (n * m) + 1.0 / (2.0 * n);
}

}  // namespace testprio
