#include "testprio/schedulers.hpp"

#include <algorithm>
#include <random>

namespace testprio {

const char* to_string(StaticKind k) {
  switch (k) {
    case StaticKind::Optimal:
      return "optimal";
    case StaticKind::Worst:
      return "worst";
    case StaticKind::Random:
      return "random";
    case StaticKind::External:
      return "external";
  }
  throw ConfigError("unknown static scheduler kind");
}

namespace {

void require_evaluable(const CycleLog& log, const char* kind) {
  if (!is_evaluable(log)) {
    throw DataError(std::string(kind) + " schedule needs a cycle with at least "
                    "one Fault and one Pass (cycle " + std::to_string(log.cycle) +
                    " has " + std::to_string(log.fault_count()) + " / " +
                    std::to_string(log.pass_count()) + ")");
  }
}

Schedule partition_by_outcome(const CycleLog& log, Outcome first_class) {
  Schedule s;
  s.order.reserve(log.outcomes.size());
  for (const auto& [test, outcome] : log.outcomes) {
    if (outcome == first_class) s.order.push_back(test);
  }
  for (const auto& [test, outcome] : log.outcomes) {
    if (outcome != first_class && outcome != Outcome::Excluded) {
      s.order.push_back(test);
    }
  }
  return s;
}

// Uniform integer in [0, n) by rejection, so the result does not depend on
// how a particular standard library implements distributions.
std::uint64_t bounded(std::mt19937_64& g, std::uint64_t n) {
  const std::uint64_t threshold = (0 - n) % n;  // 2^64 mod n
  for (;;) {
    const std::uint64_t r = g();
    if (r >= threshold) return r % n;
  }
}

}  // namespace

Schedule schedule_optimal(const CycleLog& log) {
  require_evaluable(log, "optimal");
  return partition_by_outcome(log, Outcome::Fault);
}

Schedule schedule_worst(const CycleLog& log) {
  require_evaluable(log, "worst");
  return partition_by_outcome(log, Outcome::Pass);
}

Schedule schedule_random(const CycleLog& log, std::uint64_t seed) {
  Schedule s;
  s.order = log.schedulable();
  std::mt19937_64 g(seed);
  for (std::size_t i = s.order.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(bounded(g, i));
    std::swap(s.order[i - 1], s.order[j]);
  }
  return s;
}

Schedule schedule_from_scores(const CycleLog& log,
                              const std::unordered_map<TestId, double>& raw_scores) {
  Schedule s;
  s.order = log.schedulable();
  const auto score_of = [&](const TestId& t) {
    const auto it = raw_scores.find(t);
    return it == raw_scores.end() ? 0.0 : it->second;
  };
  std::stable_sort(s.order.begin(), s.order.end(),
                   [&](const TestId& a, const TestId& b) {
                     return score_of(a) > score_of(b);
                   });
  return s;
}

}  // namespace testprio
