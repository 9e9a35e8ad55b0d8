#pragma once
// Shared helpers for the test suites: log construction, random evaluable
// logs, and independent brute-force oracles the implementation is checked
// against.

#include <algorithm>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "testprio/core.hpp"
#include "testprio/metrics.hpp"

namespace testutil {

using namespace testprio;

inline CycleLog make_log(CycleId cycle,
                         std::vector<std::pair<TestId, Outcome>> outcomes) {
  CycleLog log;
  log.cycle = cycle;
  log.outcomes = std::move(outcomes);
  return log;
}

// Random cycle with n >= 2 tests t1..tn and at least one Fault and one Pass.
inline CycleLog random_evaluable_log(CycleId cycle, int n, std::mt19937_64& g) {
  std::vector<std::pair<TestId, Outcome>> outcomes;
  outcomes.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    outcomes.emplace_back("t" + std::to_string(i + 1),
                          (g() & 1) != 0 ? Outcome::Fault : Outcome::Pass);
  }
  const auto un = static_cast<std::uint64_t>(n);
  const std::size_t fault_at = static_cast<std::size_t>(g() % un);
  std::size_t pass_at = fault_at;
  while (pass_at == fault_at) pass_at = static_cast<std::size_t>(g() % un);
  outcomes[fault_at].second = Outcome::Fault;
  outcomes[pass_at].second = Outcome::Pass;
  return make_log(cycle, std::move(outcomes));
}

struct ApfdBounds {
  double min = 0.0;
  double max = 0.0;
};

// Exact APFD extrema by enumerating every permutation of the log's
// schedulable outcomes. Only feasible for small logs.
inline ApfdBounds brute_force_bounds(const CycleLog& log) {
  std::vector<Outcome> outcomes;
  for (const auto& [test, o] : log.outcomes) {
    if (o != Outcome::Excluded) outcomes.push_back(o);
  }
  std::sort(outcomes.begin(), outcomes.end());
  ApfdBounds b{2.0, -1.0};
  do {
    const double v = apfd(outcomes);
    b.min = std::min(b.min, v);
    b.max = std::max(b.max, v);
  } while (std::next_permutation(outcomes.begin(), outcomes.end()));
  return b;
}

// Direct recount of P(pending = outcome | executed = outcome) over a window,
// skipping cycles where either test is absent or Excluded. Returns nothing
// when the pair never shares the outcome, mirroring the table's storage rule.
inline std::optional<double> naive_conditional(const std::vector<CycleLog>& window,
                                               const TestId& pending,
                                               const TestId& executed,
                                               Outcome outcome) {
  int joint = 0;
  int conditioning = 0;
  for (const CycleLog& log : window) {
    const auto eo = log.outcome_of(executed);
    const auto po = log.outcome_of(pending);
    if (!eo || *eo != outcome) continue;
    if (!po || *po == Outcome::Excluded) continue;
    ++conditioning;
    if (*po == outcome) ++joint;
  }
  if (joint == 0) return std::nullopt;
  return static_cast<double>(joint) / static_cast<double>(conditioning);
}

}  // namespace testutil
