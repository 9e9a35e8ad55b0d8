#pragma once
// Static schedulers: the verdict-aware Optimal/Worst bounds, a seeded uniform
// Random baseline, and an adapter for any external score assignment.

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "testprio/core.hpp"

namespace testprio {

// A permutation of a cycle's schedulable (non-Excluded) tests.
struct Schedule {
  std::vector<TestId> order;

  std::size_t size() const { return order.size(); }
  bool empty() const { return order.empty(); }

  friend bool operator==(const Schedule&, const Schedule&) = default;
};

enum class StaticKind { Optimal, Worst, Random, External };

const char* to_string(StaticKind k);

// All failing tests before all passing ones; within each class the cycle's
// own order is kept, so the result is deterministic. Rejects non-evaluable
// logs.
Schedule schedule_optimal(const CycleLog& log);

// Mirror image of schedule_optimal: passing tests first.
Schedule schedule_worst(const CycleLog& log);

// Uniformly random permutation, fully determined by the seed. Uses
// std::mt19937_64 with an unbiased (rejection-sampled) Fisher-Yates shuffle,
// so a given seed produces the same schedule on every platform.
Schedule schedule_random(const CycleLog& log, std::uint64_t seed);

// Orders tests by descending raw score. Ties, and tests missing from the
// map (scored 0.0), fall back to the cycle's own order.
Schedule schedule_from_scores(const CycleLog& log,
                              const std::unordered_map<TestId, double>& raw_scores);

}  // namespace testprio
