#pragma once
// Domain types for CI verdict histories (tests, cycles, outcomes) and the
// normalization rules every other component builds on. All types are plain
// values: immutable after construction and safe to share across threads.

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "testprio/errors.hpp"

namespace testprio {

using TestId = std::string;
using CycleId = std::int64_t;

// Verdict code as recorded by the CI system:
//   0 pass, 1 fail, 2 invalid, 3 resources unavailable.
// Anything else is rejected at construction.
struct RawVerdict {
  int code = 0;

  RawVerdict() = default;
  explicit RawVerdict(int c);

  friend bool operator==(const RawVerdict&, const RawVerdict&) = default;
};

enum class Outcome { Pass, Fault, Excluded };

const char* to_string(Outcome o);

// Canonical CSV code for an outcome class (Pass -> 0, Fault -> 1, Excluded -> 3).
int to_raw_code(Outcome o);

// One raw test outcome in one cycle. `sequence` orders repeated executions of
// the same test within a cycle; the highest one wins during normalization.
struct VerdictRecord {
  TestId test;
  CycleId cycle = 0;
  RawVerdict raw;
  std::int64_t sequence = 0;
};

// Normalized outcomes of one cycle: at most one entry per test, kept in the
// order the tests first appeared in the source data. That order is the
// tie-break everywhere a "dataset order" is needed.
struct CycleLog {
  CycleId cycle = 0;
  std::vector<std::pair<TestId, Outcome>> outcomes;

  std::optional<Outcome> outcome_of(const TestId& test) const;
  std::vector<TestId> schedulable() const;  // non-Excluded tests, in order
  std::size_t fault_count() const;
  std::size_t pass_count() const;

  friend bool operator==(const CycleLog&, const CycleLog&) = default;
};

// A whole history: cycles strictly ascending by id. Test suites may differ
// from cycle to cycle; `universe` is every test id seen anywhere.
struct Dataset {
  std::vector<CycleLog> cycles;
  std::set<TestId> universe;

  const CycleLog* find_cycle(CycleId id) const;

  friend bool operator==(const Dataset&, const Dataset&) = default;
};

/// 0 -> Pass, 1 and 2 -> Fault, 3 -> Excluded.
Outcome classify_verdict(RawVerdict raw);

// Collapses repeated executions of each test within one cycle to the record
// with the highest sequence number, then classifies it. All records must
// belong to the same cycle; duplicate (test, sequence) pairs are malformed.
CycleLog normalize_cycle(const std::vector<VerdictRecord>& records);

// A cycle is worth evaluating only if it has at least one Fault and at least
// one Pass outcome. Excluded entries count as neither.
bool is_evaluable(const CycleLog& log);

}  // namespace testprio
