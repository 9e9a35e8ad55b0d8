#pragma once
// The conditional-probability rescheduler. Tests execute one at a time; after
// each verdict the pending tests correlated with the executed one have their
// scores shifted by k times the conditional probability of sharing that
// verdict, and the highest-scoring pending test runs next.

#include <iosfwd>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

#include "testprio/correlation.hpp"
#include "testprio/core.hpp"
#include "testprio/schedulers.hpp"

namespace testprio {

struct CpConfig {
  double k = 0.8;  // multiplier applied to conditional probabilities

  void validate() const;  // k >= 0
};

// Mutable priority state of one in-flight cycle execution. Slots keep the
// static schedule's order, which doubles as the tie-break for next_test.
// Scores are ordinary doubles and are allowed to go negative.
class ScoreBoard {
 public:
  // Test at 1-based rank n starts with score 1/n; everything pending.
  explicit ScoreBoard(const Schedule& schedule);

  std::size_t size() const { return slots_.size(); }
  std::size_t pending_count() const { return size() - executed_.size(); }
  bool is_pending(const TestId& test) const;
  std::optional<double> score_of(const TestId& test) const;

  // Pending tests only; an update to an executed test is a bug.
  void adjust_score(const TestId& test, double delta);

  // Moves a pending test into the executed sequence with its outcome.
  void mark_executed(const TestId& test, Outcome outcome);

  // Pending test with the maximal score; earlier static rank wins ties.
  TestId next_test() const;

  const std::vector<std::pair<TestId, Outcome>>& executed() const {
    return executed_;
  }

 private:
  struct Slot {
    TestId test;
    double score = 0.0;
    bool pending = true;
  };

  std::vector<Slot> slots_;  // static schedule order
  std::unordered_map<TestId, std::size_t> index_;
  std::vector<std::pair<TestId, Outcome>> executed_;
};

inline ScoreBoard init_scores(const Schedule& schedule) {
  return ScoreBoard(schedule);
}

// The realized execution order with its oracle outcomes.
struct ExecutionTrace {
  std::vector<std::pair<TestId, Outcome>> order;

  std::vector<TestId> test_sequence() const;
  std::vector<Outcome> outcome_sequence() const;

  friend bool operator==(const ExecutionTrace&, const ExecutionTrace&) = default;
};

// One step of the rescheduler: a Fault raises every pending test t with a
// fail entry (t, executed) by k*p, a Pass lowers pass-correlated ones by k*p.
// Returns the deltas actually applied, sorted by test id. The executed test
// must already be off the pending set; Excluded outcomes are a contract
// violation.
std::vector<std::pair<TestId, double>> apply_verdict(ScoreBoard& board,
                                                     const TestId& executed,
                                                     Outcome outcome,
                                                     const CorrelationTable& table,
                                                     const CpConfig& cfg);

// Pairs a static schedule with its recorded outcomes without any rescheduling.
ExecutionTrace trace_of(const Schedule& schedule, const CycleLog& oracle);

// Runs the execute/reschedule loop to completion against recorded outcomes.
// The first executed test is the static scheduler's top pick by construction
// (rank-1 score is the unique maximum). With k = 0 or an empty table the
// trace reproduces the static order exactly. step_log, when given, receives
// one JSON object per step: {"step", "test", "outcome", "score_deltas"}.
ExecutionTrace run_dynamic(const Schedule& schedule, const CycleLog& oracle,
                           const CorrelationTable& table, const CpConfig& cfg,
                           std::ostream* step_log = nullptr);

}  // namespace testprio
