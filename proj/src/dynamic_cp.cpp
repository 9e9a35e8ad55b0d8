#include "testprio/dynamic_cp.hpp"

#include <algorithm>
#include <ostream>
#include <unordered_set>

#include "json.hpp"

namespace testprio {

void CpConfig::validate() const {
  if (!(k >= 0.0)) {
    throw ConfigError("k must be >= 0, got " + std::to_string(k));
  }
}

ScoreBoard::ScoreBoard(const Schedule& schedule) {
  if (schedule.empty()) throw DataError("cannot initialize scores for an empty schedule");
  slots_.reserve(schedule.size());
  for (std::size_t i = 0; i < schedule.order.size(); ++i) {
    const TestId& test = schedule.order[i];
    const auto [it, inserted] = index_.emplace(test, i);
    if (!inserted) {
      throw DataError("schedule lists test '" + test + "' more than once");
    }
    slots_.push_back({test, 1.0 / static_cast<double>(i + 1), true});
  }
}

bool ScoreBoard::is_pending(const TestId& test) const {
  const auto it = index_.find(test);
  return it != index_.end() && slots_[it->second].pending;
}

std::optional<double> ScoreBoard::score_of(const TestId& test) const {
  const auto it = index_.find(test);
  if (it == index_.end()) return std::nullopt;
  return slots_[it->second].score;
}

void ScoreBoard::adjust_score(const TestId& test, double delta) {
  const auto it = index_.find(test);
  if (it == index_.end() || !slots_[it->second].pending) {
    throw DataError("adjust_score on a test that is not pending: '" + test + "'");
  }
  slots_[it->second].score += delta;
}

void ScoreBoard::mark_executed(const TestId& test, Outcome outcome) {
  const auto it = index_.find(test);
  if (it == index_.end() || !slots_[it->second].pending) {
    throw DataError("mark_executed on a test that is not pending: '" + test + "'");
  }
  slots_[it->second].pending = false;
  executed_.emplace_back(test, outcome);
}

TestId ScoreBoard::next_test() const {
  const Slot* best = nullptr;
  for (const Slot& slot : slots_) {
    if (slot.pending && (best == nullptr || slot.score > best->score)) {
      best = &slot;
    }
  }
  if (best == nullptr) throw DataError("next_test called with nothing pending");
  return best->test;
}

std::vector<TestId> ExecutionTrace::test_sequence() const {
  std::vector<TestId> tests;
  tests.reserve(order.size());
  for (const auto& [t, o] : order) tests.push_back(t);
  return tests;
}

std::vector<Outcome> ExecutionTrace::outcome_sequence() const {
  std::vector<Outcome> outcomes;
  outcomes.reserve(order.size());
  for (const auto& [t, o] : order) outcomes.push_back(o);
  return outcomes;
}

std::vector<std::pair<TestId, double>> apply_verdict(ScoreBoard& board,
                                                     const TestId& executed,
                                                     Outcome outcome,
                                                     const CorrelationTable& table,
                                                     const CpConfig& cfg) {
  cfg.validate();
  if (outcome == Outcome::Excluded) {
    throw DataError("apply_verdict cannot process an Excluded outcome for '" +
                    executed + "'");
  }
  if (board.is_pending(executed)) {
    throw DataError("apply_verdict for '" + executed +
                    "' before it was marked executed");
  }

  const bool failed = outcome == Outcome::Fault;
  const CorrelationTable::Entries* entries =
      failed ? table.fail_conditioned_on(executed)
             : table.pass_conditioned_on(executed);

  std::vector<std::pair<TestId, double>> deltas;
  if (entries != nullptr) {
    for (const auto& [pending, p] : *entries) {
      if (!board.is_pending(pending)) continue;
      const double delta = failed ? cfg.k * p : -cfg.k * p;
      if (delta == 0.0) continue;
      board.adjust_score(pending, delta);
      deltas.emplace_back(pending, delta);
    }
  }
  std::sort(deltas.begin(), deltas.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  return deltas;
}

namespace {

// The schedule must be exactly the oracle cycle's schedulable tests; the
// consume-set check catches duplicates as well as omissions.
std::unordered_set<TestId> oracle_tests(const Schedule& schedule,
                                        const CycleLog& oracle) {
  std::unordered_set<TestId> expected;
  for (const auto& [test, outcome] : oracle.outcomes) {
    if (outcome != Outcome::Excluded) expected.insert(test);
  }
  auto remaining = expected;
  for (const TestId& test : schedule.order) {
    if (remaining.erase(test) == 0) {
      throw DataError("schedule lists test '" + test +
                      "' that is duplicated or not schedulable in cycle " +
                      std::to_string(oracle.cycle));
    }
  }
  if (!remaining.empty()) {
    throw DataError("schedule is missing " + std::to_string(remaining.size()) +
                    " schedulable test(s) of cycle " + std::to_string(oracle.cycle) +
                    ", e.g. '" + *remaining.begin() + "'");
  }
  return expected;
}

Outcome outcome_or_throw(const CycleLog& oracle, const TestId& test) {
  const auto o = oracle.outcome_of(test);
  if (!o) {
    throw DataError("cycle " + std::to_string(oracle.cycle) +
                    " has no outcome for '" + test + "'");
  }
  return *o;
}

}  // namespace

ExecutionTrace trace_of(const Schedule& schedule, const CycleLog& oracle) {
  oracle_tests(schedule, oracle);
  ExecutionTrace trace;
  trace.order.reserve(schedule.size());
  for (const TestId& test : schedule.order) {
    trace.order.emplace_back(test, outcome_or_throw(oracle, test));
  }
  return trace;
}

ExecutionTrace run_dynamic(const Schedule& schedule, const CycleLog& oracle,
                           const CorrelationTable& table, const CpConfig& cfg,
                           std::ostream* step_log) {
  cfg.validate();
  oracle_tests(schedule, oracle);

  ScoreBoard board(schedule);
  for (std::size_t step = 0; step < schedule.size(); ++step) {
    const TestId test = board.next_test();
    const Outcome outcome = outcome_or_throw(oracle, test);
    board.mark_executed(test, outcome);
    const auto deltas = apply_verdict(board, test, outcome, table, cfg);

    if (step_log != nullptr) {
      nlohmann::json j;
      j["step"] = step;
      j["test"] = test;
      j["outcome"] = to_string(outcome);
      auto& jd = j["score_deltas"] = nlohmann::json::object();
      for (const auto& [t, d] : deltas) jd[t] = d;
      *step_log << j.dump() << '\n';
    }
  }

  ExecutionTrace trace;
  trace.order = board.executed();
  return trace;
}

}  // namespace testprio
