#pragma once
// Pairwise conditional co-failure / co-pass probabilities estimated over a
// sliding window of past cycles.

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <unordered_map>

#include "testprio/core.hpp"

namespace testprio {

struct WindowConfig {
  int history_length = 15;  // most recent prior cycles considered

  void validate() const;  // history_length >= 1
};

// Conditional probability tables, keyed by the already-executed test:
//
//   fail entry (pending, executed) = P(pending = Fault | executed = Fault)
//   pass entry (pending, executed) = P(pending = Pass  | executed = Pass)
//
// estimated by counting window cycles in which both tests ran with a
// non-Excluded outcome. Only pairs observed failing (passing) together at
// least once are stored, so every stored probability lies in (0, 1].
// Self-pairs never occur.
class CorrelationTable {
 public:
  using Entries = std::unordered_map<TestId, double>;  // pending -> probability

  std::optional<double> fail_given_fail(const TestId& pending,
                                        const TestId& executed) const;
  std::optional<double> pass_given_pass(const TestId& pending,
                                        const TestId& executed) const;

  // All entries conditioned on one executed test; nullptr when there are none.
  const Entries* fail_conditioned_on(const TestId& executed) const;
  const Entries* pass_conditioned_on(const TestId& executed) const;

  // Hand-construction, mostly for tests and tooling. Rejects self-pairs and
  // probabilities outside (0, 1].
  void set_fail(const TestId& pending, const TestId& executed, double p);
  void set_pass(const TestId& pending, const TestId& executed, double p);

  bool empty() const;
  std::size_t fail_pair_count() const;
  std::size_t pass_pair_count() const;

  // Debug dump: `pending,executed,direction,probability` rows, sorted.
  void dump_csv(std::ostream& out) const;

  friend bool operator==(const CorrelationTable&, const CorrelationTable&) = default;

 private:
  std::unordered_map<TestId, Entries> fail_;  // executed -> (pending -> p)
  std::unordered_map<TestId, Entries> pass_;
};

// Estimates tables from the min(history_length, available) cycles immediately
// preceding target_cycle. Cycles at or after target_cycle are ignored
// outright, so a table can never be contaminated by its own cycle or later
// ones. An empty window yields an empty table. For each ordered pair, cycles
// where either test is absent or Excluded count toward neither the numerator
// nor the denominator.
CorrelationTable build_tables(std::span<const CycleLog> history,
                              CycleId target_cycle, const WindowConfig& cfg);

inline std::optional<double> lookup_fail(const CorrelationTable& t,
                                         const TestId& pending,
                                         const TestId& executed) {
  return t.fail_given_fail(pending, executed);
}

inline std::optional<double> lookup_pass(const CorrelationTable& t,
                                         const TestId& pending,
                                         const TestId& executed) {
  return t.pass_given_pass(pending, executed);
}

}  // namespace testprio
