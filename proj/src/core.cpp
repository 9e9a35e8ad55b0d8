#include "testprio/core.hpp"

#include <algorithm>
#include <unordered_map>

namespace testprio {

RawVerdict::RawVerdict(int c) : code(c) {
  if (c < 0 || c > 3) {
    throw ParseError("invalid verdict code " + std::to_string(c) +
                     " (expected 0, 1, 2 or 3)");
  }
}

const char* to_string(Outcome o) {
  switch (o) {
    case Outcome::Pass:
      return "pass";
    case Outcome::Fault:
      return "fault";
    case Outcome::Excluded:
      return "excluded";
  }
  return "?";
}

int to_raw_code(Outcome o) {
  switch (o) {
    case Outcome::Pass:
      return 0;
    case Outcome::Fault:
      return 1;
    case Outcome::Excluded:
      return 3;
  }
  return 0;
}

Outcome classify_verdict(RawVerdict raw) {
  switch (raw.code) {
    case 0:
      return Outcome::Pass;
    case 1:
    case 2:
      return Outcome::Fault;
    case 3:
      return Outcome::Excluded;
    default:
      throw ParseError("invalid verdict code " + std::to_string(raw.code));
  }
}

std::optional<Outcome> CycleLog::outcome_of(const TestId& test) const {
  for (const auto& [t, o] : outcomes) {
    if (t == test) return o;
  }
  return std::nullopt;
}

std::vector<TestId> CycleLog::schedulable() const {
  std::vector<TestId> tests;
  tests.reserve(outcomes.size());
  for (const auto& [t, o] : outcomes) {
    if (o != Outcome::Excluded) tests.push_back(t);
  }
  return tests;
}

std::size_t CycleLog::fault_count() const {
  return static_cast<std::size_t>(
      std::count_if(outcomes.begin(), outcomes.end(),
                    [](const auto& e) { return e.second == Outcome::Fault; }));
}

std::size_t CycleLog::pass_count() const {
  return static_cast<std::size_t>(
      std::count_if(outcomes.begin(), outcomes.end(),
                    [](const auto& e) { return e.second == Outcome::Pass; }));
}

const CycleLog* Dataset::find_cycle(CycleId id) const {
  auto it = std::lower_bound(
      cycles.begin(), cycles.end(), id,
      [](const CycleLog& log, CycleId v) { return log.cycle < v; });
  if (it == cycles.end() || it->cycle != id) return nullptr;
  return &*it;
}

CycleLog normalize_cycle(const std::vector<VerdictRecord>& records) {
  if (records.empty()) throw DataError("normalize_cycle: no records");
  const CycleId cycle = records.front().cycle;

  struct Last {
    std::int64_t sequence = 0;
    RawVerdict raw;
  };
  std::unordered_map<TestId, Last> last;
  std::vector<TestId> first_seen;  // keeps dataset order for the survivors
  std::set<std::pair<TestId, std::int64_t>> seen;

  for (const auto& r : records) {
    if (r.cycle != cycle) {
      throw DataError("normalize_cycle: records span cycles " +
                      std::to_string(cycle) + " and " + std::to_string(r.cycle));
    }
    if (!seen.emplace(r.test, r.sequence).second) {
      throw ParseError("duplicate record for test '" + r.test + "' at sequence " +
                       std::to_string(r.sequence) + " in cycle " +
                       std::to_string(cycle));
    }
    auto [it, inserted] = last.try_emplace(r.test, Last{r.sequence, r.raw});
    if (inserted) {
      first_seen.push_back(r.test);
    } else if (r.sequence > it->second.sequence) {
      it->second = Last{r.sequence, r.raw};
    }
  }

  CycleLog log{cycle, {}};
  log.outcomes.reserve(first_seen.size());
  for (const auto& t : first_seen) {
    log.outcomes.emplace_back(t, classify_verdict(last.at(t).raw));
  }
  return log;
}

bool is_evaluable(const CycleLog& log) {
  bool has_fault = false;
  bool has_pass = false;
  for (const auto& [t, o] : log.outcomes) {
    has_fault |= o == Outcome::Fault;
    has_pass |= o == Outcome::Pass;
    if (has_fault && has_pass) return true;
  }
  return false;
}

}  // namespace testprio
