#include "testprio/correlation.hpp"

#include <algorithm>
#include <cstdint>
#include <ostream>
#include <vector>

namespace testprio {

void WindowConfig::validate() const {
  if (history_length < 1) {
    throw ConfigError("history_length must be >= 1, got " +
                      std::to_string(history_length));
  }
}

namespace {

std::optional<double> lookup(const std::unordered_map<TestId, CorrelationTable::Entries>& m,
                             const TestId& pending, const TestId& executed) {
  const auto outer = m.find(executed);
  if (outer == m.end()) return std::nullopt;
  const auto inner = outer->second.find(pending);
  if (inner == outer->second.end()) return std::nullopt;
  return inner->second;
}

const CorrelationTable::Entries* conditioned(
    const std::unordered_map<TestId, CorrelationTable::Entries>& m,
    const TestId& executed) {
  const auto it = m.find(executed);
  return it == m.end() ? nullptr : &it->second;
}

void set_entry(std::unordered_map<TestId, CorrelationTable::Entries>& m,
               const TestId& pending, const TestId& executed, double p,
               const char* direction) {
  if (pending == executed) {
    throw ConfigError(std::string(direction) + " entry for self-pair '" +
                      pending + "' is not allowed");
  }
  if (!(p > 0.0 && p <= 1.0)) {
    throw ConfigError(std::string(direction) + " probability for ('" + pending +
                      "', '" + executed + "') must lie in (0, 1], got " +
                      std::to_string(p));
  }
  m[executed][pending] = p;
}

std::size_t pair_count(const std::unordered_map<TestId, CorrelationTable::Entries>& m) {
  std::size_t n = 0;
  for (const auto& [e, entries] : m) n += entries.size();
  return n;
}

}  // namespace

std::optional<double> CorrelationTable::fail_given_fail(const TestId& pending,
                                                        const TestId& executed) const {
  return lookup(fail_, pending, executed);
}

std::optional<double> CorrelationTable::pass_given_pass(const TestId& pending,
                                                        const TestId& executed) const {
  return lookup(pass_, pending, executed);
}

const CorrelationTable::Entries* CorrelationTable::fail_conditioned_on(
    const TestId& executed) const {
  return conditioned(fail_, executed);
}

const CorrelationTable::Entries* CorrelationTable::pass_conditioned_on(
    const TestId& executed) const {
  return conditioned(pass_, executed);
}

void CorrelationTable::set_fail(const TestId& pending, const TestId& executed,
                                double p) {
  set_entry(fail_, pending, executed, p, "co-failure");
}

void CorrelationTable::set_pass(const TestId& pending, const TestId& executed,
                                double p) {
  set_entry(pass_, pending, executed, p, "co-pass");
}

bool CorrelationTable::empty() const { return fail_.empty() && pass_.empty(); }

std::size_t CorrelationTable::fail_pair_count() const { return pair_count(fail_); }

std::size_t CorrelationTable::pass_pair_count() const { return pair_count(pass_); }

void CorrelationTable::dump_csv(std::ostream& out) const {
  struct Row {
    TestId pending;
    TestId executed;
    const char* direction;
    double p;
  };
  std::vector<Row> rows;
  for (const auto& [executed, entries] : fail_) {
    for (const auto& [pending, p] : entries) {
      rows.push_back({pending, executed, "fail", p});
    }
  }
  for (const auto& [executed, entries] : pass_) {
    for (const auto& [pending, p] : entries) {
      rows.push_back({pending, executed, "pass", p});
    }
  }
  std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
    const int dir = std::string_view(a.direction).compare(b.direction);
    if (dir != 0) return dir < 0;
    if (a.executed != b.executed) return a.executed < b.executed;
    return a.pending < b.pending;
  });

  out << "pending,executed,direction,probability\n";
  const auto old_precision = out.precision(17);
  for (const auto& r : rows) {
    out << r.pending << ',' << r.executed << ',' << r.direction << ',' << r.p
        << '\n';
  }
  out.precision(old_precision);
}

CorrelationTable build_tables(std::span<const CycleLog> history,
                              CycleId target_cycle, const WindowConfig& cfg) {
  cfg.validate();

  // Window = the last history_length cycles strictly before target_cycle.
  std::vector<const CycleLog*> window;
  for (const auto& log : history) {
    if (log.cycle < target_cycle) window.push_back(&log);
  }
  if (window.size() > static_cast<std::size_t>(cfg.history_length)) {
    window.erase(window.begin(),
                 window.end() - static_cast<std::ptrdiff_t>(cfg.history_length));
  }

  // Intern test ids so pair counting runs on integers.
  std::unordered_map<TestId, std::uint32_t> id_of;
  std::vector<const TestId*> name_of;
  const auto intern = [&](const TestId& t) {
    const auto [it, inserted] =
        id_of.emplace(t, static_cast<std::uint32_t>(name_of.size()));
    if (inserted) name_of.push_back(&it->first);
    return it->second;
  };

  // joint[(executed, pending)] = window cycles where both share the outcome;
  // conditioning[(executed, pending)] = cycles where executed has the outcome
  // and pending ran with any non-Excluded outcome.
  struct Counts {
    std::uint32_t joint = 0;
    std::uint32_t conditioning = 0;
  };
  const auto key = [](std::uint32_t executed, std::uint32_t pending) {
    return (static_cast<std::uint64_t>(executed) << 32) | pending;
  };
  std::unordered_map<std::uint64_t, Counts> fail_counts;
  std::unordered_map<std::uint64_t, Counts> pass_counts;

  std::vector<std::uint32_t> faults;
  std::vector<std::uint32_t> passes;
  for (const CycleLog* log : window) {
    faults.clear();
    passes.clear();
    for (const auto& [test, outcome] : log->outcomes) {
      switch (outcome) {
        case Outcome::Fault:
          faults.push_back(intern(test));
          break;
        case Outcome::Pass:
          passes.push_back(intern(test));
          break;
        case Outcome::Excluded:
          break;
      }
    }
    for (const std::uint32_t e : faults) {
      for (const std::uint32_t t : faults) {
        if (t == e) continue;
        auto& c = fail_counts[key(e, t)];
        ++c.joint;
        ++c.conditioning;
      }
      for (const std::uint32_t t : passes) ++fail_counts[key(e, t)].conditioning;
    }
    for (const std::uint32_t e : passes) {
      for (const std::uint32_t t : passes) {
        if (t == e) continue;
        auto& c = pass_counts[key(e, t)];
        ++c.joint;
        ++c.conditioning;
      }
      for (const std::uint32_t t : faults) ++pass_counts[key(e, t)].conditioning;
    }
  }

  CorrelationTable table;
  const auto emit = [&](const std::unordered_map<std::uint64_t, Counts>& counts,
                        void (CorrelationTable::*set)(const TestId&, const TestId&,
                                                      double)) {
    for (const auto& [k, c] : counts) {
      if (c.joint == 0) continue;
      const TestId& executed = *name_of[k >> 32];
      const TestId& pending = *name_of[k & 0xFFFFFFFFu];
      (table.*set)(pending, executed,
                   static_cast<double>(c.joint) / static_cast<double>(c.conditioning));
    }
  };
  emit(fail_counts, &CorrelationTable::set_fail);
  emit(pass_counts, &CorrelationTable::set_pass);
  return table;
}

}  // namespace testprio
