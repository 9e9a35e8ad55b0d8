#pragma once
// Drives the whole experiment: walk the evaluable cycles of a dataset, build
// each cycle's history window, run the configured static scheduler (plus the
// dynamic rescheduler on top of it), and collect per-cycle APFD.

#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "testprio/core.hpp"
#include "testprio/schedulers.hpp"

namespace testprio {

struct ReplayConfig {
  int history_length = 15;       // window for conditional probabilities
  double k = 0.8;                // score-update multiplier
  int random_repetitions = 30;   // draws per cycle for the Random scheduler
  std::uint64_t master_seed = 42;
  std::int64_t cycle_limit = 300;  // evaluate at most the last L cycles
  StaticKind static_kind = StaticKind::Random;
  bool dynamic_enabled = true;
  std::unordered_map<TestId, double> external_scores;  // StaticKind::External

  void validate() const;
};

struct ReportRow {
  CycleId cycle = 0;
  std::string config;   // e.g. "worst", "worst+cp", "random"
  int repetition = 0;   // always 0 for deterministic schedulers
  double apfd = 0.0;

  friend bool operator==(const ReportRow&, const ReportRow&) = default;
};

struct ReplayReport {
  std::vector<ReportRow> rows;

  friend bool operator==(const ReplayReport&, const ReplayReport&) = default;
};

// Distribution of per-cycle APFD for one configuration. Random repetitions
// are averaged per cycle before these are computed. Quantiles interpolate
// linearly between order statistics; the median of an even-sized sample is
// the midpoint of the two central values.
struct ConfigSummary {
  double min = 0.0;
  double q1 = 0.0;
  double median = 0.0;
  double mean = 0.0;
  double q3 = 0.0;
  double max = 0.0;

  friend bool operator==(const ConfigSummary&, const ConfigSummary&) = default;
};

using SummaryStats = std::map<std::string, ConfigSummary>;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Per-repetition seed, a pure function of (master_seed, cycle, repetition),
// so any single repetition can be reproduced in isolation.
inline std::uint64_t derive_seed(std::uint64_t master_seed, CycleId cycle,
                                 int repetition) {
  std::uint64_t h = splitmix64(master_seed);
  h = splitmix64(h ^ static_cast<std::uint64_t>(cycle));
  h = splitmix64(h ^ static_cast<std::uint64_t>(repetition));
  return h;
}

// The last cycle_limit cycles of the dataset, filtered to evaluable ones.
// Earlier cycles stay available as history, so a window may well span cycles
// that were themselves never evaluated.
std::vector<CycleId> evaluated_cycles(const Dataset& d, const ReplayConfig& cfg);

// Rows for one evaluable cycle: a static row per repetition, plus a "+cp"
// row when the dynamic rescheduler is enabled. Deterministic schedulers get
// exactly one repetition.
std::vector<ReportRow> replay_cycle(const Dataset& d, CycleId cycle,
                                    const ReplayConfig& cfg);

// Full run over evaluated_cycles, rows in ascending cycle order. An empty
// result simply means no cycle was evaluable.
ReplayReport run_replay(const Dataset& d, const ReplayConfig& cfg);

SummaryStats summarize(const ReplayReport& report);

// CSV with header `cycle,config,repetition,apfd`.
std::string report_to_csv(const ReplayReport& report);

// JSON object keyed by configuration label, six stats per entry.
std::string summary_to_json(const SummaryStats& stats);

}  // namespace testprio
