#include "testprio/replay.hpp"

#include <algorithm>
#include <cinttypes>
#include <cstdio>
#include <numeric>
#include <span>

#include "json.hpp"

#include "testprio/correlation.hpp"
#include "testprio/dynamic_cp.hpp"
#include "testprio/metrics.hpp"

namespace testprio {

void ReplayConfig::validate() const {
  WindowConfig{history_length}.validate();
  CpConfig{k}.validate();
  if (random_repetitions < 1) {
    throw ConfigError("random_repetitions must be >= 1, got " +
                      std::to_string(random_repetitions));
  }
  if (cycle_limit < 1) {
    throw ConfigError("cycle_limit must be >= 1, got " +
                      std::to_string(cycle_limit));
  }
  if (static_kind == StaticKind::External && external_scores.empty()) {
    throw ConfigError("external scheduler selected but no scores were given");
  }
}

std::vector<CycleId> evaluated_cycles(const Dataset& d, const ReplayConfig& cfg) {
  cfg.validate();
  const std::size_t limit = static_cast<std::size_t>(cfg.cycle_limit);
  const std::size_t first =
      d.cycles.size() > limit ? d.cycles.size() - limit : 0;

  std::vector<CycleId> out;
  for (std::size_t i = first; i < d.cycles.size(); ++i) {
    if (is_evaluable(d.cycles[i])) out.push_back(d.cycles[i].cycle);
  }
  return out;
}

std::vector<ReportRow> replay_cycle(const Dataset& d, CycleId cycle,
                                    const ReplayConfig& cfg) {
  cfg.validate();
  const CycleLog* log = d.find_cycle(cycle);
  if (log == nullptr) {
    throw DataError("dataset has no cycle " + std::to_string(cycle));
  }
  if (!is_evaluable(*log)) {
    throw DataError("cycle " + std::to_string(cycle) + " is not evaluable");
  }

  const CorrelationTable table = build_tables(
      std::span<const CycleLog>(d.cycles), cycle, WindowConfig{cfg.history_length});
  const CpConfig cp{cfg.k};
  const std::string base = to_string(cfg.static_kind);

  std::vector<ReportRow> rows;
  const auto emit = [&](const Schedule& schedule, int repetition) {
    rows.push_back(
        {cycle, base, repetition, apfd(trace_of(schedule, *log).outcome_sequence())});
    if (cfg.dynamic_enabled) {
      rows.push_back({cycle, base + "+cp", repetition,
                      apfd(run_dynamic(schedule, *log, table, cp).outcome_sequence())});
    }
  };

  switch (cfg.static_kind) {
    case StaticKind::Optimal:
      emit(schedule_optimal(*log), 0);
      break;
    case StaticKind::Worst:
      emit(schedule_worst(*log), 0);
      break;
    case StaticKind::Random:
      for (int rep = 0; rep < cfg.random_repetitions; ++rep) {
        emit(schedule_random(*log, derive_seed(cfg.master_seed, cycle, rep)), rep);
      }
      break;
    case StaticKind::External:
      emit(schedule_from_scores(*log, cfg.external_scores), 0);
      break;
  }
  return rows;
}

ReplayReport run_replay(const Dataset& d, const ReplayConfig& cfg) {
  ReplayReport report;
  for (const CycleId cycle : evaluated_cycles(d, cfg)) {
    const auto rows = replay_cycle(d, cycle, cfg);
    report.rows.insert(report.rows.end(), rows.begin(), rows.end());
  }
  return report;
}

namespace {

// Quantile with linear interpolation between order statistics (the numpy
// default): rank h = q * (n - 1) split into integer and fractional parts.
double quantile(const std::vector<double>& sorted, double q) {
  const std::size_t n = sorted.size();
  if (n == 1) return sorted[0];
  const double h = q * static_cast<double>(n - 1);
  const std::size_t lo = static_cast<std::size_t>(h);
  const std::size_t hi = std::min(lo + 1, n - 1);
  const double frac = h - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

}  // namespace

SummaryStats summarize(const ReplayReport& report) {
  // Per config: average repetitions within each cycle first, so a config
  // contributes one value per cycle no matter how many repetitions ran.
  std::map<std::string, std::map<CycleId, std::pair<double, std::size_t>>> acc;
  for (const ReportRow& row : report.rows) {
    auto& [sum, count] = acc[row.config][row.cycle];
    sum += row.apfd;
    ++count;
  }

  SummaryStats stats;
  for (const auto& [config, cycles] : acc) {
    std::vector<double> values;
    values.reserve(cycles.size());
    for (const auto& [cycle, sc] : cycles) {
      values.push_back(sc.first / static_cast<double>(sc.second));
    }
    std::sort(values.begin(), values.end());

    ConfigSummary s;
    s.min = values.front();
    s.q1 = quantile(values, 0.25);
    s.median = quantile(values, 0.5);
    s.mean = std::accumulate(values.begin(), values.end(), 0.0) /
             static_cast<double>(values.size());
    s.q3 = quantile(values, 0.75);
    s.max = values.back();
    stats[config] = s;
  }
  return stats;
}

std::string report_to_csv(const ReplayReport& report) {
  std::string out = "cycle,config,repetition,apfd\n";
  char buf[64];
  for (const ReportRow& row : report.rows) {
    std::snprintf(buf, sizeof(buf), "%" PRId64 ",%s,%d,%.12g\n", row.cycle,
                  row.config.c_str(), row.repetition, row.apfd);
    out += buf;
  }
  return out;
}

std::string summary_to_json(const SummaryStats& stats) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [config, s] : stats) {
    j[config] = {{"min", s.min},   {"q1", s.q1}, {"median", s.median},
                 {"mean", s.mean}, {"q3", s.q3}, {"max", s.max}};
  }
  return j.dump(2) + "\n";
}

}  // namespace testprio
