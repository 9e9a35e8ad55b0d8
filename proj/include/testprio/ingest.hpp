#pragma once
// Dataset parsing (canonical CSV plus the semicolon-separated industrial
// format) and summary statistics.

#include <iosfwd>
#include <string>
#include <vector>

#include "testprio/core.hpp"

namespace testprio {

struct DatasetStats {
  std::size_t distinct_tests = 0;
  std::size_t cycles = 0;
  std::size_t verdict_count = 0;   // Pass + Fault + Excluded entries
  double failed_fraction = 0.0;    // Fault / (Fault + Pass); Excluded ignored

  friend bool operator==(const DatasetStats&, const DatasetStats&) = default;
};

// Column mapping for the industrial CSV flavor. Defaults match the public
// ABB robot-testing files; remap via CLI flags for other exports.
struct IndustrialFormat {
  std::string test_column = "Name";
  std::string cycle_column = "Cycle";
  std::string verdict_column = "Verdict";
  char delimiter = ';';
};

// Canonical format: UTF-8 CSV, LF or CRLF, header `test_id,cycle,verdict`,
// verdict in {0,1,2,3}, rows in execution order. File order defines the
// within-cycle sequence used for last-verdict deduplication.
std::vector<VerdictRecord> parse_canonical_records(std::istream& in);
Dataset parse_canonical(std::istream& in);

// Industrial format: delimiter-separated with a named header; verdicts are
// restricted to {0,1} in this flavor.
std::vector<VerdictRecord> parse_industrial_records(std::istream& in,
                                                    const IndustrialFormat& fmt = {});
Dataset parse_industrial(std::istream& in, const IndustrialFormat& fmt = {});

// Groups records by cycle, dedups each cycle to the last execution of every
// test, and returns cycles sorted ascending.
Dataset build_dataset(const std::vector<VerdictRecord>& records);

// Writes a normalized dataset back out in the canonical format (Fault rows
// carry code 1 regardless of whether they came from 1 or 2).
void serialize_canonical(const Dataset& d, std::ostream& out);
std::string serialize_canonical(const Dataset& d);

DatasetStats dataset_stats(const Dataset& d);

/// Pre-deduplication counts over raw records.
DatasetStats raw_stats(const std::vector<VerdictRecord>& records);

std::string stats_to_json(const DatasetStats& s);

}  // namespace testprio
