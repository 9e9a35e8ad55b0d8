#include "testprio/ingest.hpp"

#include <charconv>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include "json.hpp"

namespace testprio {

namespace {

std::vector<std::string> split(const std::string& line, char delim) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = line.find(delim, start);
    if (pos == std::string::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

std::string trim(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && (s[b] == ' ' || s[b] == '\t')) ++b;
  while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t')) --e;
  return s.substr(b, e - b);
}

bool blank(const std::string& s) {
  for (char c : s) {
    if (c != ' ' && c != '\t') return false;
  }
  return true;
}

bool parse_int(const std::string& s, std::int64_t& out) {
  const char* first = s.data();
  const char* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last && first != last;
}

std::string at_line(std::size_t line_no) {
  return "line " + std::to_string(line_no) + ": ";
}

// Reads the next content line: strips CR, skips blanks, drops a UTF-8 BOM on
// the first line. Returns false at EOF.
bool next_line(std::istream& in, std::string& line, std::size_t& line_no) {
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 && line.size() >= 3 && line[0] == '\xEF' &&
        line[1] == '\xBB' && line[2] == '\xBF') {
      line.erase(0, 3);
    }
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!blank(line)) return true;
  }
  return false;
}

std::int64_t parse_cycle_field(const std::string& field, std::size_t line_no) {
  std::int64_t cycle = 0;
  if (!parse_int(trim(field), cycle) || cycle < 0) {
    throw ParseError(at_line(line_no) + "invalid cycle '" + field +
                     "' (expected a non-negative integer)");
  }
  return cycle;
}

}  // namespace

std::vector<VerdictRecord> parse_canonical_records(std::istream& in) {
  static const std::string kHeader = "test_id,cycle,verdict";

  std::string line;
  std::size_t line_no = 0;
  if (!next_line(in, line, line_no)) throw EmptyInputError("empty input");
  if (line != kHeader) {
    throw ParseError(at_line(line_no) + "expected header '" + kHeader +
                     "', got '" + line + "'");
  }

  std::vector<VerdictRecord> records;
  std::unordered_map<CycleId, std::int64_t> next_sequence;
  while (next_line(in, line, line_no)) {
    const auto fields = split(line, ',');
    if (fields.size() != 3) {
      throw ParseError(at_line(line_no) + "expected 3 fields, got " +
                       std::to_string(fields.size()));
    }
    const TestId test = fields[0];
    if (test.empty()) throw ParseError(at_line(line_no) + "empty test id");
    const CycleId cycle = parse_cycle_field(fields[1], line_no);

    std::int64_t code = 0;
    if (!parse_int(trim(fields[2]), code)) {
      throw ParseError(at_line(line_no) + "invalid verdict '" + fields[2] +
                       "' (expected an integer)");
    }
    RawVerdict raw;
    try {
      raw = RawVerdict(static_cast<int>(code));
    } catch (const ParseError& e) {
      throw ParseError(at_line(line_no) + "test '" + test + "', cycle " +
                       std::to_string(cycle) + ": " + e.what());
    }
    records.push_back({test, cycle, raw, next_sequence[cycle]++});
  }
  return records;
}

Dataset parse_canonical(std::istream& in) {
  return build_dataset(parse_canonical_records(in));
}

std::vector<VerdictRecord> parse_industrial_records(std::istream& in,
                                                    const IndustrialFormat& fmt) {
  std::string line;
  std::size_t line_no = 0;
  if (!next_line(in, line, line_no)) throw EmptyInputError("empty input");

  const auto header = split(line, fmt.delimiter);
  std::size_t test_col = header.size();
  std::size_t cycle_col = header.size();
  std::size_t verdict_col = header.size();
  for (std::size_t i = 0; i < header.size(); ++i) {
    const std::string name = trim(header[i]);
    if (name == fmt.test_column) test_col = i;
    if (name == fmt.cycle_column) cycle_col = i;
    if (name == fmt.verdict_column) verdict_col = i;
  }
  for (const auto& [name, col] :
       {std::pair<const std::string&, std::size_t>{fmt.test_column, test_col},
        {fmt.cycle_column, cycle_col},
        {fmt.verdict_column, verdict_col}}) {
    if (col == header.size()) {
      throw ParseError(at_line(line_no) + "missing column '" + name + "'");
    }
  }
  const std::size_t needed =
      std::max(test_col, std::max(cycle_col, verdict_col)) + 1;

  std::vector<VerdictRecord> records;
  std::unordered_map<CycleId, std::int64_t> next_sequence;
  while (next_line(in, line, line_no)) {
    const auto fields = split(line, fmt.delimiter);
    if (fields.size() < needed) {
      throw ParseError(at_line(line_no) + "expected at least " +
                       std::to_string(needed) + " fields, got " +
                       std::to_string(fields.size()));
    }
    const TestId test = trim(fields[test_col]);
    if (test.empty()) throw ParseError(at_line(line_no) + "empty test name");
    const CycleId cycle = parse_cycle_field(fields[cycle_col], line_no);

    std::int64_t code = 0;
    if (!parse_int(trim(fields[verdict_col]), code) || (code != 0 && code != 1)) {
      throw ParseError(at_line(line_no) + "test '" + test + "', cycle " +
                       std::to_string(cycle) + ": verdict must be 0 or 1 in this "
                       "format, got '" + fields[verdict_col] + "'");
    }
    records.push_back(
        {test, cycle, RawVerdict(static_cast<int>(code)), next_sequence[cycle]++});
  }
  return records;
}

Dataset parse_industrial(std::istream& in, const IndustrialFormat& fmt) {
  return build_dataset(parse_industrial_records(in, fmt));
}

Dataset build_dataset(const std::vector<VerdictRecord>& records) {
  std::map<CycleId, std::vector<VerdictRecord>> by_cycle;
  for (const auto& r : records) by_cycle[r.cycle].push_back(r);

  Dataset d;
  d.cycles.reserve(by_cycle.size());
  for (const auto& [cycle, group] : by_cycle) {
    d.cycles.push_back(normalize_cycle(group));
  }
  for (const auto& log : d.cycles) {
    for (const auto& [t, o] : log.outcomes) d.universe.insert(t);
  }
  return d;
}

void serialize_canonical(const Dataset& d, std::ostream& out) {
  out << "test_id,cycle,verdict\n";
  for (const auto& log : d.cycles) {
    for (const auto& [t, o] : log.outcomes) {
      if (t.find(',') != std::string::npos || t.find('\n') != std::string::npos ||
          t.find('\r') != std::string::npos) {
        throw ConfigError("test id '" + t +
                          "' cannot be written to canonical CSV");
      }
      out << t << ',' << log.cycle << ',' << to_raw_code(o) << '\n';
    }
  }
}

std::string serialize_canonical(const Dataset& d) {
  std::ostringstream out;
  serialize_canonical(d, out);
  return out.str();
}

DatasetStats dataset_stats(const Dataset& d) {
  if (d.cycles.empty()) throw EmptyInputError("dataset has no cycles");

  DatasetStats s;
  s.distinct_tests = d.universe.size();
  s.cycles = d.cycles.size();
  std::size_t faults = 0;
  std::size_t passes = 0;
  for (const auto& log : d.cycles) {
    s.verdict_count += log.outcomes.size();
    faults += log.fault_count();
    passes += log.pass_count();
  }
  s.failed_fraction =
      faults + passes == 0
          ? 0.0
          : static_cast<double>(faults) / static_cast<double>(faults + passes);
  return s;
}

DatasetStats raw_stats(const std::vector<VerdictRecord>& records) {
  if (records.empty()) throw EmptyInputError("no verdict records");

  std::set<TestId> tests;
  std::set<CycleId> cycles;
  std::size_t faults = 0;
  std::size_t passes = 0;
  for (const auto& r : records) {
    tests.insert(r.test);
    cycles.insert(r.cycle);
    switch (classify_verdict(r.raw)) {
      case Outcome::Fault:
        ++faults;
        break;
      case Outcome::Pass:
        ++passes;
        break;
      case Outcome::Excluded:
        break;
    }
  }

  DatasetStats s;
  s.distinct_tests = tests.size();
  s.cycles = cycles.size();
  s.verdict_count = records.size();
  s.failed_fraction =
      faults + passes == 0
          ? 0.0
          : static_cast<double>(faults) / static_cast<double>(faults + passes);
  return s;
}

std::string stats_to_json(const DatasetStats& s) {
  nlohmann::json j;
  j["distinct_tests"] = s.distinct_tests;
  j["cycles"] = s.cycles;
  j["verdict_count"] = s.verdict_count;
  j["failed_fraction"] = s.failed_fraction;
  return j.dump(2) + "\n";
}

}  // namespace testprio
