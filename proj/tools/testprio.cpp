// Command-line front end: replay experiments, dataset stats, synthetic
// datasets, and correlation-table dumps.
//
// Exit codes: 0 success, 1 malformed input data, 2 invalid configuration or
// flags, 3 internal data inconsistency.

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "testprio/correlation.hpp"
#include "testprio/core.hpp"
#include "testprio/errors.hpp"
#include "testprio/ingest.hpp"
#include "testprio/replay.hpp"
#include "testprio/schedulers.hpp"
#include "testprio/synth.hpp"

namespace fs = std::filesystem;
using namespace testprio;

namespace {

bool parse_int(const std::string& s, std::int64_t& out) {
  const char* first = s.data();
  const char* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last && first != last;
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open file '" + path + "'");
  return in;
}

// Write via a sibling temp file and rename, so readers never see a torn file.
void write_atomic(const std::string& path, const std::string& content) {
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write to '" + tmp.string() + "'");
    out << content;
    out.flush();
    if (!out) throw ConfigError("failed while writing '" + tmp.string() + "'");
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    throw ConfigError("cannot move '" + tmp.string() + "' to '" + path +
                      "': " + ec.message());
  }
}

// ---------------------------------------------------------------------------
// Shared input flags

struct InputFlags {
  std::string path;
  std::string format = "canonical";
  IndustrialFormat industrial;
  std::string delimiter = ";";
};

void add_input_flags(CLI::App& cmd, InputFlags& in) {
  cmd.add_option("--input", in.path, "Dataset CSV path")->required();
  cmd.add_option("--format", in.format, "Input format: canonical|industrial")
      ->capture_default_str();
  cmd.add_option("--col-test", in.industrial.test_column,
                 "Test-name column (industrial format)")
      ->capture_default_str();
  cmd.add_option("--col-cycle", in.industrial.cycle_column,
                 "Cycle column (industrial format)")
      ->capture_default_str();
  cmd.add_option("--col-verdict", in.industrial.verdict_column,
                 "Verdict column (industrial format)")
      ->capture_default_str();
  cmd.add_option("--delimiter", in.delimiter,
                 "Field delimiter (industrial format)")
      ->capture_default_str();
}

std::vector<VerdictRecord> read_records(const InputFlags& in) {
  auto stream = open_input(in.path);
  if (in.format == "industrial") {
    if (in.delimiter.size() != 1) {
      throw ConfigError("--delimiter must be a single character, got '" +
                        in.delimiter + "'");
    }
    IndustrialFormat fmt = in.industrial;
    fmt.delimiter = in.delimiter[0];
    return parse_industrial_records(stream, fmt);
  }
  if (in.format != "canonical") {
    throw ConfigError("unknown format '" + in.format +
                      "' (expected canonical|industrial)");
  }
  return parse_canonical_records(stream);
}

Dataset read_dataset(const InputFlags& in) {
  return build_dataset(read_records(in));
}

// ---------------------------------------------------------------------------
// Config files: JSON objects whose keys mirror the flag names. A key is
// ignored whenever its flag was given on the command line (flags > file).

using ConfigKeys =
    std::map<std::string, std::function<void(const nlohmann::json&)>>;

nlohmann::json load_config(const std::string& path) {
  auto in = open_input(path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config file '" + path + "': " + e.what());
  }
  if (!j.is_object()) {
    throw ConfigError("config file '" + path + "' must hold a JSON object");
  }
  return j;
}

void apply_config(const CLI::App& cmd, const std::string& path,
                  const ConfigKeys& keys) {
  const nlohmann::json j = load_config(path);
  for (const auto& [key, value] : j.items()) {
    const auto it = keys.find(key);
    if (it == keys.end()) {
      throw ConfigError("config file '" + path + "': unknown key '" + key + "'");
    }
    const CLI::Option* opt = cmd.get_option_no_throw("--" + key);
    if (opt != nullptr && opt->count() > 0) continue;
    try {
      it->second(value);
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError("config file '" + path + "', key '" + key +
                        "': " + e.what());
    }
  }
}

// ---------------------------------------------------------------------------
// replay

StaticKind parse_static_kind(const std::string& name) {
  if (name == "optimal") return StaticKind::Optimal;
  if (name == "worst") return StaticKind::Worst;
  if (name == "random") return StaticKind::Random;
  if (name == "external") return StaticKind::External;
  throw ConfigError("unknown static scheduler '" + name +
                    "' (expected optimal|worst|random|external)");
}

bool parse_dynamic_mode(const std::string& name) {
  if (name == "cp") return true;
  if (name == "none") return false;
  throw ConfigError("unknown dynamic mode '" + name + "' (expected cp|none)");
}

std::unordered_map<TestId, double> parse_scores_csv(const std::string& path) {
  auto in = open_input(path);
  std::unordered_map<TestId, double> scores;
  std::string line;
  std::size_t line_no = 0;
  bool saw_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    const std::string where = path + " line " + std::to_string(line_no) + ": ";
    if (!saw_header) {
      if (line != "test_id,score") {
        throw ParseError(where + "expected header 'test_id,score'");
      }
      saw_header = true;
      continue;
    }
    const auto comma = line.find(',');
    if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos) {
      throw ParseError(where + "expected 2 fields");
    }
    const TestId test = line.substr(0, comma);
    if (test.empty()) throw ParseError(where + "empty test id");
    const std::string value = line.substr(comma + 1);
    double score = 0.0;
    try {
      std::size_t pos = 0;
      score = std::stod(value, &pos);
      if (pos != value.size()) throw std::invalid_argument(value);
    } catch (const std::exception&) {
      throw ParseError(where + "invalid score '" + value + "'");
    }
    if (!scores.emplace(test, score).second) {
      throw ParseError(where + "duplicate test id '" + test + "'");
    }
  }
  if (!saw_header) throw EmptyInputError("scores file '" + path + "' is empty");
  if (scores.empty()) {
    throw ConfigError("scores file '" + path + "' has no score rows");
  }
  return scores;
}

struct ReplayFlags {
  InputFlags input;
  std::string static_name = "random";
  std::string dynamic_name = "cp";
  ReplayConfig cfg;
  std::string scores_path;
  std::string out_path;
  std::string summary_path;
  std::string config_path;
};

void add_replay_flags(CLI::App& cmd, ReplayFlags& rf) {
  add_input_flags(cmd, rf.input);
  cmd.add_option("--static", rf.static_name,
                 "Static scheduler: optimal|worst|random|external")
      ->capture_default_str();
  cmd.add_option("--dynamic", rf.dynamic_name, "Dynamic rescheduler: cp|none")
      ->capture_default_str();
  cmd.add_option("--history", rf.cfg.history_length,
                 "History window (cycles) for the probability tables")
      ->capture_default_str();
  cmd.add_option("--k", rf.cfg.k, "Score-update multiplier")
      ->capture_default_str();
  cmd.add_option("--reps", rf.cfg.random_repetitions,
                 "Repetitions per cycle for the random scheduler")
      ->capture_default_str();
  cmd.add_option("--limit", rf.cfg.cycle_limit,
                 "Evaluate at most the last N cycles")
      ->capture_default_str();
  cmd.add_option("--seed", rf.cfg.master_seed, "Master seed for random schedules")
      ->capture_default_str();
  cmd.add_option("--scores", rf.scores_path,
                 "External scores CSV (header test_id,score); required with "
                 "--static external");
  cmd.add_option("--out", rf.out_path, "Report CSV output path")->required();
  cmd.add_option("--summary", rf.summary_path, "Summary JSON output path");
  cmd.add_option("--config", rf.config_path,
                 "JSON config file; flags take precedence over its keys");
}

int cmd_replay(const CLI::App& cmd, ReplayFlags& rf) {
  if (!rf.config_path.empty()) {
    apply_config(
        cmd, rf.config_path,
        {{"static", [&](const auto& v) { rf.static_name = v.template get<std::string>(); }},
         {"dynamic", [&](const auto& v) { rf.dynamic_name = v.template get<std::string>(); }},
         {"history", [&](const auto& v) { rf.cfg.history_length = v.template get<int>(); }},
         {"k", [&](const auto& v) { rf.cfg.k = v.template get<double>(); }},
         {"reps", [&](const auto& v) { rf.cfg.random_repetitions = v.template get<int>(); }},
         {"limit", [&](const auto& v) { rf.cfg.cycle_limit = v.template get<std::int64_t>(); }},
         {"seed", [&](const auto& v) { rf.cfg.master_seed = v.template get<std::uint64_t>(); }},
         {"scores", [&](const auto& v) { rf.scores_path = v.template get<std::string>(); }}});
  }
  rf.cfg.static_kind = parse_static_kind(rf.static_name);
  rf.cfg.dynamic_enabled = parse_dynamic_mode(rf.dynamic_name);
  if (rf.cfg.static_kind == StaticKind::External) {
    if (rf.scores_path.empty()) {
      throw ConfigError("--static external requires --scores");
    }
    rf.cfg.external_scores = parse_scores_csv(rf.scores_path);
  }
  rf.cfg.validate();

  const Dataset dataset = read_dataset(rf.input);
  const ReplayReport report = run_replay(dataset, rf.cfg);
  write_atomic(rf.out_path, report_to_csv(report));
  if (!rf.summary_path.empty()) {
    write_atomic(rf.summary_path, summary_to_json(summarize(report)));
  }
  std::cout << "wrote " << rf.out_path << ": " << report.rows.size()
            << " row(s) over " << evaluated_cycles(dataset, rf.cfg).size()
            << " evaluable cycle(s)\n";
  return 0;
}

// ---------------------------------------------------------------------------
// stats

struct StatsFlags {
  InputFlags input;
  bool raw = false;
};

int cmd_stats(const StatsFlags& sf) {
  const auto records = read_records(sf.input);
  const DatasetStats stats =
      sf.raw ? raw_stats(records) : dataset_stats(build_dataset(records));
  std::cout << stats_to_json(stats);
  return 0;
}

// ---------------------------------------------------------------------------
// synth

struct SynthFlags {
  std::int64_t tests = 0;
  std::int64_t cycles = 0;
  std::string groups;  // "NxM": N groups of M consecutive tests
  double rho = 1.0;
  double group_rate = 0.3;
  double background = 0.0;
  double flakiness = 0.0;
  std::uint64_t seed = 0;
  std::string out_path;
  std::string config_path;
};

std::vector<SynthGroup> make_groups(const std::string& shape, std::int64_t num_tests,
                                    double rate, double rho) {
  const auto x = shape.find('x');
  std::int64_t n = 0;
  std::int64_t m = 0;
  if (x == std::string::npos || !parse_int(shape.substr(0, x), n) ||
      !parse_int(shape.substr(x + 1), m) || n < 1 || m < 1) {
    throw ConfigError("--groups expects NxM with N,M >= 1 (e.g. 5x10), got '" +
                      shape + "'");
  }
  if (n * m > num_tests) {
    throw ConfigError("--groups " + shape + " needs " + std::to_string(n * m) +
                      " tests but only " + std::to_string(num_tests) +
                      " are configured");
  }
  std::vector<SynthGroup> groups(static_cast<std::size_t>(n));
  for (std::int64_t gi = 0; gi < n; ++gi) {
    auto& g = groups[static_cast<std::size_t>(gi)];
    g.failure_rate = rate;
    g.co_failure_strength = rho;
    for (std::int64_t j = 0; j < m; ++j) {
      g.members.push_back(static_cast<int>(gi * m + j));
    }
  }
  return groups;
}

void add_synth_flags(CLI::App& cmd, SynthFlags& sf) {
  cmd.add_option("--tests", sf.tests, "Number of tests")->capture_default_str();
  cmd.add_option("--cycles", sf.cycles, "Number of cycles")->capture_default_str();
  cmd.add_option("--groups", sf.groups,
                 "Correlated groups as NxM: N groups of M consecutive tests");
  cmd.add_option("--rho", sf.rho,
                 "Member failure probability when its group event fires")
      ->capture_default_str();
  cmd.add_option("--group-rate", sf.group_rate,
                 "Per-cycle probability of each group's fault event")
      ->capture_default_str();
  cmd.add_option("--background", sf.background,
                 "Failure rate outside group events")
      ->capture_default_str();
  cmd.add_option("--flakiness", sf.flakiness,
                 "Independent verdict-flip probability")
      ->capture_default_str();
  cmd.add_option("--seed", sf.seed, "Generator seed")->capture_default_str();
  cmd.add_option("--out", sf.out_path, "Output CSV path")->required();
  cmd.add_option("--config", sf.config_path,
                 "JSON config file; flags take precedence over its keys");
}

int cmd_synth(const CLI::App& cmd, SynthFlags& sf) {
  if (!sf.config_path.empty()) {
    apply_config(
        cmd, sf.config_path,
        {{"tests", [&](const auto& v) { sf.tests = v.template get<std::int64_t>(); }},
         {"cycles", [&](const auto& v) { sf.cycles = v.template get<std::int64_t>(); }},
         {"groups", [&](const auto& v) { sf.groups = v.template get<std::string>(); }},
         {"rho", [&](const auto& v) { sf.rho = v.template get<double>(); }},
         {"group-rate", [&](const auto& v) { sf.group_rate = v.template get<double>(); }},
         {"background", [&](const auto& v) { sf.background = v.template get<double>(); }},
         {"flakiness", [&](const auto& v) { sf.flakiness = v.template get<double>(); }},
         {"seed", [&](const auto& v) { sf.seed = v.template get<std::uint64_t>(); }}});
  }
  if (sf.tests < 1 || sf.tests > 1000000) {
    throw ConfigError("--tests must lie in [1, 1000000], got " +
                      std::to_string(sf.tests));
  }
  if (sf.cycles < 1 || sf.cycles > 10000000) {
    throw ConfigError("--cycles must lie in [1, 10000000], got " +
                      std::to_string(sf.cycles));
  }
  // Checked here, not via SynthConfig: without --groups these two never reach
  // a group config, and a nonsense probability should not pass silently.
  for (const auto& [name, value] : {std::pair<const char*, double>{"--rho", sf.rho},
                                    {"--group-rate", sf.group_rate}}) {
    if (!(value >= 0.0 && value <= 1.0)) {
      throw ConfigError(std::string(name) + " must lie in [0, 1], got " +
                        std::to_string(value));
    }
  }

  SynthConfig cfg;
  cfg.num_tests = static_cast<int>(sf.tests);
  cfg.num_cycles = static_cast<int>(sf.cycles);
  cfg.background_rate = sf.background;
  cfg.flakiness_rate = sf.flakiness;
  cfg.seed = sf.seed;
  if (!sf.groups.empty()) {
    cfg.groups = make_groups(sf.groups, sf.tests, sf.group_rate, sf.rho);
  }
  write_atomic(sf.out_path, generate_csv(cfg));
  std::cout << "wrote " << sf.out_path << ": " << cfg.num_tests << " test(s) x "
            << cfg.num_cycles << " cycle(s)\n";
  return 0;
}

// ---------------------------------------------------------------------------
// dump-tables

struct DumpFlags {
  InputFlags input;
  std::int64_t cycle = 0;
  int history = 15;
  std::string out_path;
};

int cmd_dump_tables(const CLI::App& cmd, DumpFlags& df) {
  const Dataset dataset = read_dataset(df.input);
  if (dataset.cycles.empty()) {
    throw EmptyInputError("dataset has no cycles");
  }
  const CLI::Option* cycle_opt = cmd.get_option_no_throw("--cycle");
  const CycleId target = (cycle_opt != nullptr && cycle_opt->count() > 0)
                             ? df.cycle
                             : dataset.cycles.back().cycle + 1;
  const CorrelationTable table = build_tables(
      std::span<const CycleLog>(dataset.cycles), target, WindowConfig{df.history});

  std::ostringstream out;
  table.dump_csv(out);
  if (df.out_path.empty()) {
    std::cout << out.str();
  } else {
    write_atomic(df.out_path, out.str());
    std::cout << "wrote " << df.out_path << ": " << table.fail_pair_count()
              << " fail pair(s), " << table.pass_pair_count()
              << " pass pair(s)\n";
  }
  return 0;
}

int run(int argc, char** argv) {
  CLI::App app{"Test-case prioritization: replay schedulers over CI verdict "
               "histories and score them with APFD"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "1.0.0");

  ReplayFlags rf;
  CLI::App* replay = app.add_subcommand(
      "replay", "Replay schedulers over a dataset and report per-cycle APFD");
  add_replay_flags(*replay, rf);

  StatsFlags sf;
  CLI::App* stats =
      app.add_subcommand("stats", "Summarize a dataset as JSON on stdout");
  add_input_flags(*stats, sf.input);
  stats->add_flag("--raw", sf.raw,
                  "Count raw records (before per-cycle deduplication)");

  SynthFlags yf;
  CLI::App* synth = app.add_subcommand(
      "synth", "Generate a synthetic dataset with group-correlated failures");
  add_synth_flags(*synth, yf);

  DumpFlags df;
  CLI::App* dump = app.add_subcommand(
      "dump-tables", "Dump conditional-probability tables as CSV");
  add_input_flags(*dump, df.input);
  dump->add_option("--cycle", df.cycle,
                   "Target cycle whose history window to use (default: one "
                   "past the last cycle)");
  dump->add_option("--history", df.history, "History window in cycles")
      ->capture_default_str();
  dump->add_option("--out", df.out_path, "Output path (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);  // --help / --version
  } catch (const CLI::ParseError& e) {
    std::cerr << "testprio: " << e.what() << "\nRun with --help for usage.\n";
    return 2;
  }

  if (replay->parsed()) return cmd_replay(*replay, rf);
  if (stats->parsed()) return cmd_stats(sf);
  if (synth->parsed()) return cmd_synth(*synth, yf);
  if (dump->parsed()) return cmd_dump_tables(*dump, df);
  return 2;  // unreachable: require_subcommand(1)
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const ParseError& e) {
    std::cerr << "testprio: error: " << e.what() << '\n';
    return 1;
  } catch (const ConfigError& e) {
    std::cerr << "testprio: error: " << e.what() << '\n';
    return 2;
  } catch (const DataError& e) {
    std::cerr << "testprio: error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "testprio: error: " << e.what() << '\n';
    return 3;
  }
}
