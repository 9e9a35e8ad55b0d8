// End-to-end checks of the command-line binary via subprocesses.

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;

namespace {

int g_dir_counter = 0;

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("testprio_cli_" + std::to_string(::getpid()) + "_" +
            std::to_string(g_dir_counter++));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

void write_file(const std::string& p, const std::string& content) {
  std::ofstream out(p, std::ios::binary);
  out << content;
}

std::string read_file(const std::string& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct CliResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

CliResult run_cli(const TempDir& dir, const std::string& args) {
  const std::string out_file = dir.file("_stdout");
  const std::string err_file = dir.file("_stderr");
  const std::string cmd = std::string(TESTPRIO_CLI_PATH) + " " + args + " >" +
                          out_file + " 2>" + err_file;
  const int status = std::system(cmd.c_str());
  CliResult r;
  r.exit_code = (status == -1 || !WIFEXITED(status)) ? -1 : WEXITSTATUS(status);
  r.out = read_file(out_file);
  r.err = read_file(err_file);
  return r;
}

// Parsed rows of a report CSV, header skipped.
std::vector<std::vector<std::string>> report_rows(const std::string& path) {
  std::istringstream in(read_file(path));
  std::vector<std::vector<std::string>> rows;
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (header) {
      header = false;
      continue;
    }
    std::vector<std::string> fields;
    std::istringstream ls(line);
    std::string field;
    while (std::getline(ls, field, ',')) fields.push_back(field);
    rows.push_back(std::move(fields));
  }
  return rows;
}

const char* kTinyCanonical =
    "test_id,cycle,verdict\n"
    "A,1,1\n"
    "B,1,0\n"
    "A,2,0\n"
    "B,2,1\n"
    "A,3,1\n"
    "B,3,0\n";

}  // namespace

TEST_CASE("cli stats reports normalized dataset statistics") {
  TempDir dir;
  write_file(dir.file("d.csv"), kTinyCanonical);
  const CliResult r = run_cli(dir, "stats --input " + dir.file("d.csv"));
  REQUIRE(r.exit_code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["distinct_tests"] == 2);
  CHECK(j["cycles"] == 3);
  CHECK(j["verdict_count"] == 6);
  CHECK(j["failed_fraction"] == 0.5);
}

TEST_CASE("cli stats distinguishes raw from normalized counts") {
  TempDir dir;
  write_file(dir.file("d.csv"),
             "test_id,cycle,verdict\n"
             "A,1,1\n"
             "A,1,0\n");
  const CliResult normalized = run_cli(dir, "stats --input " + dir.file("d.csv"));
  REQUIRE(normalized.exit_code == 0);
  CHECK(nlohmann::json::parse(normalized.out)["verdict_count"] == 1);
  CHECK(nlohmann::json::parse(normalized.out)["failed_fraction"] == 0.0);

  const CliResult raw = run_cli(dir, "stats --raw --input " + dir.file("d.csv"));
  REQUIRE(raw.exit_code == 0);
  CHECK(nlohmann::json::parse(raw.out)["verdict_count"] == 2);
  CHECK(nlohmann::json::parse(raw.out)["failed_fraction"] == 0.5);
}

TEST_CASE("cli stats exit codes distinguish empty input from bad data") {
  TempDir dir;
  write_file(dir.file("empty.csv"), "");
  CHECK(run_cli(dir, "stats --input " + dir.file("empty.csv")).exit_code == 2);

  write_file(dir.file("bad.csv"), "who,what,when\nA,1,0\n");
  CHECK(run_cli(dir, "stats --input " + dir.file("bad.csv")).exit_code == 1);

  CHECK(run_cli(dir, "stats --input " + dir.file("missing.csv")).exit_code == 2);
}

TEST_CASE("cli reads the industrial format with configurable columns") {
  TempDir dir;
  write_file(dir.file("ind.csv"),
             "Id;Verdict;Cycle;Name\n"
             "1;1;3;alpha\n"
             "2;0;3;beta\n");
  const CliResult r =
      run_cli(dir, "stats --format industrial --input " + dir.file("ind.csv"));
  REQUIRE(r.exit_code == 0);
  CHECK(nlohmann::json::parse(r.out)["distinct_tests"] == 2);

  write_file(dir.file("custom.csv"),
             "tc|rev|res\n"
             "T1|4|1\n");
  const CliResult custom = run_cli(
      dir, "stats --format industrial --col-test tc --col-cycle rev "
           "--col-verdict res --delimiter \"|\" --input " +
               dir.file("custom.csv"));
  REQUIRE(custom.exit_code == 0);
  CHECK(nlohmann::json::parse(custom.out)["cycles"] == 1);
}

TEST_CASE("cli synth is byte-deterministic for a fixed seed") {
  TempDir dir;
  const std::string flags =
      "synth --tests 20 --cycles 40 --groups 4x5 --rho 1.0 --group-rate 0.4 "
      "--flakiness 0.02 --seed 7 --out ";
  CHECK(run_cli(dir, flags + dir.file("a.csv")).exit_code == 0);
  CHECK(run_cli(dir, flags + dir.file("b.csv")).exit_code == 0);
  const std::string a = read_file(dir.file("a.csv"));
  CHECK(!a.empty());
  CHECK(a == read_file(dir.file("b.csv")));
  CHECK(a.substr(0, 22) == "test_id,cycle,verdict\n");
}

TEST_CASE("cli synth rejects invalid configurations") {
  TempDir dir;
  CHECK(run_cli(dir, "synth --tests 10 --cycles 5 --groups 2x3 --rho 1.2 --out " +
                         dir.file("x.csv"))
            .exit_code == 2);
  CHECK(run_cli(dir, "synth --tests 10 --cycles 5 --groups 4x9 --out " +
                         dir.file("x.csv"))
            .exit_code == 2);
  CHECK(run_cli(dir, "synth --tests 10 --cycles 5 --groups banana --out " +
                         dir.file("x.csv"))
            .exit_code == 2);
  // rejected even though no group would consume the value
  CHECK(run_cli(dir, "synth --tests 5 --cycles 2 --rho 7 --out " + dir.file("x.csv"))
            .exit_code == 2);
  CHECK(run_cli(dir, "synth --tests 5 --cycles 2 --group-rate -0.1 --out " +
                         dir.file("x.csv"))
            .exit_code == 2);
  CHECK(run_cli(dir, "synth --cycles 5 --out " + dir.file("x.csv")).exit_code == 2);
}

TEST_CASE("cli replay writes a report and a summary") {
  TempDir dir;
  REQUIRE(run_cli(dir, "synth --tests 15 --cycles 30 --groups 3x4 --rho 0.9 "
                       "--group-rate 0.4 --background 0.3 --seed 3 --out " +
                           dir.file("d.csv"))
              .exit_code == 0);

  const CliResult r = run_cli(
      dir, "replay --input " + dir.file("d.csv") +
               " --static worst --dynamic cp --history 15 --k 0.8 --out " +
               dir.file("r.csv") + " --summary " + dir.file("s.json"));
  REQUIRE(r.exit_code == 0);

  const auto rows = report_rows(dir.file("r.csv"));
  REQUIRE(!rows.empty());
  for (const auto& row : rows) {
    REQUIRE(row.size() == 4);
    CHECK((row[1] == "worst" || row[1] == "worst+cp"));
  }

  const auto summary = nlohmann::json::parse(read_file(dir.file("s.json")));
  REQUIRE(summary.contains("worst"));
  REQUIRE(summary.contains("worst+cp"));
  CHECK(summary["worst"]["median"].is_number());
}

TEST_CASE("cli replay is byte-deterministic across runs") {
  TempDir dir;
  REQUIRE(run_cli(dir, "synth --tests 10 --cycles 25 --groups 2x4 --rho 0.8 "
                       "--group-rate 0.5 --background 0.2 --seed 11 --out " +
                           dir.file("d.csv"))
              .exit_code == 0);
  const std::string base = "replay --input " + dir.file("d.csv") +
                           " --static random --reps 10 --seed 42 --out ";
  REQUIRE(run_cli(dir, base + dir.file("r1.csv")).exit_code == 0);
  REQUIRE(run_cli(dir, base + dir.file("r2.csv")).exit_code == 0);
  const std::string r1 = read_file(dir.file("r1.csv"));
  CHECK(!r1.empty());
  CHECK(r1 == read_file(dir.file("r2.csv")));
}

TEST_CASE("cli replay with dynamic off emits static rows only") {
  TempDir dir;
  write_file(dir.file("d.csv"), kTinyCanonical);
  const CliResult r =
      run_cli(dir, "replay --input " + dir.file("d.csv") +
                       " --static optimal --dynamic none --out " + dir.file("r.csv"));
  REQUIRE(r.exit_code == 0);
  const auto rows = report_rows(dir.file("r.csv"));
  REQUIRE(rows.size() == 3);  // three evaluable cycles, one row each
  for (const auto& row : rows) CHECK(row[1] == "optimal");
}

TEST_CASE("cli replay external scheduling needs and uses a scores file") {
  TempDir dir;
  write_file(dir.file("d.csv"), kTinyCanonical);
  CHECK(run_cli(dir, "replay --input " + dir.file("d.csv") +
                         " --static external --out " + dir.file("r.csv"))
            .exit_code == 2);

  write_file(dir.file("scores.csv"), "test_id,score\nA,2.0\nB,1.0\n");
  const CliResult r = run_cli(
      dir, "replay --input " + dir.file("d.csv") + " --static external --scores " +
               dir.file("scores.csv") + " --dynamic none --out " + dir.file("r.csv"));
  REQUIRE(r.exit_code == 0);
  for (const auto& row : report_rows(dir.file("r.csv"))) {
    CHECK(row[1] == "external");
  }

  write_file(dir.file("badscores.csv"), "test_id,score\nA,notanumber\n");
  CHECK(run_cli(dir, "replay --input " + dir.file("d.csv") +
                         " --static external --scores " + dir.file("badscores.csv") +
                         " --out " + dir.file("r.csv"))
            .exit_code == 1);
}

TEST_CASE("cli config files fill in flags without overriding them") {
  TempDir dir;
  write_file(dir.file("d.csv"), kTinyCanonical);
  // File asks for worst and k = 0; the command line forces optimal.
  write_file(dir.file("cfg.json"), R"({"static": "worst", "k": 0.0})");

  const CliResult r = run_cli(
      dir, "replay --input " + dir.file("d.csv") + " --config " + dir.file("cfg.json") +
               " --static optimal --out " + dir.file("r.csv"));
  REQUIRE(r.exit_code == 0);

  const auto rows = report_rows(dir.file("r.csv"));
  REQUIRE(rows.size() == 6);  // flag won: optimal plus optimal+cp rows
  for (std::size_t i = 0; i < rows.size(); i += 2) {
    CHECK(rows[i][1] == "optimal");
    CHECK(rows[i + 1][1] == "optimal+cp");
    // k = 0 came from the file: the dynamic run cannot leave the static order.
    CHECK(rows[i][3] == rows[i + 1][3]);
  }
}

TEST_CASE("cli rejects unknown config keys") {
  TempDir dir;
  write_file(dir.file("d.csv"), kTinyCanonical);
  write_file(dir.file("cfg.json"), R"({"histry": 5})");
  CHECK(run_cli(dir, "replay --input " + dir.file("d.csv") + " --config " +
                         dir.file("cfg.json") + " --out " + dir.file("r.csv"))
            .exit_code == 2);
}

TEST_CASE("cli dump-tables prints the estimated probabilities") {
  TempDir dir;
  write_file(dir.file("d.csv"),
             "test_id,cycle,verdict\n"
             "t1,1,1\nt2,1,1\n"
             "t1,2,1\nt2,2,1\n"
             "t1,3,0\nt2,3,1\n"
             "t1,4,0\nt2,4,0\n");
  const CliResult r = run_cli(dir, "dump-tables --input " + dir.file("d.csv"));
  REQUIRE(r.exit_code == 0);
  CHECK(r.out.find("pending,executed,direction,probability\n") == 0);
  CHECK(r.out.find("t2,t1,fail,1\n") != std::string::npos);

  // Targeting cycle 3 hides cycles 3 and 4: no pass entries remain.
  const CliResult early =
      run_cli(dir, "dump-tables --cycle 3 --input " + dir.file("d.csv"));
  REQUIRE(early.exit_code == 0);
  CHECK(early.out.find(",pass,") == std::string::npos);
  CHECK(early.out.find("t2,t1,fail,1\n") != std::string::npos);
}

TEST_CASE("cli usage errors and help") {
  TempDir dir;
  CHECK(run_cli(dir, "--help").exit_code == 0);
  CHECK(run_cli(dir, "replay --help").exit_code == 0);
  CHECK(run_cli(dir, "").exit_code == 2);
  CHECK(run_cli(dir, "frobnicate").exit_code == 2);
  CHECK(run_cli(dir, "stats --no-such-flag --input x").exit_code == 2);
  CHECK(run_cli(dir, "replay --input missing.csv --out " + dir.file("r.csv"))
            .exit_code == 2);
}
