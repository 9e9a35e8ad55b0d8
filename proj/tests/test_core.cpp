#include <utility>
#include <vector>

#include "doctest.h"

#include "testprio/core.hpp"
#include "testutil.hpp"

using namespace testprio;
using testutil::make_log;

TEST_CASE("raw verdict codes outside 0..3 are rejected") {
  CHECK_THROWS_AS(RawVerdict(-1), ParseError);
  CHECK_THROWS_AS(RawVerdict(4), ParseError);
  CHECK(RawVerdict(0).code == 0);
  CHECK(RawVerdict(3).code == 3);
}

TEST_CASE("verdict classes: 0 pass, 1 and 2 fault, 3 excluded") {
  CHECK(classify_verdict(RawVerdict(0)) == Outcome::Pass);
  CHECK(classify_verdict(RawVerdict(1)) == Outcome::Fault);
  CHECK(classify_verdict(RawVerdict(2)) == Outcome::Fault);
  CHECK(classify_verdict(RawVerdict(3)) == Outcome::Excluded);
}

TEST_CASE("outcome round-trips through its canonical code") {
  CHECK(classify_verdict(RawVerdict(to_raw_code(Outcome::Pass))) == Outcome::Pass);
  CHECK(classify_verdict(RawVerdict(to_raw_code(Outcome::Fault))) == Outcome::Fault);
  CHECK(classify_verdict(RawVerdict(to_raw_code(Outcome::Excluded))) ==
        Outcome::Excluded);
}

TEST_CASE("normalization keeps the last verdict of a re-executed test") {
  const std::vector<VerdictRecord> records{
      {"A", 1, RawVerdict(1), 0},
      {"A", 1, RawVerdict(0), 1},
  };
  const CycleLog log = normalize_cycle(records);
  CHECK(log.cycle == 1);
  REQUIRE(log.outcomes.size() == 1);
  CHECK(log.outcomes[0] == std::pair<TestId, Outcome>{"A", Outcome::Pass});
}

TEST_CASE("normalization picks by sequence number, not record position") {
  const std::vector<VerdictRecord> records{
      {"A", 7, RawVerdict(0), 5},
      {"A", 7, RawVerdict(2), 2},
  };
  const CycleLog log = normalize_cycle(records);
  REQUIRE(log.outcomes.size() == 1);
  CHECK(log.outcomes[0].second == Outcome::Pass);
}

TEST_CASE("normalization keeps first-appearance order across tests") {
  const std::vector<VerdictRecord> records{
      {"B", 3, RawVerdict(0), 0},
      {"A", 3, RawVerdict(1), 1},
      {"B", 3, RawVerdict(1), 2},
  };
  const CycleLog log = normalize_cycle(records);
  REQUIRE(log.outcomes.size() == 2);
  CHECK(log.outcomes[0] == std::pair<TestId, Outcome>{"B", Outcome::Fault});
  CHECK(log.outcomes[1] == std::pair<TestId, Outcome>{"A", Outcome::Fault});
}

TEST_CASE("normalization rejects malformed record groups") {
  SUBCASE("duplicate (test, sequence)") {
    const std::vector<VerdictRecord> records{
        {"A", 1, RawVerdict(0), 0},
        {"A", 1, RawVerdict(1), 0},
    };
    CHECK_THROWS_AS(normalize_cycle(records), ParseError);
  }
  SUBCASE("records from different cycles") {
    const std::vector<VerdictRecord> records{
        {"A", 1, RawVerdict(0), 0},
        {"B", 2, RawVerdict(0), 0},
    };
    CHECK_THROWS_AS(normalize_cycle(records), DataError);
  }
  SUBCASE("no records") {
    CHECK_THROWS_AS(normalize_cycle({}), DataError);
  }
}

TEST_CASE("cycle log accessors") {
  const CycleLog log = make_log(4, {{"A", Outcome::Fault},
                                    {"B", Outcome::Pass},
                                    {"C", Outcome::Excluded},
                                    {"D", Outcome::Fault}});
  CHECK(log.outcome_of("A") == Outcome::Fault);
  CHECK(log.outcome_of("C") == Outcome::Excluded);
  CHECK(!log.outcome_of("Z").has_value());
  CHECK(log.schedulable() == std::vector<TestId>{"A", "B", "D"});
  CHECK(log.fault_count() == 2);
  CHECK(log.pass_count() == 1);
}

TEST_CASE("evaluable cycles need at least one fault and one pass") {
  CHECK(is_evaluable(make_log(1, {{"A", Outcome::Fault}, {"B", Outcome::Pass}})));
  CHECK(!is_evaluable(make_log(1, {{"A", Outcome::Fault}, {"B", Outcome::Fault}})));
  CHECK(!is_evaluable(make_log(1, {{"A", Outcome::Pass}})));
  CHECK(!is_evaluable(
      make_log(1, {{"A", Outcome::Fault}, {"B", Outcome::Excluded}})));
  CHECK(!is_evaluable(make_log(1, {})));
}

TEST_CASE("dataset lookup by cycle id") {
  Dataset d;
  d.cycles = {make_log(1, {{"A", Outcome::Pass}}),
              make_log(5, {{"A", Outcome::Fault}}),
              make_log(9, {{"A", Outcome::Pass}})};
  REQUIRE(d.find_cycle(5) != nullptr);
  CHECK(d.find_cycle(5)->cycle == 5);
  CHECK(d.find_cycle(2) == nullptr);
  CHECK(d.find_cycle(10) == nullptr);
}
