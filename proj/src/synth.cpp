#include "testprio/synth.hpp"

#include <random>
#include <vector>

#include "testprio/ingest.hpp"

namespace testprio {

namespace {

void check_rate(double rate, const char* name) {
  if (!(rate >= 0.0 && rate <= 1.0)) {
    throw ConfigError(std::string(name) + " must lie in [0, 1], got " +
                      std::to_string(rate));
  }
}

// Uniform double in [0, 1) from the top 53 bits; identical on every platform.
double uniform01(std::mt19937_64& g) {
  return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

}  // namespace

void SynthConfig::validate() const {
  if (num_tests < 1) {
    throw ConfigError("num_tests must be >= 1, got " + std::to_string(num_tests));
  }
  if (num_cycles < 1) {
    throw ConfigError("num_cycles must be >= 1, got " + std::to_string(num_cycles));
  }
  check_rate(background_rate, "background_rate");
  check_rate(flakiness_rate, "flakiness_rate");

  std::vector<bool> taken(static_cast<std::size_t>(num_tests), false);
  for (std::size_t gi = 0; gi < groups.size(); ++gi) {
    const SynthGroup& g = groups[gi];
    const std::string where = "group " + std::to_string(gi);
    if (g.members.empty()) throw ConfigError(where + " has no members");
    check_rate(g.failure_rate, (where + " failure_rate").c_str());
    check_rate(g.co_failure_strength, (where + " co_failure_strength").c_str());
    for (const int m : g.members) {
      if (m < 0 || m >= num_tests) {
        throw ConfigError(where + " member " + std::to_string(m) +
                          " is out of range [0, " + std::to_string(num_tests) + ")");
      }
      if (taken[static_cast<std::size_t>(m)]) {
        throw ConfigError("test index " + std::to_string(m) +
                          " belongs to more than one group");
      }
      taken[static_cast<std::size_t>(m)] = true;
    }
  }
}

std::string synth_test_name(int index, int num_tests) {
  std::string digits = std::to_string(index + 1);
  const std::size_t width = std::to_string(num_tests).size();
  if (digits.size() < width) {
    digits.insert(0, width - digits.size(), '0');
  }
  return "t" + digits;
}

Dataset generate(const SynthConfig& cfg) {
  cfg.validate();

  const std::size_t n = static_cast<std::size_t>(cfg.num_tests);
  std::vector<int> group_of(n, -1);
  for (std::size_t gi = 0; gi < cfg.groups.size(); ++gi) {
    for (const int m : cfg.groups[gi].members) {
      group_of[static_cast<std::size_t>(m)] = static_cast<int>(gi);
    }
  }

  std::vector<TestId> names;
  names.reserve(n);
  for (int i = 0; i < cfg.num_tests; ++i) {
    names.push_back(synth_test_name(i, cfg.num_tests));
  }

  std::mt19937_64 rng(cfg.seed);
  Dataset d;
  d.cycles.reserve(static_cast<std::size_t>(cfg.num_cycles));
  std::vector<bool> fired(cfg.groups.size(), false);

  for (int cycle = 0; cycle < cfg.num_cycles; ++cycle) {
    for (std::size_t gi = 0; gi < cfg.groups.size(); ++gi) {
      fired[gi] = uniform01(rng) < cfg.groups[gi].failure_rate;
    }

    CycleLog log;
    log.cycle = cycle;
    log.outcomes.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      const int gi = group_of[i];
      const double fail_rate = (gi >= 0 && fired[static_cast<std::size_t>(gi)])
                                   ? cfg.groups[static_cast<std::size_t>(gi)]
                                         .co_failure_strength
                                   : cfg.background_rate;
      bool fails = uniform01(rng) < fail_rate;
      if (uniform01(rng) < cfg.flakiness_rate) fails = !fails;
      log.outcomes.emplace_back(names[i], fails ? Outcome::Fault : Outcome::Pass);
    }
    d.cycles.push_back(std::move(log));
  }

  for (const TestId& t : names) d.universe.insert(t);
  return d;
}

std::string generate_csv(const SynthConfig& cfg) {
  return serialize_canonical(generate(cfg));
}

}  // namespace testprio
