#pragma once
// Synthetic CI histories with controllable failure-correlation structure.
// Groups fail together: each cycle a group draws one "group fault" event and
// every member then fails with probability rho, which makes the within-group
// conditional co-failure probability analytically known (it converges to rho)
// and gives the correlation estimator a ground truth to be checked against.

#include <cstdint>
#include <string>
#include <vector>

#include "testprio/core.hpp"

namespace testprio {

struct SynthGroup {
  std::vector<int> members;        // 0-based test indices, disjoint across groups
  double failure_rate = 0.0;       // Bernoulli rate of the group fault event
  double co_failure_strength = 1.0;  // rho: member failure prob given the event
};

struct SynthConfig {
  int num_tests = 0;
  int num_cycles = 0;
  std::vector<SynthGroup> groups;
  double background_rate = 0.0;  // failure rate outside a fired group event
  double flakiness_rate = 0.0;   // independent verdict flip probability
  std::uint64_t seed = 0;

  void validate() const;
};

/// Test name for index i: "t" + 1-based index, zero-padded to num_tests' width.
std::string synth_test_name(int index, int num_tests);

// Fully seed-deterministic generation. Per cycle the draws are: one uniform
// per group (event), then per test in index order one uniform for the failure
// and one for the flakiness flip, each compared against its rate, so the same
// seed always yields the same dataset on every platform.
Dataset generate(const SynthConfig& cfg);

// generate() rendered in the canonical CSV format; byte-identical across
// runs with equal configs.
std::string generate_csv(const SynthConfig& cfg);

}  // namespace testprio
