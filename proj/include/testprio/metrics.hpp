#pragma once
// APFD under the one-unique-fault-per-failing-test convention.

#include <vector>

#include "testprio/core.hpp"

namespace testprio {

// Average Percentage of Fault Detection of an executed order:
//
//   APFD = 1 - (sum of 1-based positions of the failing tests) / (n * m)
//            + 1 / (2n)
//
// where n is the trace length and m the number of faults. Each failing test
// reveals its own fault, so positions are summed directly. The trace must
// contain only Pass/Fault outcomes and at least one Fault.
double apfd(const std::vector<Outcome>& trace);

}  // namespace testprio
