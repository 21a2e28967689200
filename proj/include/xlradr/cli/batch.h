#pragma once

#include <span>
#include <vector>

#include "xlradr/engine/scenario.h"
#include "xlradr/metrics/metrics.h"

namespace xlradr {

// Runs every scenario without trace rows and returns metrics in input order.
// The parallel runner spreads runs over OpenMP threads; each run is an
// independent pure function, so both runners return identical results.
std::vector<RunMetrics> RunBatchSerial(std::span<const Scenario> scenarios);
std::vector<RunMetrics> RunBatchParallel(std::span<const Scenario> scenarios, int threads = 0);

}  // namespace xlradr
