#include "xlradr/cli/batch.h"

#include <exception>

#include <omp.h>

#include "xlradr/engine/simulator.h"

namespace xlradr {

namespace {

RunMetrics RunOne(const Scenario& scenario) {
  return ComputeMetrics(RunScenario(scenario, RunOptions{.record_rows = false}));
}

}  // namespace

std::vector<RunMetrics> RunBatchSerial(std::span<const Scenario> scenarios) {
  std::vector<RunMetrics> out;
  out.reserve(scenarios.size());
  for (const Scenario& s : scenarios) out.push_back(RunOne(s));
  return out;
}

std::vector<RunMetrics> RunBatchParallel(std::span<const Scenario> scenarios, int threads) {
  std::vector<RunMetrics> out(scenarios.size());
  std::vector<std::exception_ptr> errors(scenarios.size());
  const auto n = static_cast<std::int64_t>(scenarios.size());
  if (threads <= 0) threads = omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
  for (std::int64_t i = 0; i < n; ++i) {
    try {
      out[i] = RunOne(scenarios[i]);
    } catch (...) {
      errors[i] = std::current_exception();  // exceptions must not cross the region
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

}  // namespace xlradr
