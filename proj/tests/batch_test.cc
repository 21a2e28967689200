#include <gtest/gtest.h>

#include "xlradr/cli/batch.h"
#include "xlradr/cli/output.h"

using namespace xlradr;

namespace {

std::vector<Scenario> Mixed() {
  std::vector<Scenario> runs;
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    for (Protocol p : {Protocol::kE2xlradr, Protocol::kDsr}) {
      Scenario s;
      s.seed = seed;
      s.protocol = p;
      s.node_count = 25;
      s.sim_time_ticks = 8000;
      s.initial_energy_j = 0.1;
      runs.push_back(s);
    }
  }
  return runs;
}

}  // namespace

TEST(Batch, ParallelMatchesSerial) {
  const auto runs = Mixed();
  const auto serial = RunBatchSerial(runs);
  for (int threads : {1, 2, 4}) {
    const auto parallel = RunBatchParallel(runs, threads);
    ASSERT_EQ(parallel.size(), serial.size());
    for (std::size_t i = 0; i < runs.size(); ++i) {
      EXPECT_EQ(MetricsRow(parallel[i], runs[i]), MetricsRow(serial[i], runs[i])) << "run " << i << " threads " << threads;
      EXPECT_EQ(parallel[i].total_energy_j, serial[i].total_energy_j);
    }
  }
}

TEST(Batch, ErrorsPropagate) {
  auto runs = Mixed();
  runs[3].node_count = 0;
  EXPECT_THROW(RunBatchParallel(runs, 2), ConfigInvalid);
  EXPECT_THROW(RunBatchSerial(runs), ConfigInvalid);
}

TEST(Batch, Empty) {
  EXPECT_TRUE(RunBatchParallel(std::span<const Scenario>{}).empty());
  EXPECT_TRUE(RunBatchSerial(std::span<const Scenario>{}).empty());
}
