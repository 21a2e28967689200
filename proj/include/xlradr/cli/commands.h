#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "xlradr/engine/scenario.h"
#include "xlradr/metrics/metrics.h"

namespace xlradr {

// "1,2,5-8" -> {1,2,5,6,7,8}. Throws ConfigInvalid naming `flag`.
std::vector<std::uint64_t> ParseSeedList(const std::string& text, const std::string& flag = "--seeds");
// "3,6,9" -> {"3","6","9"}; empty items are rejected.
std::vector<std::string> ParseValueList(const std::string& text, const std::string& flag);

struct ComparePair {
  std::uint64_t seed = 0;
  RunMetrics e2xlradr;
  RunMetrics dsr;
};

struct CompareSummary {
  std::size_t pairs = 0;
  std::size_t observed_pairs = 0;  // neither lifetime censored
  // Mean of e2xlradr/dsr over fully observed pairs.
  std::optional<double> mean_ratio_observed;
  // Valid lower bound on the mean ratio when every dsr lifetime was observed:
  // a censored e2xlradr lifetime is at least the run length.
  std::optional<double> mean_ratio_lower_bound;
  bool low_confidence = true;
};

// Both protocols per seed on the same realization.
std::vector<ComparePair> RunCompare(const Scenario& base, const std::vector<std::uint64_t>& seeds, bool parallel = true);
CompareSummary SummarizeCompare(const std::vector<ComparePair>& pairs);
std::string CompareCsv(const std::vector<ComparePair>& pairs, const Scenario& base);

struct SweepRow {
  std::string value;
  Scenario scenario;
  RunMetrics metrics;
};

// Values x seeds x {dsr, e2xlradr}, rows sorted by (value, seed, protocol).
std::vector<SweepRow> RunSweep(const Scenario& base, const std::string& key, const std::vector<std::string>& values,
                               const std::vector<std::uint64_t>& seeds, bool parallel = true);
std::string SweepCsv(const std::string& key, const std::vector<SweepRow>& rows);

// Entry point of the xlradr executable. Exit codes: 0 ok, 2 config error, 1 internal error.
int RunCli(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace xlradr
