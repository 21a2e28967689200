#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "xlradr/engine/trace.h"

namespace xlradr {

inline constexpr double kDefaultLifetimeFraction = 0.30;

// Either the tick of the threshold death or, when the run ended first, the
// run end with `censored` set. Censored values are lower bounds only.
struct Lifetime {
  SimTime ticks = 0;
  bool censored = false;
  bool operator==(const Lifetime&) const = default;
};

// Deaths ordered by (tick, node id).
std::vector<DeathRecord> SortedDeaths(const TraceLog& trace);

// Tick of the ceil(fraction * node_count)-th death.
Lifetime NetworkLifetime(const TraceLog& trace, double fraction = kDefaultLifetimeFraction);

struct ThroughputDelay {
  double throughput_bps = 0.0;
  std::optional<double> mean_delay_ticks;  // absent without deliveries
};

// Delivered payload bits over the simulated duration; delay averaged over
// delivered payloads only.
ThroughputDelay ThroughputAndDelay(const TraceLog& trace);

struct EnergyReport {
  std::vector<CategoryLedger> per_node;
  CategoryLedger by_category{};
  double tx_j = 0.0;
  double rx_j = 0.0;
  double total_j = 0.0;
};

EnergyReport ComputeEnergyReport(const TraceLog& trace);

struct RunMetrics {
  Lifetime lifetime;
  double throughput_bps = 0.0;
  std::optional<double> mean_delay_ticks;
  double delivery_ratio = 0.0;
  double total_energy_j = 0.0;
  std::uint64_t retransmissions_total = 0;
  std::vector<DeathRecord> per_node_death_times;
  std::uint64_t generated = 0;
  std::uint64_t delivered = 0;
};

RunMetrics ComputeMetrics(const TraceLog& trace, double fraction = kDefaultLifetimeFraction);

// (tick, alive fraction) starting at (0, 1), one point per death tick, closed
// at the run end.
std::vector<std::pair<SimTime, double>> LifetimeCurve(const TraceLog& trace);

}  // namespace xlradr
