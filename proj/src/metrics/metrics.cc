#include "xlradr/metrics/metrics.h"

#include <algorithm>
#include <cmath>

namespace xlradr {

std::vector<DeathRecord> SortedDeaths(const TraceLog& trace) {
  std::vector<DeathRecord> deaths = trace.deaths;
  std::sort(deaths.begin(), deaths.end(), [](const DeathRecord& a, const DeathRecord& b) {
    return a.at != b.at ? a.at < b.at : Index(a.node) < Index(b.node);
  });
  return deaths;
}

Lifetime NetworkLifetime(const TraceLog& trace, double fraction) {
  // The epsilon keeps 0.3 * 50 at 15 instead of 16 after rounding noise.
  const auto k = static_cast<std::size_t>(std::ceil(fraction * trace.node_count - 1e-9));
  const std::vector<DeathRecord> deaths = SortedDeaths(trace);
  if (k == 0) return {0, false};
  if (deaths.size() < k) return {trace.sim_end, true};
  return {deaths[k - 1].at, false};
}

ThroughputDelay ThroughputAndDelay(const TraceLog& trace) {
  ThroughputDelay out;
  double bits = 0.0;
  double delay_sum = 0.0;
  std::size_t delivered = 0;
  for (const PayloadRecord& p : trace.payloads) {
    if (!p.delivered_at) continue;
    bits += p.bits;
    delay_sum += static_cast<double>(*p.delivered_at - p.generated_at);
    ++delivered;
  }
  const double seconds = static_cast<double>(trace.sim_end) * trace.tick_seconds;
  if (seconds > 0) out.throughput_bps = bits / seconds;
  if (delivered > 0) out.mean_delay_ticks = delay_sum / static_cast<double>(delivered);
  return out;
}

EnergyReport ComputeEnergyReport(const TraceLog& trace) {
  EnergyReport r;
  r.per_node = trace.ledger;
  for (const CategoryLedger& node : trace.ledger) {
    for (std::size_t c = 0; c < kEnergyCategoryCount; ++c) {
      r.by_category[c] += node[c];
      if (c >= kRxCategoryBase && c < kDataRetxCategory) {
        r.rx_j += node[c];
      } else {
        r.tx_j += node[c];
      }
    }
  }
  r.total_j = r.tx_j + r.rx_j;
  return r;
}

RunMetrics ComputeMetrics(const TraceLog& trace, double fraction) {
  RunMetrics m;
  m.lifetime = NetworkLifetime(trace, fraction);
  const ThroughputDelay td = ThroughputAndDelay(trace);
  m.throughput_bps = td.throughput_bps;
  m.mean_delay_ticks = td.mean_delay_ticks;
  m.generated = trace.payloads.size();
  m.delivered = static_cast<std::uint64_t>(
      std::count_if(trace.payloads.begin(), trace.payloads.end(), [](const PayloadRecord& p) { return p.delivered_at.has_value(); }));
  m.delivery_ratio = m.generated == 0 ? 0.0 : static_cast<double>(m.delivered) / static_cast<double>(m.generated);
  m.total_energy_j = ComputeEnergyReport(trace).total_j;
  m.retransmissions_total = trace.retransmissions;
  m.per_node_death_times = SortedDeaths(trace);
  return m;
}

std::vector<std::pair<SimTime, double>> LifetimeCurve(const TraceLog& trace) {
  std::vector<std::pair<SimTime, double>> curve;
  const double n = trace.node_count == 0 ? 1.0 : static_cast<double>(trace.node_count);
  curve.emplace_back(0, 1.0);
  std::size_t dead = 0;
  for (const DeathRecord& d : SortedDeaths(trace)) {
    ++dead;
    const double alive = (n - static_cast<double>(dead)) / n;
    if (curve.back().first == d.at) {
      curve.back().second = alive;
    } else {
      curve.emplace_back(d.at, alive);
    }
  }
  if (curve.back().first != trace.sim_end) curve.emplace_back(trace.sim_end, curve.back().second);
  return curve;
}

}  // namespace xlradr
