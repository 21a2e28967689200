#include "xlradr/cli/output.h"

#include <cstdio>

#include "xlradr/cli/config.h"

namespace xlradr {

std::string FormatNumber(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

std::string MetricsHeader() {
  return "lifetime_ticks,lifetime_censored,throughput_bps,mean_delay_ticks,delivery_ratio,total_energy_j,"
         "retransmissions_total,per_node_death_times,scenario_hash,seed,protocol\n";
}

std::string MetricsRow(const RunMetrics& m, const Scenario& scenario) {
  std::string deaths;
  for (const DeathRecord& d : m.per_node_death_times) {
    if (!deaths.empty()) deaths += ';';
    deaths += std::to_string(Index(d.node)) + '@' + std::to_string(d.at);
  }
  std::string row;
  row += std::to_string(m.lifetime.ticks) + ',';
  row += (m.lifetime.censored ? "1," : "0,");
  row += FormatNumber(m.throughput_bps) + ',';
  row += (m.mean_delay_ticks ? FormatNumber(*m.mean_delay_ticks) : std::string()) + ',';
  row += FormatNumber(m.delivery_ratio) + ',';
  row += FormatNumber(m.total_energy_j) + ',';
  row += std::to_string(m.retransmissions_total) + ',';
  row += deaths + ',';
  row += ScenarioHash(scenario) + ',';
  row += std::to_string(scenario.seed) + ',';
  row += ToString(scenario.protocol);
  row += '\n';
  return row;
}

std::string TraceCsv(const TraceLog& trace) {
  std::string out = "tick,seq,kind,actor,peer,frame_kind,outcome,energy_debit_j\n";
  for (const TraceRow& r : trace.rows) {
    out += std::to_string(r.tick) + ',' + std::to_string(r.seq) + ',';
    out += ToString(r.kind);
    out += ',' + std::to_string(Index(r.actor)) + ',';
    if (r.peer) out += std::to_string(Index(*r.peer));
    out += ',';
    if (r.frame) out += ToString(*r.frame);
    out += ',';
    out += r.outcome;
    out += ',' + FormatNumber(r.energy_debit_j) + '\n';
  }
  return out;
}

std::string LifetimeCurveCsv(const TraceLog& trace) {
  std::string out = "tick,alive_fraction\n";
  for (const auto& [tick, alive] : LifetimeCurve(trace)) out += std::to_string(tick) + ',' + FormatNumber(alive) + '\n';
  return out;
}

}  // namespace xlradr
