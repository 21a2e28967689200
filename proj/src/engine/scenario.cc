#include "xlradr/engine/scenario.h"

#include <cmath>

namespace xlradr {

std::string_view ToString(Protocol protocol) {
  return protocol == Protocol::kE2xlradr ? "e2xlradr" : "dsr";
}

std::string_view ToString(MobilityKind kind) {
  return kind == MobilityKind::kStatic ? "static" : "random_waypoint";
}

SimTime Scenario::Airtime(std::uint32_t bits) const {
  const double ticks = static_cast<double>(bits) / (bitrate_bps * tick_seconds);
  // Guard against 4.000000001-style rounding before taking the ceiling.
  const double snapped = std::round(ticks * 1e9) / 1e9;
  return std::max<SimTime>(1, static_cast<SimTime>(std::ceil(snapped)));
}

void Scenario::Validate() const {
  if (node_count == 0) throw ConfigInvalid("node_count", "must be positive");
  if (!(area_w_m > 0)) throw ConfigInvalid("area_w_m", "must be positive");
  if (!(area_h_m > 0)) throw ConfigInvalid("area_h_m", "must be positive");
  if (source_count == 0) throw ConfigInvalid("source_count", "must be positive");
  if (!(range_min_m > 0)) throw ConfigInvalid("range_min_m", "must be positive");
  if (!(range_max_m >= range_min_m)) throw ConfigInvalid("range_max_m", "must be >= range_min_m");
  if (!(initial_energy_j > 0)) throw ConfigInvalid("initial_energy_j", "must be positive");
  if (!(bitrate_bps > 0)) throw ConfigInvalid("bitrate_bps", "must be positive");
  if (!(tick_seconds > 0)) throw ConfigInvalid("tick_seconds", "must be positive");
  if (packet_size_bits == 0) throw ConfigInvalid("packet_size_bits", "must be positive");
  if (control_size_bits == 0) throw ConfigInvalid("control_size_bits", "must be positive");
  if (!(traffic_rate_pps >= 0) || !std::isfinite(traffic_rate_pps))
    throw ConfigInvalid("traffic_rate_pps", "must be a finite non-negative rate");
  if (sim_time_ticks <= 0) throw ConfigInvalid("sim_time_ticks", "must be positive");
  if (kmax.floor < 1) throw ConfigInvalid("kmax.floor", "must be >= 1");
  if (tf_ticks && *tf_ticks <= 0) throw ConfigInvalid("tf_ticks", "must be positive");
  if (max_rrequest_retries < 0) throw ConfigInvalid("max_rrequest_retries", "must be >= 0");
  if (dsr_retry_limit < 0) throw ConfigInvalid("dsr_retry_limit", "must be >= 0");
  if (!(speed_mps >= 0) || !std::isfinite(speed_mps)) throw ConfigInvalid("mobility.speed_mps", "must be >= 0");
  if (pause_ticks < 0) throw ConfigInvalid("mobility.pause_ticks", "must be >= 0");
  if (interference_threshold < 0) throw ConfigInvalid("interference_threshold", "must be >= 0");
  if (!(energy_threshold_fraction >= 0 && energy_threshold_fraction <= 1))
    throw ConfigInvalid("energy_threshold_fraction", "must lie in [0, 1]");
  if (recover_depth < 0) throw ConfigInvalid("recover_depth", "must be >= 0");
  if (!(energy.e_elec_j_per_bit > 0)) throw ConfigInvalid("e_elec_j_per_bit", "must be positive");
  if (!(energy.eps_amp_j_per_bit_m2 > 0)) throw ConfigInvalid("eps_amp_j_per_bit_m2", "must be positive");
  if (!fixed_layout.empty() && fixed_layout.size() != node_count)
    throw ConfigInvalid("node_count", "does not match the fixed layout");
}

}  // namespace xlradr
