#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "xlradr/core/types.h"
#include "xlradr/phy/radio.h"
#include "xlradr/routing/retry_policy.h"

namespace xlradr {

enum class Protocol { kE2xlradr, kDsr };
enum class MobilityKind { kStatic, kRandomWaypoint };

std::string_view ToString(Protocol protocol);
std::string_view ToString(MobilityKind kind);

class ConfigInvalid : public std::runtime_error {
 public:
  ConfigInvalid(std::string key, const std::string& reason)
      : std::runtime_error(key + ": " + reason), m_key(std::move(key)) {}
  const std::string& key() const { return m_key; }

 private:
  std::string m_key;
};

struct NodeLayout {
  Position pos;
  double range_m = 0.0;
  std::optional<double> energy_j;  // unset: initial_energy_j
};

struct TrafficItem {
  SimTime at = 0;
  NodeId src{};
  NodeId dst{};
  bool operator==(const TrafficItem&) const = default;
};

// Defaults: 50 nodes on 1000 x 1000 m, 250-350 m range, 1024-bit packets,
// 70000 ticks of 1 ms.
struct Scenario {
  std::uint32_t node_count = 50;
  double area_w_m = 1000.0;
  double area_h_m = 1000.0;
  std::uint32_t source_count = 5;
  double range_min_m = 250.0;
  double range_max_m = 350.0;
  double initial_energy_j = 0.5;
  double bitrate_bps = 250000.0;
  double tick_seconds = 1e-3;
  std::uint32_t packet_size_bits = 1024;
  std::uint32_t control_size_bits = 64;
  double traffic_rate_pps = 3.0;
  SimTime sim_time_ticks = 70000;
  Protocol protocol = Protocol::kE2xlradr;
  KmaxPolicy kmax;
  std::optional<SimTime> tf_ticks;  // unset: 3 x (control + data airtime)
  int max_rrequest_retries = 5;
  int dsr_retry_limit = 3;
  MobilityKind mobility = MobilityKind::kStatic;
  double speed_mps = 2.0;
  SimTime pause_ticks = 1000;
  int interference_threshold = 10;
  double energy_threshold_fraction = 0.2;
  int recover_depth = 2;
  EnergyModel energy;
  std::uint64_t seed = 1;

  // Hand-built topologies and traffic (library use only, not config keys).
  std::vector<NodeLayout> fixed_layout;
  std::optional<std::vector<TrafficItem>> fixed_traffic;

  SimTime Airtime(std::uint32_t bits) const;
  SimTime DataAirtime() const { return Airtime(packet_size_bits); }
  SimTime ControlAirtime() const { return Airtime(control_size_bits); }
  SimTime Tf() const { return tf_ticks.value_or(3 * (ControlAirtime() + DataAirtime())); }
  SimTime DsrDiscoveryTimeout() const { return 10 * Tf(); }
  std::uint32_t EffectiveSourceCount() const { return std::min(source_count, node_count); }

  // Throws ConfigInvalid naming the offending key.
  void Validate() const;
};

// Random waypoint step period.
inline constexpr SimTime kMobilityStepTicks = 100;
// DSR_RREQ rebroadcast jitter window, in control-frame airtimes.
inline constexpr SimTime kDsrJitterSlots = 10;

}  // namespace xlradr
