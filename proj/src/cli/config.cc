#include "xlradr/cli/config.h"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace xlradr {

namespace {

std::string_view Trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <typename T>
T ParseNumber(std::string_view key, std::string_view text) {
  T value{};
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end || text.empty()) {
    throw ConfigInvalid(std::string(key), "not a number: '" + std::string(text) + "'");
  }
  return value;
}

std::string FormatDouble(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

}  // namespace

const std::vector<std::string_view>& ConfigKeys() {
  static const std::vector<std::string_view> keys = {
      "node_count", "area_w_m", "area_h_m", "source_count", "range_min_m", "range_max_m",
      "initial_energy_j", "bitrate_bps", "tick_seconds", "packet_size_bits", "control_size_bits",
      "traffic_rate_pps", "sim_time_ticks", "protocol", "kmax.mode", "kmax.floor", "tf_ticks",
      "max_rrequest_retries", "dsr_retry_limit", "mobility.kind", "mobility.speed_mps", "mobility.pause_ticks",
      "interference_threshold", "energy_threshold_fraction", "recover_depth", "e_elec_j_per_bit",
      "eps_amp_j_per_bit_m2", "seed",
  };
  return keys;
}

void ApplyKey(Scenario& s, std::string_view key, std::string_view raw) {
  const std::string_view v = Trim(raw);
  const std::string k(key);
  if (key == "node_count") s.node_count = ParseNumber<std::uint32_t>(key, v);
  else if (key == "area_w_m") s.area_w_m = ParseNumber<double>(key, v);
  else if (key == "area_h_m") s.area_h_m = ParseNumber<double>(key, v);
  else if (key == "source_count") s.source_count = ParseNumber<std::uint32_t>(key, v);
  else if (key == "range_min_m") s.range_min_m = ParseNumber<double>(key, v);
  else if (key == "range_max_m") s.range_max_m = ParseNumber<double>(key, v);
  else if (key == "initial_energy_j") s.initial_energy_j = ParseNumber<double>(key, v);
  else if (key == "bitrate_bps") s.bitrate_bps = ParseNumber<double>(key, v);
  else if (key == "tick_seconds") s.tick_seconds = ParseNumber<double>(key, v);
  else if (key == "packet_size_bits") s.packet_size_bits = ParseNumber<std::uint32_t>(key, v);
  else if (key == "control_size_bits") s.control_size_bits = ParseNumber<std::uint32_t>(key, v);
  else if (key == "traffic_rate_pps") s.traffic_rate_pps = ParseNumber<double>(key, v);
  else if (key == "sim_time_ticks") s.sim_time_ticks = ParseNumber<SimTime>(key, v);
  else if (key == "protocol") {
    if (v == "e2xlradr") s.protocol = Protocol::kE2xlradr;
    else if (v == "dsr") s.protocol = Protocol::kDsr;
    else throw ConfigInvalid(k, "expected e2xlradr or dsr");
  } else if (key == "kmax.mode") {
    if (v == "formula") s.kmax.mode = KmaxMode::kFormula;
    else if (v == "progressive") s.kmax.mode = KmaxMode::kProgressive;
    else throw ConfigInvalid(k, "expected formula or progressive");
  } else if (key == "kmax.floor") s.kmax.floor = ParseNumber<int>(key, v);
  else if (key == "tf_ticks") {
    if (v == "auto") s.tf_ticks.reset();
    else s.tf_ticks = ParseNumber<SimTime>(key, v);
  } else if (key == "max_rrequest_retries") s.max_rrequest_retries = ParseNumber<int>(key, v);
  else if (key == "dsr_retry_limit") s.dsr_retry_limit = ParseNumber<int>(key, v);
  else if (key == "mobility.kind") {
    if (v == "static") s.mobility = MobilityKind::kStatic;
    else if (v == "random_waypoint") s.mobility = MobilityKind::kRandomWaypoint;
    else throw ConfigInvalid(k, "expected static or random_waypoint");
  } else if (key == "mobility.speed_mps") s.speed_mps = ParseNumber<double>(key, v);
  else if (key == "mobility.pause_ticks") s.pause_ticks = ParseNumber<SimTime>(key, v);
  else if (key == "interference_threshold") s.interference_threshold = ParseNumber<int>(key, v);
  else if (key == "energy_threshold_fraction") s.energy_threshold_fraction = ParseNumber<double>(key, v);
  else if (key == "recover_depth") s.recover_depth = ParseNumber<int>(key, v);
  else if (key == "e_elec_j_per_bit") s.energy.e_elec_j_per_bit = ParseNumber<double>(key, v);
  else if (key == "eps_amp_j_per_bit_m2") s.energy.eps_amp_j_per_bit_m2 = ParseNumber<double>(key, v);
  else if (key == "seed") s.seed = ParseNumber<std::uint64_t>(key, v);
  else throw ConfigInvalid(k, "unknown key");
}

Scenario ParseConfig(std::string_view text) {
  Scenario s;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = Trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigInvalid(std::string(line), "line " + std::to_string(line_no) + " is not 'key = value'");
    }
    ApplyKey(s, Trim(line.substr(0, eq)), line.substr(eq + 1));
  }
  return s;
}

Scenario LoadConfig(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigInvalid("--config", "cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return ParseConfig(buf.str());
}

namespace {

std::string ValueOf(const Scenario& s, std::string_view key) {
  if (key == "node_count") return std::to_string(s.node_count);
  if (key == "area_w_m") return FormatDouble(s.area_w_m);
  if (key == "area_h_m") return FormatDouble(s.area_h_m);
  if (key == "source_count") return std::to_string(s.source_count);
  if (key == "range_min_m") return FormatDouble(s.range_min_m);
  if (key == "range_max_m") return FormatDouble(s.range_max_m);
  if (key == "initial_energy_j") return FormatDouble(s.initial_energy_j);
  if (key == "bitrate_bps") return FormatDouble(s.bitrate_bps);
  if (key == "tick_seconds") return FormatDouble(s.tick_seconds);
  if (key == "packet_size_bits") return std::to_string(s.packet_size_bits);
  if (key == "control_size_bits") return std::to_string(s.control_size_bits);
  if (key == "traffic_rate_pps") return FormatDouble(s.traffic_rate_pps);
  if (key == "sim_time_ticks") return std::to_string(s.sim_time_ticks);
  if (key == "protocol") return std::string(ToString(s.protocol));
  if (key == "kmax.mode") return s.kmax.mode == KmaxMode::kFormula ? "formula" : "progressive";
  if (key == "kmax.floor") return std::to_string(s.kmax.floor);
  if (key == "tf_ticks") return s.tf_ticks ? std::to_string(*s.tf_ticks) : "auto";
  if (key == "max_rrequest_retries") return std::to_string(s.max_rrequest_retries);
  if (key == "dsr_retry_limit") return std::to_string(s.dsr_retry_limit);
  if (key == "mobility.kind") return std::string(ToString(s.mobility));
  if (key == "mobility.speed_mps") return FormatDouble(s.speed_mps);
  if (key == "mobility.pause_ticks") return std::to_string(s.pause_ticks);
  if (key == "interference_threshold") return std::to_string(s.interference_threshold);
  if (key == "energy_threshold_fraction") return FormatDouble(s.energy_threshold_fraction);
  if (key == "recover_depth") return std::to_string(s.recover_depth);
  if (key == "e_elec_j_per_bit") return FormatDouble(s.energy.e_elec_j_per_bit);
  if (key == "eps_amp_j_per_bit_m2") return FormatDouble(s.energy.eps_amp_j_per_bit_m2);
  if (key == "seed") return std::to_string(s.seed);
  throw ConfigInvalid(std::string(key), "unknown key");
}

std::string Serialize(const Scenario& s, bool with_seed) {
  std::string out;
  for (std::string_view key : ConfigKeys()) {
    if (!with_seed && key == "seed") continue;
    out.append(key).append(" = ").append(ValueOf(s, key)).push_back('\n');
  }
  return out;
}

}  // namespace

std::string SerializeConfig(const Scenario& scenario) { return Serialize(scenario, true); }

std::string ScenarioHash(const Scenario& scenario) {
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (unsigned char c : Serialize(scenario, false)) {
    h ^= c;
    h *= 0x100000001B3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace xlradr
