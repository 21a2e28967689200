#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace xlradr {

// Node identifiers are dense indices into the scenario's node table.
enum class NodeId : std::uint32_t {};

inline constexpr NodeId kBroadcast{0xFFFFFFFFu};

constexpr std::size_t Index(NodeId id) { return static_cast<std::size_t>(id); }
constexpr NodeId MakeNodeId(std::size_t index) { return NodeId{static_cast<std::uint32_t>(index)}; }

using PayloadId = std::uint64_t;

// Simulation time in ticks. The scenario's tick_seconds converts to wall units.
using SimTime = std::int64_t;

struct Position {
  double x = 0.0;
  double y = 0.0;
  bool operator==(const Position&) const = default;
};

double Distance(const Position& a, const Position& b);

// Distance snapped to a 1e-9 m grid so that equal-distance ties compare exactly.
double RoundedDistance(const Position& a, const Position& b);

enum class RadioMode { kIdle, kTransmitting, kReceiving, kSleeping };

struct NodeState {
  NodeId id{};
  Position pos;
  double energy_j = 0.0;
  RadioMode radio = RadioMode::kIdle;
  double range_m = 0.0;
  int interference_count = 0;
  bool alive = true;
};

enum class FrameKind : std::uint8_t {
  kRRequest,
  kAck1,
  kData,
  kAck2,
  kRouteRecover,
  kDsrRreq,
  kDsrRrep,
  kDsrRerr,
};

inline constexpr std::size_t kFrameKindCount = 8;

std::string_view ToString(FrameKind kind);

struct Frame {
  FrameKind kind = FrameKind::kData;
  NodeId src{};
  NodeId dst{};
  NodeId hop_tx{};
  NodeId hop_rx{};
  std::uint32_t size_bits = 0;
  PayloadId payload_id = 0;
  std::optional<double> energy_report_j;
  std::uint64_t seq = 0;

  // RREQUEST multicast set when several relays tie at the maximum distance.
  std::vector<NodeId> candidates;
  // Traversed path (E2XLRADR), source route or accumulated discovery route (DSR).
  std::vector<NodeId> route;
  // Cached end-to-end route the payload is following, empty when unknown.
  std::vector<NodeId> planned;
  std::uint32_t epoch = 0;
  std::uint32_t initial_m = 0;
  std::uint32_t request_id = 0;
  std::uint32_t recover_count = 0;
  // ROUTE_RECOVER: neighbors the upstream node must not pick again.
  std::vector<NodeId> excluded;
  // Frames that move payload custody between nodes (route recovery, DSR errors).
  bool carries_custody = false;
  bool retransmission = false;
  // DSR_RERR: the broken link (hop_tx of the failed hop, its unreachable next hop).
  NodeId broken_from{};
  NodeId broken_to{};
};

struct Path {
  std::vector<NodeId> nodes;

  std::size_t HopCount() const { return nodes.empty() ? 0 : nodes.size() - 1; }
  bool Contains(NodeId id) const;
  std::optional<std::size_t> IndexOf(NodeId id) const;
  bool operator==(const Path&) const = default;
};

class NotOnPath : public std::out_of_range {
 public:
  explicit NotOnPath(NodeId id);
  NodeId node() const { return m_node; }

 private:
  NodeId m_node;
};

// |index(b) - index(a)| on the path. Throws NotOnPath if either is absent.
std::size_t HopsBetween(const Path& path, NodeId a, NodeId b);

// Issues strictly increasing sequence numbers within one run.
class SequenceCounter {
 public:
  std::uint64_t Next() { return ++m_last; }
  std::uint64_t Last() const { return m_last; }

 private:
  std::uint64_t m_last = 0;
};

}  // namespace xlradr
