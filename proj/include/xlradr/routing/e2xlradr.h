#pragma once

#include <deque>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "xlradr/engine/network.h"
#include "xlradr/routing/retry_policy.h"

namespace xlradr {

struct NextHop {
  enum class Kind { kDirect, kRelay, kNoProgress };
  Kind kind = Kind::kNoProgress;
  NodeId node{};
  // Relays tied at the maximum distance, best first (energy desc, id asc).
  // Always contains `node` for kRelay.
  std::vector<NodeId> tied;
};

// Farthest-progress next hop. Direct when dst is a neighbor; otherwise the
// farthest neighbor strictly closer to dst, ties at 1e-9 m broken by the
// larger last-known energy and then the lower id.
NextHop SelectNextHop(const NodeState& self, NodeId dst, const Position& dst_pos, const NeighborView& view);

struct RouteCacheEntry {
  NodeId destination{};
  Path path;
  SimTime established_at = 0;
};

class E2xlradrProtocol final : public RoutingProtocol {
 public:
  explicit E2xlradrProtocol(Network& net);

  void OnGenerate(const PayloadRecord& payload) override;
  bool HasWork(NodeId node) const override;
  void OnReady(NodeId node) override;
  void OnHopDelivered(NodeId node, NodeId peer) override;
  void OnHopAborted(NodeId node, NodeId peer) override;
  void OnHopDropped(NodeId node, NodeId peer) override;
  void OnPayloadArrived(NodeId node, const Frame& data) override;
  void OnControl(NodeId node, const Frame& frame) override;
  void OnCustodyFrameLost(const Frame& frame) override;
  void OnTimer(NodeId, std::uint64_t) override {}
  void OnDeath(NodeId node) override;

  const RouteCacheEntry* CachedRoute(NodeId source, NodeId dst) const;

 private:
  struct Custody {
    PayloadId id = 0;
    NodeId src{};
    NodeId dst{};
    std::uint32_t epoch = 0;
    std::vector<NodeId> traversed;
    std::vector<NodeId> planned;
    std::optional<std::uint32_t> initial_m;
    std::vector<NodeId> excluded;
    std::uint32_t recover_count = 0;
  };

  struct NodeAgent {
    std::deque<Custody> queue;
    std::optional<Custody> in_flight;
    std::vector<NodeId> in_flight_candidates;
    std::map<NodeId, RouteCacheEntry> cache;
    std::set<std::pair<PayloadId, std::uint32_t>> seen;
    bool low_energy_reported = false;
  };

  std::optional<NodeId> PlannedNext(NodeId node, const Custody& c, const NeighborView& view) const;
  RetryContext ContextFor(NodeId node, const Custody& c, NodeId receiver) const;
  bool CheckReestablishTriggers(NodeId node, Custody& c);
  void Maintain(NodeId node, Custody c);
  void Escalate(NodeId at, Custody c);
  void Invalidate(NodeId source, NodeId dst);

  Network& m_net;
  std::vector<NodeAgent> m_agents;
};

}  // namespace xlradr
