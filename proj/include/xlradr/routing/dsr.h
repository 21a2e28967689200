#pragma once

#include <deque>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "xlradr/engine/network.h"

namespace xlradr {

struct DsrRoute {
  Path path;
  SimTime discovered_at = 0;
};

// Simplified Dynamic Source Routing: flooded discovery with duplicate
// suppression, reverse-route replies, source-routed DATA/ACK2 with a fixed
// per-hop retry limit, RERR back to the source and one rediscovery per payload.
class DsrProtocol final : public RoutingProtocol {
 public:
  explicit DsrProtocol(Network& net);

  void OnGenerate(const PayloadRecord& payload) override;
  bool HasWork(NodeId node) const override;
  void OnReady(NodeId node) override;
  void OnHopDelivered(NodeId node, NodeId peer) override;
  void OnHopAborted(NodeId node, NodeId peer) override;
  void OnHopDropped(NodeId node, NodeId peer) override;
  void OnPayloadArrived(NodeId node, const Frame& data) override;
  void OnControl(NodeId node, const Frame& frame) override;
  void OnCustodyFrameLost(const Frame& frame) override;
  void OnTimer(NodeId node, std::uint64_t cookie) override;
  void OnDeath(NodeId node) override;

  const std::vector<DsrRoute>* Routes(NodeId source, NodeId dst) const;
  // RREQ transmissions per node, for flooding-cost checks.
  std::uint64_t RreqSent(NodeId node) const { return m_agents[Index(node)].rreq_sent; }

 private:
  struct Job {
    PayloadId id = 0;
    NodeId src{};
    NodeId dst{};
    std::vector<NodeId> route;
    std::uint32_t epoch = 0;  // 1 once the payload has used its rediscovery
  };

  struct Discovery {
    std::uint32_t request_id = 0;
    std::vector<Job> waiting;
  };

  struct NodeAgent {
    std::deque<Job> queue;
    std::optional<Job> in_flight;
    std::map<NodeId, std::vector<DsrRoute>> cache;
    std::map<NodeId, Discovery> pending;
    std::set<std::pair<NodeId, std::uint32_t>> seen_rreq;
    std::set<std::pair<PayloadId, std::uint32_t>> seen_data;
    std::uint32_t next_request_id = 0;
    std::uint64_t rreq_sent = 0;
  };

  void Route(NodeId source, Job job);
  void StartDiscovery(NodeId source, NodeId dst);
  void PurgeLink(NodeId owner, NodeId a, NodeId b);
  void HandleBrokenRoute(NodeId source, Job job);

  Network& m_net;
  std::vector<NodeAgent> m_agents;
};

}  // namespace xlradr
