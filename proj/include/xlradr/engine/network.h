#pragma once

#include <optional>
#include <vector>

#include "xlradr/core/types.h"
#include "xlradr/engine/rng.h"
#include "xlradr/engine/scenario.h"
#include "xlradr/engine/trace.h"
#include "xlradr/mac/handshake.h"

namespace xlradr {

struct NeighborInfo {
  NodeId id{};
  Position pos;
  double last_known_energy_j = 0.0;
};

using NeighborView = std::vector<NeighborInfo>;

// Engine services available to a routing strategy.
class Network {
 public:
  virtual ~Network() = default;

  virtual SimTime Now() const = 0;
  virtual const Scenario& scenario() const = 0;
  virtual const NodeState& node(NodeId id) const = 0;
  virtual std::size_t NodeCount() const = 0;

  // Alive nodes within mutual range of `id`.
  virtual NeighborView ViewOf(NodeId id) const = 0;
  virtual bool MutuallyInRange(NodeId a, NodeId b) const = 0;

  virtual void StartHop(NodeId node, HopRequest request) = 0;
  virtual void SendControl(NodeId node, Frame frame, SimTime delay = 0) = 0;
  virtual void ArmProtocolTimer(NodeId node, SimTime at, std::uint64_t cookie) = 0;
  virtual void RequestKick(NodeId node) = 0;
  virtual void ResetInterference(NodeId node) = 0;

  // Payload custody accounting. A payload is lost when its last copy is
  // released before any copy reached the destination.
  virtual void Acquire(PayloadId id) = 0;
  virtual void Release(PayloadId id, std::optional<LossReason> reason = std::nullopt) = 0;
  virtual void MarkDelivered(PayloadId id, const std::vector<NodeId>& path) = 0;
  virtual const PayloadRecord& payload(PayloadId id) const = 0;

  virtual void Note(TraceKind kind, NodeId actor, std::optional<NodeId> peer, std::string_view outcome) = 0;
  virtual RngStream& TieBreakRng() = 0;
};

// One routing protocol instance drives every node of a run.
class RoutingProtocol {
 public:
  virtual ~RoutingProtocol() = default;

  virtual void OnGenerate(const PayloadRecord& payload) = 0;
  virtual bool HasWork(NodeId node) const = 0;
  // MAC idle, radio free, node awake: start the next hop if any.
  virtual void OnReady(NodeId node) = 0;

  virtual void OnHopDelivered(NodeId node, NodeId peer) = 0;
  virtual void OnHopAborted(NodeId node, NodeId peer) = 0;
  virtual void OnHopDropped(NodeId node, NodeId peer) = 0;
  virtual void OnPayloadArrived(NodeId node, const Frame& data) = 0;

  virtual void OnControl(NodeId node, const Frame& frame) = 0;
  virtual void OnCustodyFrameLost(const Frame& frame) = 0;
  virtual void OnTimer(NodeId node, std::uint64_t cookie) = 0;
  virtual void OnDeath(NodeId node) = 0;
};

}  // namespace xlradr
