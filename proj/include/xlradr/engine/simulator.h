#pragma once

#include <deque>
#include <map>
#include <memory>
#include <queue>
#include <set>
#include <vector>

#include "xlradr/engine/network.h"
#include "xlradr/engine/rng.h"
#include "xlradr/engine/scenario.h"
#include "xlradr/engine/trace.h"
#include "xlradr/mac/handshake.h"
#include "xlradr/phy/radio.h"

namespace xlradr {

// Uniform placement over the area, uniform range in [range_min, range_max],
// full batteries. A non-empty fixed layout replaces the random draw.
std::vector<NodeState> PlaceNodes(const Scenario& scenario, const RngStream& rng);

// Per-source packet schedule: inter-arrival 1/rate jittered by +-10%,
// destinations uniform over the non-source nodes. Sorted by (tick, source).
std::vector<TrafficItem> GenerateTraffic(const Scenario& scenario, const RngStream& rng);

struct MobilityState {
  Position waypoint;
  SimTime pause_until = 0;
  bool paused = false;
};

// Advance every node one random-waypoint step of `step_ticks`.
void StepMobility(const Scenario& scenario, std::vector<NodeState>& nodes, std::vector<MobilityState>& state,
                  std::vector<RngStream>& streams, SimTime now, SimTime step_ticks);

enum class EventKind { kFrameArrival, kTxReady, kMacTimer, kProtocolTimer, kGeneration, kMobilityStep, kWake };

struct Event {
  SimTime at = 0;
  std::uint64_t seq = 0;
  EventKind kind = EventKind::kWake;
  NodeId node{};
  std::uint64_t arg = 0;

  bool operator>(const Event& o) const { return at != o.at ? at > o.at : seq > o.seq; }
};

struct RunOptions {
  bool record_rows = true;
};

class Simulator final : public Network {
 public:
  explicit Simulator(Scenario scenario, RunOptions options = {});
  ~Simulator() override;

  // Runs to sim_time_ticks or until every source is dead.
  TraceLog Run();

  // Network
  SimTime Now() const override { return m_now; }
  const Scenario& scenario() const override { return m_scenario; }
  const NodeState& node(NodeId id) const override { return m_nodes[Index(id)]; }
  std::size_t NodeCount() const override { return m_nodes.size(); }
  NeighborView ViewOf(NodeId id) const override;
  bool MutuallyInRange(NodeId a, NodeId b) const override;
  void StartHop(NodeId node, HopRequest request) override;
  void SendControl(NodeId node, Frame frame, SimTime delay = 0) override;
  void ArmProtocolTimer(NodeId node, SimTime at, std::uint64_t cookie) override;
  void RequestKick(NodeId node) override { m_kicks.insert(Index(node)); }
  void ResetInterference(NodeId node) override { m_nodes[Index(node)].interference_count = 0; }
  void Acquire(PayloadId id) override;
  void Release(PayloadId id, std::optional<LossReason> reason = std::nullopt) override;
  void MarkDelivered(PayloadId id, const std::vector<NodeId>& path) override;
  const PayloadRecord& payload(PayloadId id) const override { return m_trace.payloads[id]; }
  void Note(TraceKind kind, NodeId actor, std::optional<NodeId> peer, std::string_view outcome) override;
  RngStream& TieBreakRng() override { return m_tiebreak; }

  const HandshakeMachine& mac(NodeId id) const { return m_macs[Index(id)]; }
  const RoutingProtocol& protocol() const { return *m_protocol; }
  const std::vector<TrafficItem>& traffic() const { return m_traffic; }

 private:
  struct Radio {
    SimTime busy_until = 0;
    SimTime sleep_until = 0;
    std::deque<Frame> queue;
    std::vector<Interval> sleeps;
    int delayed = 0;  // own frames parked in m_delayed
  };

  void Schedule(SimTime at, EventKind kind, NodeId node, std::uint64_t arg = 0);
  void Dispatch(const Event& ev);
  void Transmit(NodeId node, Frame frame);
  void TryStartTx(NodeId node);
  void OnFrameArrival(std::uint64_t frame_seq);
  void Deliver(NodeId rx, const Frame& frame);
  void Apply(NodeId node, const MacOutput& out, const Frame* about = nullptr);
  void ScheduleNeighborSleep(NodeId tx, NodeId rx);
  DebitResult Charge(NodeId node, double joules, std::size_t category);
  void Kill(NodeId node);
  void ProcessKicks();
  bool RadioFree(NodeId node) const;
  bool Asleep(NodeId node) const { return m_now < m_radio[Index(node)].sleep_until; }
  void PruneHistory();
  void Row(TraceKind kind, NodeId actor, std::optional<NodeId> peer, std::optional<FrameKind> frame,
           std::string_view outcome, double energy = 0.0);

  Scenario m_scenario;
  RunOptions m_options;
  SimTime m_now = 0;
  std::uint64_t m_event_seq = 0;
  std::uint64_t m_current_event_seq = 0;
  SequenceCounter m_frame_seq;
  bool m_stop = false;

  std::vector<NodeState> m_nodes;
  std::vector<HandshakeMachine> m_macs;
  std::vector<Radio> m_radio;
  std::vector<Transmission> m_air;  // recent transmissions, start order
  std::map<std::uint64_t, Frame> m_delayed;
  std::priority_queue<Event, std::vector<Event>, std::greater<>> m_events;
  std::set<std::size_t> m_kicks;

  RngStream m_root;
  RngStream m_tiebreak;
  std::vector<RngStream> m_mobility_rng;
  std::vector<MobilityState> m_mobility;
  std::vector<TrafficItem> m_traffic;

  std::vector<int> m_copies;
  std::vector<std::optional<LossReason>> m_last_reason;
  std::uint64_t m_delayed_key = 0;
  SimTime m_max_airtime = 1;
  TraceLog m_trace;
  std::unique_ptr<RoutingProtocol> m_protocol;
};

TraceLog RunScenario(const Scenario& scenario, RunOptions options = {});

}  // namespace xlradr
