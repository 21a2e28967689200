#include "xlradr/engine/simulator.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "xlradr/routing/dsr.h"
#include "xlradr/routing/e2xlradr.h"

namespace xlradr {

std::vector<NodeState> PlaceNodes(const Scenario& scenario, const RngStream& rng) {
  std::vector<NodeState> nodes(scenario.node_count);
  RngStream placement = rng.Substream("placement");
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    NodeState& n = nodes[i];
    n.id = MakeNodeId(i);
    n.energy_j = scenario.initial_energy_j;
    if (i < scenario.fixed_layout.size()) {
      n.pos = scenario.fixed_layout[i].pos;
      n.range_m = scenario.fixed_layout[i].range_m;
      n.energy_j = scenario.fixed_layout[i].energy_j.value_or(scenario.initial_energy_j);
      continue;
    }
    n.pos.x = placement.Uniform() * scenario.area_w_m;
    n.pos.y = placement.Uniform() * scenario.area_h_m;
    n.range_m = placement.Uniform(scenario.range_min_m, scenario.range_max_m);
  }
  return nodes;
}

std::vector<TrafficItem> GenerateTraffic(const Scenario& scenario, const RngStream& rng) {
  if (scenario.fixed_traffic) return *scenario.fixed_traffic;
  std::vector<TrafficItem> items;
  const std::uint32_t sources = scenario.EffectiveSourceCount();
  const std::uint32_t sinks = scenario.node_count - sources;
  if (sinks == 0 || scenario.traffic_rate_pps <= 0.0) return items;
  const double base = 1.0 / (scenario.traffic_rate_pps * scenario.tick_seconds);
  for (std::uint32_t s = 0; s < sources; ++s) {
    RngStream stream = rng.Substream("traffic", s);
    double t = base * stream.Uniform();
    while (true) {
      const auto tick = static_cast<SimTime>(std::floor(t));
      if (tick >= scenario.sim_time_ticks) break;
      const auto dst = static_cast<std::size_t>(sources + stream.Below(sinks));
      items.push_back({tick, MakeNodeId(s), MakeNodeId(dst)});
      t += base * (1.0 + stream.Uniform(-0.1, 0.1));
    }
  }
  std::sort(items.begin(), items.end(), [](const TrafficItem& a, const TrafficItem& b) {
    return a.at != b.at ? a.at < b.at : Index(a.src) < Index(b.src);
  });
  return items;
}

namespace {

Position RandomPoint(const Scenario& scenario, RngStream& rng) {
  Position p;
  p.x = rng.Uniform() * scenario.area_w_m;
  p.y = rng.Uniform() * scenario.area_h_m;
  return p;
}

}  // namespace

void StepMobility(const Scenario& scenario, std::vector<NodeState>& nodes, std::vector<MobilityState>& state,
                  std::vector<RngStream>& streams, SimTime now, SimTime step_ticks) {
  const double stride = scenario.speed_mps * static_cast<double>(step_ticks) * scenario.tick_seconds;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    MobilityState& st = state[i];
    if (st.paused) {
      if (now < st.pause_until) continue;
      st.paused = false;
      st.waypoint = RandomPoint(scenario, streams[i]);
    }
    Position& p = nodes[i].pos;
    const double d = Distance(p, st.waypoint);
    if (d <= stride) {
      p = st.waypoint;
      st.paused = true;
      st.pause_until = now + scenario.pause_ticks;
      continue;
    }
    p.x += (st.waypoint.x - p.x) * stride / d;
    p.y += (st.waypoint.y - p.y) * stride / d;
    p.x = std::clamp(p.x, 0.0, scenario.area_w_m);
    p.y = std::clamp(p.y, 0.0, scenario.area_h_m);
  }
}

Simulator::Simulator(Scenario scenario, RunOptions options)
    : m_scenario(std::move(scenario)),
      m_options(options),
      m_root(m_scenario.seed),
      m_tiebreak(m_root.Substream("tiebreak")) {
  m_scenario.Validate();
  m_nodes = PlaceNodes(m_scenario, m_root);
  const std::size_t n = m_nodes.size();

  MacConfig mac;
  mac.tf = m_scenario.Tf();
  mac.max_rrequest_retries = m_scenario.max_rrequest_retries;
  mac.control_airtime = m_scenario.ControlAirtime();
  mac.control_size_bits = m_scenario.control_size_bits;
  for (std::size_t i = 0; i < n; ++i) m_macs.emplace_back(MakeNodeId(i), mac);
  m_radio.resize(n);
  m_max_airtime = std::max(m_scenario.DataAirtime(), m_scenario.ControlAirtime());

  m_traffic = GenerateTraffic(m_scenario, m_root);
  if (m_scenario.mobility == MobilityKind::kRandomWaypoint) {
    for (std::size_t i = 0; i < n; ++i) {
      m_mobility_rng.push_back(m_root.Substream("mobility", i));
      m_mobility.push_back({RandomPoint(m_scenario, m_mobility_rng.back()), 0, false});
    }
  }

  m_trace.node_count = static_cast<std::uint32_t>(n);
  m_trace.tick_seconds = m_scenario.tick_seconds;
  m_trace.rows_enabled = m_options.record_rows;
  m_trace.ledger.assign(n, CategoryLedger{});
  for (const NodeState& node : m_nodes) m_trace.initial_energy_j.push_back(node.energy_j);

  if (m_scenario.protocol == Protocol::kDsr) {
    m_protocol = std::make_unique<DsrProtocol>(*this);
  } else {
    m_protocol = std::make_unique<E2xlradrProtocol>(*this);
  }
}

Simulator::~Simulator() = default;

void Simulator::Schedule(SimTime at, EventKind kind, NodeId node, std::uint64_t arg) {
  m_events.push(Event{at, ++m_event_seq, kind, node, arg});
}

TraceLog Simulator::Run() {
  for (std::size_t i = 0; i < m_traffic.size(); ++i) {
    Schedule(m_traffic[i].at, EventKind::kGeneration, m_traffic[i].src, i);
  }
  if (m_scenario.mobility == MobilityKind::kRandomWaypoint) {
    Schedule(kMobilityStepTicks, EventKind::kMobilityStep, NodeId{});
  }

  while (!m_events.empty() && !m_stop) {
    const Event ev = m_events.top();
    if (ev.at > m_scenario.sim_time_ticks) break;
    m_events.pop();
    m_now = ev.at;
    m_current_event_seq = ev.seq;
    Dispatch(ev);
    ProcessKicks();
  }

  m_trace.sim_end = m_scenario.sim_time_ticks;
  for (const NodeState& node : m_nodes) m_trace.residual_energy_j.push_back(node.energy_j);
  return std::move(m_trace);
}

void Simulator::Dispatch(const Event& ev) {
  const std::size_t i = Index(ev.node);
  switch (ev.kind) {
    case EventKind::kFrameArrival:
      OnFrameArrival(ev.arg);
      return;
    case EventKind::kTxReady: {
      auto it = m_delayed.find(ev.arg);
      if (it == m_delayed.end()) return;
      Frame frame = std::move(it->second);
      m_delayed.erase(it);
      --m_radio[i].delayed;
      if (!m_nodes[i].alive) {
        if (frame.carries_custody) Release(frame.payload_id, LossReason::kNodeDeath);
        return;
      }
      Transmit(ev.node, std::move(frame));
      return;
    }
    case EventKind::kMacTimer: {
      if (!m_nodes[i].alive) return;
      const MacOutput out = m_macs[i].OnTimeout(ev.arg, m_now);
      if (out.stale) return;
      Row(TraceKind::kTimeout, ev.node, m_macs[i].state().peer, std::nullopt, "");
      Apply(ev.node, out);
      return;
    }
    case EventKind::kProtocolTimer:
      if (m_nodes[i].alive) m_protocol->OnTimer(ev.node, ev.arg);
      return;
    case EventKind::kGeneration: {
      const TrafficItem& item = m_traffic[ev.arg];
      if (!m_nodes[Index(item.src)].alive) {
        ++m_trace.suppressed_generations;
        return;
      }
      PayloadRecord rec;
      rec.id = m_trace.payloads.size();
      rec.src = item.src;
      rec.dst = item.dst;
      rec.bits = m_scenario.packet_size_bits;
      rec.generated_at = m_now;
      m_trace.payloads.push_back(rec);
      m_copies.push_back(0);
      m_last_reason.emplace_back();
      Row(TraceKind::kGenerate, item.src, item.dst, std::nullopt, "");
      m_protocol->OnGenerate(m_trace.payloads.back());
      return;
    }
    case EventKind::kMobilityStep:
      StepMobility(m_scenario, m_nodes, m_mobility, m_mobility_rng, m_now, kMobilityStepTicks);
      if (m_now + kMobilityStepTicks <= m_scenario.sim_time_ticks) {
        Schedule(m_now + kMobilityStepTicks, EventKind::kMobilityStep, NodeId{});
      }
      return;
    case EventKind::kWake:
      if (!m_nodes[i].alive) return;
      if (!Asleep(ev.node) && m_nodes[i].radio == RadioMode::kSleeping) m_nodes[i].radio = RadioMode::kIdle;
      TryStartTx(ev.node);
      RequestKick(ev.node);
      return;
  }
}

void Simulator::Transmit(NodeId node, Frame frame) {
  m_radio[Index(node)].queue.push_back(std::move(frame));
  TryStartTx(node);
}

void Simulator::TryStartTx(NodeId node) {
  const std::size_t i = Index(node);
  Radio& radio = m_radio[i];
  if (!m_nodes[i].alive || radio.queue.empty()) return;
  if (m_now < radio.busy_until || Asleep(node)) return;  // a wake or arrival event retries

  Frame frame = std::move(radio.queue.front());
  radio.queue.pop_front();
  frame.seq = m_frame_seq.Next();
  frame.hop_tx = node;

  Transmission t;
  t.start = m_now;
  t.end = m_now + m_scenario.Airtime(frame.size_bits);
  t.tx_pos = m_nodes[i].pos;
  t.tx_range_m = m_nodes[i].range_m;
  const double energy = TxEnergy(m_scenario.energy, frame.size_bits, m_nodes[i].range_m);
  t.tx_power_w = energy / (static_cast<double>(t.end - t.start) * m_scenario.tick_seconds);
  t.frame = std::move(frame);

  radio.busy_until = t.end;
  m_nodes[i].radio = RadioMode::kTransmitting;
  const FrameKind kind = t.frame.kind;
  const bool retx = kind == FrameKind::kData && t.frame.retransmission;
  const std::uint64_t seq = t.frame.seq;
  const std::optional<NodeId> peer =
      t.frame.hop_rx == kBroadcast ? std::nullopt : std::optional<NodeId>(t.frame.hop_rx);
  ++m_trace.frames_sent[static_cast<std::size_t>(kind)];
  m_air.push_back(std::move(t));
  Schedule(m_air.back().end, EventKind::kFrameArrival, node, seq);

  const DebitResult debit =
      Charge(node, energy, retx ? kDataRetxCategory : kTxCategoryBase + static_cast<std::size_t>(kind));
  Row(TraceKind::kTx, node, peer, kind, retx ? "retx" : "", debit.debited_j);
  if (debit.died) Kill(node);
}

void Simulator::OnFrameArrival(std::uint64_t frame_seq) {
  auto it = std::find_if(m_air.rbegin(), m_air.rend(), [&](const Transmission& t) { return t.frame.seq == frame_seq; });
  if (it == m_air.rend()) throw std::logic_error("arrival for an unknown transmission");
  const Transmission t = *it;  // handlers below may append to m_air
  const NodeId tx = t.transmitter();
  const std::size_t ti = Index(tx);
  if (m_nodes[ti].alive && m_now >= m_radio[ti].busy_until) {
    m_nodes[ti].radio = Asleep(tx) ? RadioMode::kSleeping : RadioMode::kIdle;
  }

  const std::size_t rx_category = kRxCategoryBase + static_cast<std::size_t>(t.frame.kind);
  bool addressee_got = false;
  for (std::size_t r = 0; r < m_nodes.size(); ++r) {
    if (r == ti || !m_nodes[r].alive) continue;
    NodeState probe = m_nodes[r];
    probe.radio = RadioMode::kIdle;  // half-duplex and sleep come from the interval lists
    const ReceptionOutcome outcome = ResolveFrame(probe, t, m_air, m_radio[r].sleeps);
    if (outcome == ReceptionOutcome::kOutOfRange) continue;
    const NodeId rx = MakeNodeId(r);
    if (outcome == ReceptionOutcome::kRxBusy) {
      Row(TraceKind::kRx, rx, tx, t.frame.kind, ToString(outcome));
      continue;
    }
    double bits = t.frame.size_bits;
    if (outcome == ReceptionOutcome::kCollided) {
      ++m_nodes[r].interference_count;
      const double heard = static_cast<double>(CollisionOverlap(probe, t, m_air)) * m_scenario.bitrate_bps *
                           m_scenario.tick_seconds;
      bits = std::min(bits, heard);
    }
    const DebitResult debit = Charge(rx, RxEnergy(m_scenario.energy, bits), rx_category);
    Row(TraceKind::kRx, rx, tx, t.frame.kind, ToString(outcome), debit.debited_j);
    if (debit.died) {
      Kill(rx);
      continue;
    }
    if (outcome != ReceptionOutcome::kDelivered) continue;
    if (rx == t.frame.hop_rx) addressee_got = true;
    Deliver(rx, t.frame);
  }
  if (t.frame.carries_custody && !addressee_got) m_protocol->OnCustodyFrameLost(t.frame);

  PruneHistory();
  TryStartTx(tx);
  RequestKick(tx);
}

void Simulator::Deliver(NodeId rx, const Frame& frame) {
  HandshakeMachine& mac = m_macs[Index(rx)];
  switch (frame.kind) {
    case FrameKind::kRRequest:
      Apply(rx, mac.OnRRequest(frame, m_nodes[Index(rx)].energy_j, RadioFree(rx), m_now));
      return;
    case FrameKind::kAck1:
      if (frame.hop_rx == rx) Apply(rx, mac.OnAck1(frame, m_now));
      return;
    case FrameKind::kData:
      if (frame.hop_rx == rx) Apply(rx, mac.OnData(frame, m_now), &frame);
      return;
    case FrameKind::kAck2:
      if (frame.hop_rx == rx) Apply(rx, mac.OnAck2(frame, m_now));
      return;
    default:
      if (frame.hop_rx == rx || frame.hop_rx == kBroadcast) m_protocol->OnControl(rx, frame);
      return;
  }
}

void Simulator::Apply(NodeId node, const MacOutput& out, const Frame* about) {
  const std::size_t i = Index(node);
  for (const OutFrame& f : out.frames) {
    if (f.delay == 0) {
      Transmit(node, f.frame);
    } else {
      m_delayed.emplace(++m_delayed_key, f.frame);
      ++m_radio[i].delayed;
      Schedule(m_now + f.delay, EventKind::kTxReady, node, m_delayed_key);
    }
  }
  if (out.arm_timer) Schedule(*out.arm_timer, EventKind::kMacTimer, node, m_macs[i].state().timer_token);
  m_trace.retransmissions += out.retransmissions;
  const HandshakeState& st = m_macs[i].state();
  if (st.Receiving(m_now)) Schedule(st.await_data_until, EventKind::kWake, node);
  if (out.data_phase_started && m_scenario.protocol == Protocol::kE2xlradr) ScheduleNeighborSleep(node, out.peer);

  switch (out.signal) {
    case MacSignal::kNone: break;
    case MacSignal::kHopDelivered: m_protocol->OnHopDelivered(node, out.peer); break;
    case MacSignal::kHopAborted: m_protocol->OnHopAborted(node, out.peer); break;
    case MacSignal::kHopDropped: m_protocol->OnHopDropped(node, out.peer); break;
    case MacSignal::kPayloadArrived:
      if (about) m_protocol->OnPayloadArrived(node, *about);
      break;
  }
  RequestKick(node);
}

void Simulator::ScheduleNeighborSleep(NodeId tx, NodeId rx) {
  const SimTime until = m_now + m_scenario.DataAirtime() + m_scenario.ControlAirtime();
  const NodeState& a = m_nodes[Index(tx)];
  const NodeState& b = m_nodes[Index(rx)];
  for (std::size_t k = 0; k < m_nodes.size(); ++k) {
    const NodeId id = MakeNodeId(k);
    NodeState& n = m_nodes[k];
    if (id == tx || id == rx || !n.alive) continue;
    if (!InRange(a, n) && !InRange(b, n)) continue;
    if (m_macs[k].state().phase != HandshakePhase::kIdle || m_macs[k].state().Receiving(m_now)) continue;
    if (!RadioFree(id) || m_protocol->HasWork(id)) continue;
    Radio& radio = m_radio[k];
    std::erase_if(radio.sleeps, [&](const Interval& s) { return s.end + m_max_airtime < m_now; });
    radio.sleeps.push_back({m_now, until});
    radio.sleep_until = std::max(radio.sleep_until, until);
    n.radio = RadioMode::kSleeping;
    Schedule(until, EventKind::kWake, id);
    Row(TraceKind::kSleep, id, tx, std::nullopt, "");
  }
}

DebitResult Simulator::Charge(NodeId node, double joules, std::size_t category) {
  const DebitResult debit = Debit(m_nodes[Index(node)], joules);
  m_trace.ledger[Index(node)][category] += debit.debited_j;
  return debit;
}

void Simulator::Kill(NodeId node) {
  const std::size_t i = Index(node);
  m_nodes[i].alive = false;
  m_nodes[i].radio = RadioMode::kIdle;
  m_trace.deaths.push_back({node, m_now});
  Row(TraceKind::kDeath, node, std::nullopt, std::nullopt, "");
  for (const Frame& f : m_radio[i].queue) {
    if (f.carries_custody) Release(f.payload_id, LossReason::kNodeDeath);
  }
  m_radio[i].queue.clear();
  m_macs[i].Reset();
  m_protocol->OnDeath(node);

  const std::uint32_t sources = m_scenario.EffectiveSourceCount();
  if (sources == 0) return;
  for (std::uint32_t s = 0; s < sources; ++s) {
    if (m_nodes[s].alive) return;
  }
  m_stop = true;
  m_trace.ended_all_sources_dead = true;
}

bool Simulator::RadioFree(NodeId node) const {
  const Radio& r = m_radio[Index(node)];
  return m_now >= r.busy_until && r.queue.empty() && r.delayed == 0;
}

void Simulator::ProcessKicks() {
  while (!m_kicks.empty() && !m_stop) {
    const std::size_t i = *m_kicks.begin();
    m_kicks.erase(m_kicks.begin());
    const NodeId id = MakeNodeId(i);
    if (!m_nodes[i].alive || Asleep(id)) continue;
    if (!m_macs[i].CanInitiate(m_now) || !RadioFree(id)) continue;
    if (!m_protocol->HasWork(id)) continue;
    m_protocol->OnReady(id);
  }
  m_kicks.clear();
}

void Simulator::PruneHistory() {
  const SimTime horizon = m_now - m_max_airtime;
  const auto keep = std::find_if(m_air.begin(), m_air.end(), [&](const Transmission& t) { return t.end >= horizon; });
  // Start order means ends are not sorted; only drop a prefix that is fully stale.
  m_air.erase(m_air.begin(), keep);
}

void Simulator::Row(TraceKind kind, NodeId actor, std::optional<NodeId> peer, std::optional<FrameKind> frame,
                    std::string_view outcome, double energy) {
  if (!m_options.record_rows) return;
  m_trace.rows.push_back({m_now, m_current_event_seq, kind, actor, peer, frame, outcome, energy});
}

NeighborView Simulator::ViewOf(NodeId id) const {
  NeighborView view;
  for (const NodeState& n : m_nodes) {
    if (n.id == id || !n.alive) continue;
    if (MutuallyInRange(id, n.id)) view.push_back({n.id, n.pos, n.energy_j});
  }
  return view;
}

bool Simulator::MutuallyInRange(NodeId a, NodeId b) const {
  const NodeState& x = m_nodes[Index(a)];
  const NodeState& y = m_nodes[Index(b)];
  return Distance(x.pos, y.pos) <= std::min(x.range_m, y.range_m);
}

void Simulator::StartHop(NodeId node, HopRequest request) {
  for (NodeId cand : request.candidates) {
    if (!InRange(m_nodes[Index(node)], m_nodes[Index(cand)])) throw NotInRange("next hop outside transmit range");
  }
  Apply(node, m_macs[Index(node)].Initiate(std::move(request), m_now));
}

void Simulator::SendControl(NodeId node, Frame frame, SimTime delay) {
  frame.hop_tx = node;
  if (delay <= 0) {
    Transmit(node, std::move(frame));
    return;
  }
  m_delayed.emplace(++m_delayed_key, std::move(frame));
  ++m_radio[Index(node)].delayed;
  Schedule(m_now + delay, EventKind::kTxReady, node, m_delayed_key);
}

void Simulator::ArmProtocolTimer(NodeId node, SimTime at, std::uint64_t cookie) {
  Schedule(at, EventKind::kProtocolTimer, node, cookie);
}

void Simulator::Acquire(PayloadId id) { ++m_copies.at(id); }

void Simulator::Release(PayloadId id, std::optional<LossReason> reason) {
  int& copies = m_copies.at(id);
  if (copies <= 0) throw std::logic_error("payload released more often than acquired");
  if (reason) m_last_reason[id] = reason;
  if (--copies > 0) return;
  PayloadRecord& rec = m_trace.payloads[id];
  if (rec.delivered_at || rec.lost) return;
  // The last copy may be a duplicate whose twin was already dropped downstream.
  if (!m_last_reason[id]) throw std::logic_error("payload lost without a reason");
  rec.lost = m_last_reason[id];
  Row(TraceKind::kLost, rec.src, rec.dst, std::nullopt, ToString(*rec.lost));
}

void Simulator::MarkDelivered(PayloadId id, const std::vector<NodeId>& path) {
  PayloadRecord& rec = m_trace.payloads[id];
  if (rec.delivered_at || rec.lost) return;
  rec.delivered_at = m_now;
  rec.delivered_path = path;
  Row(TraceKind::kDeliver, rec.dst, rec.src, std::nullopt, "");
}

void Simulator::Note(TraceKind kind, NodeId actor, std::optional<NodeId> peer, std::string_view outcome) {
  Row(kind, actor, peer, std::nullopt, outcome);
}

TraceLog RunScenario(const Scenario& scenario, RunOptions options) {
  Simulator sim(scenario, options);
  return sim.Run();
}

}  // namespace xlradr
