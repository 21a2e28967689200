#include "xlradr/routing/e2xlradr.h"

#include <algorithm>
#include <cmath>

namespace xlradr {

NextHop SelectNextHop(const NodeState& self, NodeId dst, const Position& dst_pos, const NeighborView& view) {
  NextHop hop;
  for (const NeighborInfo& n : view) {
    if (n.id == dst) {
      hop.kind = NextHop::Kind::kDirect;
      hop.node = dst;
      return hop;
    }
  }

  const double own = RoundedDistance(self.pos, dst_pos);
  double best = -1.0;
  std::vector<const NeighborInfo*> tied;
  for (const NeighborInfo& n : view) {
    if (n.id == self.id) continue;
    if (!(RoundedDistance(n.pos, dst_pos) < own)) continue;  // progress constraint
    const double d = RoundedDistance(self.pos, n.pos);
    if (d > best) {
      best = d;
      tied.assign(1, &n);
    } else if (d == best) {
      tied.push_back(&n);
    }
  }
  if (tied.empty()) return hop;

  std::sort(tied.begin(), tied.end(), [](const NeighborInfo* a, const NeighborInfo* b) {
    if (a->last_known_energy_j != b->last_known_energy_j) return a->last_known_energy_j > b->last_known_energy_j;
    return Index(a->id) < Index(b->id);
  });
  hop.kind = NextHop::Kind::kRelay;
  hop.node = tied.front()->id;
  for (const NeighborInfo* n : tied) hop.tied.push_back(n->id);
  return hop;
}

E2xlradrProtocol::E2xlradrProtocol(Network& net) : m_net(net), m_agents(net.NodeCount()) {}

const RouteCacheEntry* E2xlradrProtocol::CachedRoute(NodeId source, NodeId dst) const {
  const auto& cache = m_agents[Index(source)].cache;
  auto it = cache.find(dst);
  return it == cache.end() ? nullptr : &it->second;
}

void E2xlradrProtocol::Invalidate(NodeId source, NodeId dst) { m_agents[Index(source)].cache.erase(dst); }

void E2xlradrProtocol::OnGenerate(const PayloadRecord& payload) {
  Custody c;
  c.id = payload.id;
  c.src = payload.src;
  c.dst = payload.dst;
  c.traversed = {payload.src};
  if (const RouteCacheEntry* entry = CachedRoute(payload.src, payload.dst)) c.planned = entry->path.nodes;
  m_net.Acquire(c.id);
  m_agents[Index(payload.src)].queue.push_back(std::move(c));
  m_net.RequestKick(payload.src);
}

bool E2xlradrProtocol::HasWork(NodeId node) const {
  const NodeAgent& a = m_agents[Index(node)];
  return !a.queue.empty() || a.in_flight.has_value();
}

std::optional<NodeId> E2xlradrProtocol::PlannedNext(NodeId node, const Custody& c, const NeighborView& view) const {
  const std::size_t idx = c.traversed.size() - 1;
  if (c.planned.size() < idx + 2 || c.planned[idx] != node) return std::nullopt;
  if (!std::equal(c.traversed.begin(), c.traversed.end(), c.planned.begin())) return std::nullopt;
  const NodeId next = c.planned[idx + 1];
  auto in_view = std::find_if(view.begin(), view.end(), [&](const NeighborInfo& n) { return n.id == next; });
  if (in_view == view.end()) return std::nullopt;
  if (next != c.dst) {
    const Position& dst_pos = m_net.node(c.dst).pos;
    if (!(RoundedDistance(in_view->pos, dst_pos) < RoundedDistance(m_net.node(node).pos, dst_pos))) {
      return std::nullopt;
    }
  }
  return next;
}

RetryContext E2xlradrProtocol::ContextFor(NodeId node, const Custody& c, NodeId receiver) const {
  const std::size_t idx = c.traversed.size() - 1;
  if (c.planned.size() >= idx + 2 && c.planned[idx] == node && c.planned[idx + 1] == receiver) {
    return RetryContext::FromPath(Path{c.planned}, node);
  }
  // No end-to-end route known yet: estimate the receiver's hops left from
  // its distance to the destination and its radio range.
  std::size_t remaining = 0;
  if (receiver != c.dst) {
    const NodeState& rx = m_net.node(receiver);
    remaining = static_cast<std::size_t>(std::ceil(Distance(rx.pos, m_net.node(c.dst).pos) / rx.range_m));
    remaining = std::max<std::size_t>(remaining, 1);
  }
  RetryContext ctx;
  ctx.transmitter_index = idx;
  ctx.hop_count = idx + 1 + remaining;
  ctx.initial_m = c.initial_m.value_or(static_cast<std::uint32_t>(ctx.hop_count - 1));
  return ctx;
}

bool E2xlradrProtocol::CheckReestablishTriggers(NodeId node, Custody& c) {
  const Scenario& sc = m_net.scenario();
  const NodeState& st = m_net.node(node);
  NodeAgent& a = m_agents[Index(node)];
  std::string_view why;
  if (st.interference_count > sc.interference_threshold) {
    m_net.ResetInterference(node);
    why = "interference";
  } else if (!a.low_energy_reported && st.energy_j < sc.energy_threshold_fraction * sc.initial_energy_j) {
    a.low_energy_reported = true;
    why = "low_energy";
  }
  if (why.empty()) return false;
  Invalidate(c.src, c.dst);
  c.planned.clear();
  m_net.Note(TraceKind::kReestablish, node, c.dst, why);
  return true;
}

void E2xlradrProtocol::OnReady(NodeId node) {
  NodeAgent& a = m_agents[Index(node)];
  if (a.queue.empty() || a.in_flight) return;
  Custody c = std::move(a.queue.front());
  a.queue.pop_front();

  CheckReestablishTriggers(node, c);

  NeighborView view = m_net.ViewOf(node);
  std::erase_if(view, [&](const NeighborInfo& n) {
    return std::find(c.excluded.begin(), c.excluded.end(), n.id) != c.excluded.end();
  });

  NextHop hop;
  if (auto planned = PlannedNext(node, c, view)) {
    hop.kind = *planned == c.dst ? NextHop::Kind::kDirect : NextHop::Kind::kRelay;
    hop.node = *planned;
    hop.tied = {*planned};
  } else {
    c.planned.clear();
    hop = SelectNextHop(m_net.node(node), c.dst, m_net.node(c.dst).pos, view);
  }
  if (hop.kind == NextHop::Kind::kNoProgress) {
    Maintain(node, std::move(c));
    return;
  }

  std::vector<NodeId> candidates = hop.kind == NextHop::Kind::kDirect ? std::vector<NodeId>{c.dst} : hop.tied;
  const Scenario& sc = m_net.scenario();

  HopRequest req;
  req.candidates = candidates;
  for (NodeId cand : candidates) req.kmax.push_back(KmaxForLink(ContextFor(node, c, cand), sc.kmax));
  const RetryContext first = ContextFor(node, c, candidates.front());
  if (!c.initial_m) c.initial_m = static_cast<std::uint32_t>(first.initial_m);

  Frame& d = req.data;
  d.kind = FrameKind::kData;
  d.src = c.src;
  d.dst = c.dst;
  d.hop_tx = node;
  d.size_bits = sc.packet_size_bits;
  d.payload_id = c.id;
  d.route = c.traversed;
  d.planned = c.planned;
  d.epoch = c.epoch;
  d.initial_m = *c.initial_m;
  d.recover_count = c.recover_count;
  d.excluded = c.excluded;

  a.in_flight = std::move(c);
  a.in_flight_candidates = std::move(candidates);
  m_net.StartHop(node, std::move(req));
}

void E2xlradrProtocol::Maintain(NodeId node, Custody c) {
  const Scenario& sc = m_net.scenario();
  if (c.traversed.size() <= 1) {
    Escalate(node, std::move(c));
    return;
  }
  if (static_cast<int>(c.recover_count) + 1 > sc.recover_depth) {
    m_net.Note(TraceKind::kRecover, node, std::nullopt, "RecoveryExhausted");
    Escalate(node, std::move(c));
    return;
  }
  const NodeId upstream = c.traversed[c.traversed.size() - 2];
  Frame f;
  f.kind = FrameKind::kRouteRecover;
  f.src = c.src;
  f.dst = c.dst;
  f.hop_tx = node;
  f.hop_rx = upstream;
  f.size_bits = sc.control_size_bits;
  f.payload_id = c.id;
  f.epoch = c.epoch;
  f.route.assign(c.traversed.begin(), c.traversed.end() - 1);
  f.excluded = c.excluded;
  f.excluded.push_back(node);
  f.recover_count = c.recover_count + 1;
  f.initial_m = c.initial_m.value_or(0);
  f.carries_custody = true;
  m_net.Note(TraceKind::kRecover, node, upstream, "ROUTE_RECOVER");
  m_net.SendControl(node, std::move(f));
}

void E2xlradrProtocol::Escalate(NodeId at, Custody c) {
  m_net.Note(TraceKind::kReestablish, at, c.dst, "escalated");
  if (c.epoch >= 1) {
    m_net.Release(c.id, LossReason::kUnreachable);
    return;
  }
  Invalidate(c.src, c.dst);
  if (!m_net.node(c.src).alive) {
    m_net.Release(c.id, LossReason::kNodeDeath);
    return;
  }
  Custody fresh;
  fresh.id = c.id;
  fresh.src = c.src;
  fresh.dst = c.dst;
  fresh.epoch = c.epoch + 1;
  fresh.traversed = {c.src};
  m_net.Acquire(fresh.id);
  m_net.Release(c.id);
  m_agents[Index(c.src)].queue.push_back(std::move(fresh));
  m_net.RequestKick(c.src);
}

void E2xlradrProtocol::OnHopDelivered(NodeId node, NodeId) {
  NodeAgent& a = m_agents[Index(node)];
  if (!a.in_flight) return;
  const PayloadId id = a.in_flight->id;
  a.in_flight.reset();
  m_net.Release(id);
  m_net.RequestKick(node);
}

void E2xlradrProtocol::OnHopAborted(NodeId node, NodeId peer) {
  NodeAgent& a = m_agents[Index(node)];
  if (!a.in_flight) return;
  Custody c = std::move(*a.in_flight);
  a.in_flight.reset();
  for (NodeId cand : a.in_flight_candidates) c.excluded.push_back(cand);
  ++c.recover_count;
  m_net.Note(TraceKind::kRecover, node, peer, "LocalRepair");
  if (static_cast<int>(c.recover_count) > m_net.scenario().recover_depth) {
    Escalate(node, std::move(c));
  } else {
    a.queue.push_front(std::move(c));
  }
  m_net.RequestKick(node);
}

void E2xlradrProtocol::OnHopDropped(NodeId node, NodeId) {
  NodeAgent& a = m_agents[Index(node)];
  if (!a.in_flight) return;
  Custody c = std::move(*a.in_flight);
  a.in_flight.reset();
  Invalidate(c.src, c.dst);
  m_net.Release(c.id, LossReason::kKmaxDrop);
  m_net.RequestKick(node);
}

void E2xlradrProtocol::OnPayloadArrived(NodeId node, const Frame& data) {
  NodeAgent& a = m_agents[Index(node)];
  if (!a.seen.insert({data.payload_id, data.epoch}).second) return;
  std::vector<NodeId> path = data.route;
  path.push_back(node);
  if (node == data.dst) {
    m_net.MarkDelivered(data.payload_id, path);
    if (!path.empty() && path.front() == data.src && m_net.node(data.src).alive) {
      m_agents[Index(data.src)].cache[data.dst] = RouteCacheEntry{data.dst, Path{path}, m_net.Now()};
    }
    return;
  }
  Custody c;
  c.id = data.payload_id;
  c.src = data.src;
  c.dst = data.dst;
  c.epoch = data.epoch;
  c.traversed = std::move(path);
  c.planned = data.planned;
  c.initial_m = data.initial_m;
  c.excluded = data.excluded;
  c.recover_count = data.recover_count;
  m_net.Acquire(c.id);
  a.queue.push_back(std::move(c));
  m_net.RequestKick(node);
}

void E2xlradrProtocol::OnControl(NodeId node, const Frame& frame) {
  if (frame.kind != FrameKind::kRouteRecover || frame.hop_rx != node) return;
  Custody c;
  c.id = frame.payload_id;
  c.src = frame.src;
  c.dst = frame.dst;
  c.epoch = frame.epoch;
  c.traversed = frame.route;
  c.initial_m = frame.initial_m;
  c.excluded = frame.excluded;
  c.recover_count = frame.recover_count;
  m_net.Acquire(c.id);
  m_net.Release(c.id);
  m_agents[Index(node)].queue.push_front(std::move(c));
  m_net.RequestKick(node);
}

void E2xlradrProtocol::OnCustodyFrameLost(const Frame& frame) {
  if (frame.kind == FrameKind::kRouteRecover) m_net.Release(frame.payload_id, LossReason::kRecoveryExhausted);
}

void E2xlradrProtocol::OnDeath(NodeId node) {
  NodeAgent& a = m_agents[Index(node)];
  if (a.in_flight) m_net.Release(a.in_flight->id, LossReason::kNodeDeath);
  for (const Custody& c : a.queue) m_net.Release(c.id, LossReason::kNodeDeath);
  a.in_flight.reset();
  a.queue.clear();
  a.cache.clear();
}

}  // namespace xlradr
