#include "xlradr/routing/dsr.h"

#include <algorithm>

namespace xlradr {

namespace {

constexpr std::size_t kMaxRoutesPerDestination = 3;

std::uint64_t DiscoveryCookie(NodeId dst, std::uint32_t request_id) {
  return (static_cast<std::uint64_t>(Index(dst)) << 32) | request_id;
}

bool UsesLink(const Path& path, NodeId a, NodeId b) {
  for (std::size_t i = 0; i + 1 < path.nodes.size(); ++i) {
    const NodeId u = path.nodes[i];
    const NodeId v = path.nodes[i + 1];
    if ((u == a && v == b) || (u == b && v == a)) return true;
  }
  return false;
}

}  // namespace

DsrProtocol::DsrProtocol(Network& net) : m_net(net), m_agents(net.NodeCount()) {}

const std::vector<DsrRoute>* DsrProtocol::Routes(NodeId source, NodeId dst) const {
  const auto& cache = m_agents[Index(source)].cache;
  auto it = cache.find(dst);
  return it == cache.end() || it->second.empty() ? nullptr : &it->second;
}

void DsrProtocol::OnGenerate(const PayloadRecord& payload) {
  Job job{payload.id, payload.src, payload.dst, {}, 0};
  m_net.Acquire(job.id);
  Route(payload.src, std::move(job));
}

void DsrProtocol::Route(NodeId source, Job job) {
  NodeAgent& a = m_agents[Index(source)];
  if (const auto* routes = Routes(source, job.dst)) {
    job.route = routes->front().path.nodes;
    a.queue.push_back(std::move(job));
    m_net.RequestKick(source);
    return;
  }
  if (!a.pending.contains(job.dst)) StartDiscovery(source, job.dst);
  a.pending[job.dst].waiting.push_back(std::move(job));
}

void DsrProtocol::StartDiscovery(NodeId source, NodeId dst) {
  NodeAgent& a = m_agents[Index(source)];
  const std::uint32_t id = ++a.next_request_id;
  a.pending[dst].request_id = id;
  a.seen_rreq.insert({source, id});

  Frame f;
  f.kind = FrameKind::kDsrRreq;
  f.src = source;
  f.dst = dst;
  f.hop_tx = source;
  f.hop_rx = kBroadcast;
  f.size_bits = m_net.scenario().control_size_bits;
  f.request_id = id;
  f.route = {source};
  ++a.rreq_sent;
  m_net.SendControl(source, std::move(f));
  m_net.ArmProtocolTimer(source, m_net.Now() + m_net.scenario().DsrDiscoveryTimeout(), DiscoveryCookie(dst, id));
}

void DsrProtocol::OnTimer(NodeId node, std::uint64_t cookie) {
  NodeAgent& a = m_agents[Index(node)];
  const NodeId dst = MakeNodeId(static_cast<std::size_t>(cookie >> 32));
  const auto request_id = static_cast<std::uint32_t>(cookie & 0xFFFFFFFFu);
  auto it = a.pending.find(dst);
  if (it == a.pending.end() || it->second.request_id != request_id) return;
  std::vector<Job> waiting = std::move(it->second.waiting);
  a.pending.erase(it);
  m_net.Note(TraceKind::kLost, node, dst, "DiscoveryTimeout");
  for (const Job& job : waiting) m_net.Release(job.id, LossReason::kUnreachable);
}

bool DsrProtocol::HasWork(NodeId node) const {
  const NodeAgent& a = m_agents[Index(node)];
  return !a.queue.empty() || a.in_flight.has_value();
}

void DsrProtocol::OnReady(NodeId node) {
  NodeAgent& a = m_agents[Index(node)];
  if (a.queue.empty() || a.in_flight) return;
  Job job = std::move(a.queue.front());
  a.queue.pop_front();

  const Path route{job.route};
  const auto idx = route.IndexOf(node);
  if (!idx || *idx + 1 >= route.nodes.size()) {
    m_net.Release(job.id, LossReason::kUnreachable);
    return;
  }
  const NodeId next = route.nodes[*idx + 1];
  a.in_flight = std::move(job);
  if (!m_net.MutuallyInRange(node, next)) {
    // Neighbor table already shows the link gone; fail it without transmitting.
    OnHopDropped(node, next);
    return;
  }

  HopRequest req;
  req.use_rrequest = false;
  req.candidates = {next};
  req.kmax = {m_net.scenario().dsr_retry_limit};
  Frame& d = req.data;
  d.kind = FrameKind::kData;
  d.src = a.in_flight->src;
  d.dst = a.in_flight->dst;
  d.hop_tx = node;
  d.size_bits = m_net.scenario().packet_size_bits;
  d.payload_id = a.in_flight->id;
  d.route = a.in_flight->route;
  d.epoch = a.in_flight->epoch;
  m_net.StartHop(node, std::move(req));
}

void DsrProtocol::OnHopDelivered(NodeId node, NodeId) {
  NodeAgent& a = m_agents[Index(node)];
  if (!a.in_flight) return;
  const PayloadId id = a.in_flight->id;
  a.in_flight.reset();
  m_net.Release(id);
  m_net.RequestKick(node);
}

void DsrProtocol::OnHopAborted(NodeId node, NodeId peer) { OnHopDropped(node, peer); }

void DsrProtocol::OnHopDropped(NodeId node, NodeId peer) {
  NodeAgent& a = m_agents[Index(node)];
  if (!a.in_flight) return;
  Job job = std::move(*a.in_flight);
  a.in_flight.reset();
  PurgeLink(node, node, peer);
  m_net.RequestKick(node);
  if (node == job.src) {
    HandleBrokenRoute(node, std::move(job));
    return;
  }
  const Path route{job.route};
  const std::size_t idx = *route.IndexOf(node);
  Frame f;
  f.kind = FrameKind::kDsrRerr;
  f.src = node;
  f.dst = job.src;
  f.hop_tx = node;
  f.hop_rx = route.nodes[idx - 1];
  f.size_bits = m_net.scenario().control_size_bits;
  f.payload_id = job.id;
  f.epoch = job.epoch;
  f.route = job.route;
  f.broken_from = node;
  f.broken_to = peer;
  f.carries_custody = true;
  m_net.SendControl(node, std::move(f));
}

void DsrProtocol::HandleBrokenRoute(NodeId source, Job job) {
  if (job.epoch >= 1) {
    m_net.Release(job.id, LossReason::kKmaxDrop);
    return;
  }
  job.epoch = 1;
  job.route.clear();
  Route(source, std::move(job));
}

void DsrProtocol::PurgeLink(NodeId owner, NodeId a, NodeId b) {
  for (auto& [dst, routes] : m_agents[Index(owner)].cache) {
    std::erase_if(routes, [&](const DsrRoute& r) { return UsesLink(r.path, a, b); });
  }
}

void DsrProtocol::OnPayloadArrived(NodeId node, const Frame& data) {
  NodeAgent& a = m_agents[Index(node)];
  if (!a.seen_data.insert({data.payload_id, data.epoch}).second) return;
  if (node == data.dst) {
    m_net.MarkDelivered(data.payload_id, data.route);
    return;
  }
  m_net.Acquire(data.payload_id);
  a.queue.push_back(Job{data.payload_id, data.src, data.dst, data.route, data.epoch});
  m_net.RequestKick(node);
}

void DsrProtocol::OnControl(NodeId node, const Frame& frame) {
  NodeAgent& a = m_agents[Index(node)];
  switch (frame.kind) {
    case FrameKind::kDsrRreq: {
      if (node == frame.src) return;
      if (!m_net.MutuallyInRange(node, frame.hop_tx)) return;
      if (!a.seen_rreq.insert({frame.src, frame.request_id}).second) return;
      Frame f = frame;
      f.route.push_back(node);
      f.hop_tx = node;
      if (node == frame.dst) {
        f.kind = FrameKind::kDsrRrep;
        f.src = node;
        f.dst = frame.src;
        f.hop_rx = frame.hop_tx;
        m_net.SendControl(node, std::move(f));
        return;
      }
      f.hop_rx = kBroadcast;
      const auto window = static_cast<std::uint64_t>(kDsrJitterSlots * m_net.scenario().ControlAirtime());
      const auto jitter = static_cast<SimTime>(m_net.TieBreakRng().Below(window + 1));
      ++a.rreq_sent;
      m_net.SendControl(node, std::move(f), jitter);
      return;
    }
    case FrameKind::kDsrRrep: {
      if (frame.hop_rx != node) return;
      const Path route{frame.route};
      const auto idx = route.IndexOf(node);
      if (!idx) return;
      if (*idx == 0) {
        const NodeId dst = route.nodes.back();
        auto& routes = a.cache[dst];
        routes.insert(routes.begin(), DsrRoute{route, m_net.Now()});
        if (routes.size() > kMaxRoutesPerDestination) routes.resize(kMaxRoutesPerDestination);
        auto it = a.pending.find(dst);
        if (it != a.pending.end()) {
          std::vector<Job> waiting = std::move(it->second.waiting);
          a.pending.erase(it);
          for (Job& job : waiting) {
            job.route = route.nodes;
            a.queue.push_back(std::move(job));
          }
          m_net.RequestKick(node);
        }
        return;
      }
      Frame f = frame;
      f.hop_tx = node;
      f.hop_rx = route.nodes[*idx - 1];
      m_net.SendControl(node, std::move(f));
      return;
    }
    case FrameKind::kDsrRerr: {
      if (frame.hop_rx != node) return;
      PurgeLink(node, frame.broken_from, frame.broken_to);
      const Path route{frame.route};
      const auto idx = route.IndexOf(node);
      if (!idx) {
        m_net.Release(frame.payload_id, LossReason::kKmaxDrop);
        return;
      }
      if (*idx == 0) {
        HandleBrokenRoute(node, Job{frame.payload_id, node, route.nodes.back(), {}, frame.epoch});
        return;
      }
      Frame f = frame;
      f.hop_tx = node;
      f.hop_rx = route.nodes[*idx - 1];
      m_net.SendControl(node, std::move(f));
      return;
    }
    default:
      return;
  }
}

void DsrProtocol::OnCustodyFrameLost(const Frame& frame) {
  if (frame.kind == FrameKind::kDsrRerr) m_net.Release(frame.payload_id, LossReason::kKmaxDrop);
}

void DsrProtocol::OnDeath(NodeId node) {
  NodeAgent& a = m_agents[Index(node)];
  if (a.in_flight) m_net.Release(a.in_flight->id, LossReason::kNodeDeath);
  for (const Job& job : a.queue) m_net.Release(job.id, LossReason::kNodeDeath);
  for (const auto& [dst, d] : a.pending) {
    for (const Job& job : d.waiting) m_net.Release(job.id, LossReason::kNodeDeath);
  }
  a.in_flight.reset();
  a.queue.clear();
  a.pending.clear();
  a.cache.clear();
}

}  // namespace xlradr
