#include "xlradr/mac/handshake.h"

#include <algorithm>

namespace xlradr {

std::string_view ToString(HandshakePhase phase) {
  switch (phase) {
    case HandshakePhase::kIdle: return "Idle";
    case HandshakePhase::kAwaitAck1: return "AwaitAck1";
    case HandshakePhase::kAwaitAck2: return "AwaitAck2";
  }
  return "?";
}

bool HandshakeMachine::CanInitiate(SimTime now) const {
  return m_state.phase == HandshakePhase::kIdle && !m_state.Receiving(now);
}

bool HandshakeMachine::ReadyFor(NodeId sender, SimTime now) const {
  return !m_state.Receiving(now) || *m_state.rx_peer == sender;
}

Frame HandshakeMachine::MakeControl(FrameKind kind, NodeId to, const Frame& about) const {
  Frame f;
  f.kind = kind;
  f.src = about.src;
  f.dst = about.dst;
  f.hop_tx = m_self;
  f.hop_rx = to;
  f.size_bits = m_config.control_size_bits;
  f.payload_id = about.payload_id;
  f.epoch = about.epoch;
  return f;
}

void HandshakeMachine::Arm(MacOutput& out, SimTime deadline) {
  m_state.timer_deadline = deadline;
  ++m_state.timer_token;
  out.arm_timer = deadline;
}

MacOutput HandshakeMachine::Initiate(HopRequest request, SimTime now) {
  if (request.candidates.empty()) throw std::invalid_argument("hop request without a receiver");
  if (request.kmax.size() != request.candidates.size()) throw std::invalid_argument("kmax per candidate");
  m_state.phase = HandshakePhase::kIdle;
  m_state.rrequest_retries = 0;
  m_state.data_retries = 0;
  m_state.ack1_reports.clear();
  m_state.request = std::move(request);
  if (!m_state.request->use_rrequest) {
    MacOutput out = SendData(m_state.request->candidates.front(), now);
    out.data_phase_started = false;
    return out;
  }
  m_state.phase = HandshakePhase::kAwaitAck1;
  return EmitRRequest(now);
}

MacOutput HandshakeMachine::EmitRRequest(SimTime now) {
  MacOutput out;
  const HopRequest& req = *m_state.request;
  Frame f = MakeControl(FrameKind::kRRequest, req.candidates.front(), req.data);
  if (req.candidates.size() > 1) f.candidates = req.candidates;
  out.frames.push_back({0, std::move(f)});
  Arm(out, now + m_config.tf);
  return out;
}

MacOutput HandshakeMachine::SendData(NodeId receiver, SimTime now) {
  MacOutput out;
  const HopRequest& req = *m_state.request;
  auto it = std::find(req.candidates.begin(), req.candidates.end(), receiver);
  m_state.kmax = req.kmax[static_cast<std::size_t>(it - req.candidates.begin())];
  m_state.phase = HandshakePhase::kAwaitAck2;
  m_state.peer = receiver;
  m_state.data_retries = 0;
  Frame data = req.data;
  data.hop_tx = m_self;
  data.hop_rx = receiver;
  out.frames.push_back({0, std::move(data)});
  out.data_phase_started = true;
  out.peer = receiver;
  Arm(out, now + m_config.tf);
  return out;
}

MacOutput HandshakeMachine::OnRRequest(const Frame& frame, double residual_energy_j, bool radio_free,
                                       SimTime now) {
  MacOutput out;
  const auto& c = frame.candidates;
  std::size_t slot = 0;
  if (c.empty()) {
    if (frame.hop_rx != m_self) return out;
  } else {
    auto it = std::find(c.begin(), c.end(), m_self);
    if (it == c.end()) return out;
    slot = static_cast<std::size_t>(it - c.begin());
  }
  if (!radio_free || !ReadyFor(frame.hop_tx, now)) return out;

  Frame ack = MakeControl(FrameKind::kAck1, frame.hop_tx, frame);
  ack.energy_report_j = residual_energy_j;
  const SimTime delay = static_cast<SimTime>(slot) * m_config.control_airtime;
  out.frames.push_back({delay, std::move(ack)});
  m_state.rx_peer = frame.hop_tx;
  m_state.await_data_until = now + delay + m_config.tf;
  return out;
}

MacOutput HandshakeMachine::OnAck1(const Frame& frame, SimTime now) {
  MacOutput out;
  if (m_state.phase != HandshakePhase::kAwaitAck1 || frame.hop_rx != m_self ||
      frame.payload_id != m_state.request->data.payload_id) {
    out.stale = true;
    return out;
  }
  const auto& cands = m_state.request->candidates;
  if (std::find(cands.begin(), cands.end(), frame.hop_tx) == cands.end()) {
    out.stale = true;
    return out;
  }
  auto& reports = m_state.ack1_reports;
  const bool seen = std::any_of(reports.begin(), reports.end(),
                                [&](const auto& r) { return r.first == frame.hop_tx; });
  if (!seen) reports.emplace_back(frame.hop_tx, frame.energy_report_j.value_or(0.0));
  if (reports.size() < cands.size()) return out;  // tie: keep collecting

  auto best = std::max_element(reports.begin(), reports.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second < b.second;
    return Index(a.first) > Index(b.first);
  });
  return SendData(best->first, now);
}

MacOutput HandshakeMachine::OnData(const Frame& frame, SimTime) {
  MacOutput out;
  if (frame.hop_rx != m_self) return out;
  out.frames.push_back({0, MakeControl(FrameKind::kAck2, frame.hop_tx, frame)});
  out.signal = MacSignal::kPayloadArrived;
  out.peer = frame.hop_tx;
  if (m_state.rx_peer == frame.hop_tx) m_state.rx_peer.reset();
  return out;
}

MacOutput HandshakeMachine::OnAck2(const Frame& frame, SimTime) {
  MacOutput out;
  if (m_state.phase != HandshakePhase::kAwaitAck2 || frame.hop_rx != m_self || frame.hop_tx != m_state.peer ||
      frame.payload_id != m_state.request->data.payload_id) {
    out.stale = true;
    return out;
  }
  out.signal = MacSignal::kHopDelivered;
  out.peer = m_state.peer;
  out.timer_cancelled = true;
  ++m_state.timer_token;
  m_state.phase = HandshakePhase::kIdle;
  m_state.request.reset();
  return out;
}

MacOutput HandshakeMachine::OnTimeout(std::uint64_t token, SimTime now) {
  MacOutput out;
  if (token != m_state.timer_token || !m_state.TimerArmed()) {
    out.stale = true;
    return out;
  }
  if (m_state.phase == HandshakePhase::kAwaitAck1) {
    if (!m_state.ack1_reports.empty()) {
      // Some tied relays stayed silent; pick among those that answered.
      auto best = std::max_element(m_state.ack1_reports.begin(), m_state.ack1_reports.end(),
                                   [](const auto& a, const auto& b) {
                                     if (a.second != b.second) return a.second < b.second;
                                     return Index(a.first) > Index(b.first);
                                   });
      return SendData(best->first, now);
    }
    if (m_state.rrequest_retries >= m_config.max_rrequest_retries) {
      out.signal = MacSignal::kHopAborted;
      out.peer = m_state.request->candidates.front();
      m_state.phase = HandshakePhase::kIdle;
      m_state.request.reset();
      return out;
    }
    ++m_state.rrequest_retries;
    out = EmitRRequest(now);
    out.frames.front().frame.retransmission = true;
    out.retransmissions = 1;
    return out;
  }

  // AwaitAck2: DATA retransmission candidate.
  if (m_state.data_retries >= m_state.kmax) {
    out.signal = MacSignal::kHopDropped;
    out.peer = m_state.peer;
    m_state.phase = HandshakePhase::kIdle;
    m_state.request.reset();
    return out;
  }
  ++m_state.data_retries;
  Frame data = m_state.request->data;
  data.hop_tx = m_self;
  data.hop_rx = m_state.peer;
  data.retransmission = true;
  out.frames.push_back({0, std::move(data)});
  out.retransmissions = 1;
  Arm(out, now + m_config.tf);
  return out;
}

}  // namespace xlradr
