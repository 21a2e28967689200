#pragma once

#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "xlradr/core/types.h"

namespace xlradr {

// Sender role. The receiver role (an ACK1 sent, DATA expected) is tracked
// separately so a node waiting on its own hop can still answer a neighbor.
enum class HandshakePhase { kIdle, kAwaitAck1, kAwaitAck2 };

std::string_view ToString(HandshakePhase phase);

struct MacConfig {
  SimTime tf = 18;
  int max_rrequest_retries = 5;
  // Width of one ACK1 reply slot when several tied relays answer one RREQUEST.
  SimTime control_airtime = 1;
  std::uint32_t control_size_bits = 64;
};

// One hop attempt handed down by routing.
struct HopRequest {
  Frame data;                      // DATA template; hop_rx is set once the receiver is chosen
  std::vector<NodeId> candidates;  // tied relays, at least one
  std::vector<int> kmax;           // DATA retransmission limit, per candidate
  bool use_rrequest = true;        // false: plain DATA/ACK2 exchange (DSR baseline)
};

struct OutFrame {
  SimTime delay = 0;
  Frame frame;
};

enum class MacSignal {
  kNone,
  kHopDelivered,      // ACK2 received; custody moves to `peer`
  kHopAborted,        // RREQUEST retries exhausted without any ACK1
  kHopDropped,        // DATA retransmissions reached Kmax
  kPayloadArrived,    // receiver side: DATA accepted
};

struct MacOutput {
  std::vector<OutFrame> frames;
  std::optional<SimTime> arm_timer;  // absolute deadline; replaces any armed timer
  bool timer_cancelled = false;
  MacSignal signal = MacSignal::kNone;
  NodeId peer{};
  bool data_phase_started = false;  // DATA about to go out for the first time on this hop
  bool stale = false;
  int retransmissions = 0;
};

struct HandshakeState {
  HandshakePhase phase = HandshakePhase::kIdle;
  NodeId peer{};
  SimTime timer_deadline = 0;
  std::uint64_t timer_token = 0;
  int rrequest_retries = 0;
  int data_retries = 0;
  int kmax = 0;
  std::optional<NodeId> rx_peer;  // answered this sender's RREQUEST
  SimTime await_data_until = 0;
  std::optional<HopRequest> request;
  std::vector<std::pair<NodeId, double>> ack1_reports;

  bool TimerArmed() const {
    return phase == HandshakePhase::kAwaitAck1 || phase == HandshakePhase::kAwaitAck2;
  }
  bool Receiving(SimTime now) const { return rx_peer.has_value() && now < await_data_until; }
};

class NotInRange : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Per-node r-request / ack1 / data / ack2 state machine. Handlers are pure
// state transitions; the caller puts the returned frames on air and arms the
// returned timer.
class HandshakeMachine {
 public:
  HandshakeMachine(NodeId self, MacConfig config) : m_self(self), m_config(config) {}

  const HandshakeState& state() const { return m_state; }
  const MacConfig& config() const { return m_config; }
  NodeId self() const { return m_self; }

  // Sender role idle and no DATA expected.
  bool CanInitiate(SimTime now) const;
  // May answer an RREQUEST from `sender`: no DATA expected from anyone else.
  // Radio idleness is the caller's half of the check.
  bool ReadyFor(NodeId sender, SimTime now) const;

  MacOutput Initiate(HopRequest request, SimTime now);
  MacOutput OnRRequest(const Frame& frame, double residual_energy_j, bool radio_free, SimTime now);
  MacOutput OnAck1(const Frame& frame, SimTime now);
  MacOutput OnData(const Frame& frame, SimTime now);
  MacOutput OnAck2(const Frame& frame, SimTime now);
  MacOutput OnTimeout(std::uint64_t token, SimTime now);

  void Reset() { m_state = HandshakeState{}; }

 private:
  Frame MakeControl(FrameKind kind, NodeId to, const Frame& about) const;
  MacOutput EmitRRequest(SimTime now);
  MacOutput SendData(NodeId receiver, SimTime now);
  void Arm(MacOutput& out, SimTime deadline);

  NodeId m_self;
  MacConfig m_config;
  HandshakeState m_state;
};

}  // namespace xlradr
