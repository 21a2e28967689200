#pragma once

#include <span>
#include <vector>

#include "xlradr/core/types.h"

namespace xlradr {

// Half-open tick interval [begin, end).
struct Interval {
  SimTime begin = 0;
  SimTime end = 0;

  bool Overlaps(const Interval& other) const { return begin < other.end && other.begin < end; }
  bool Contains(SimTime t) const { return begin <= t && t < end; }
};

struct Transmission {
  Frame frame;
  SimTime start = 0;
  SimTime end = 0;
  Position tx_pos;
  double tx_range_m = 0.0;
  double tx_power_w = 0.0;

  NodeId transmitter() const { return frame.hop_tx; }
  Interval Airtime() const { return {start, end}; }
};

// First-order radio model: E_tx = e_elec*k + eps_amp*k*d^2, E_rx = e_elec*k.
struct EnergyModel {
  double e_elec_j_per_bit = 50e-9;
  double eps_amp_j_per_bit_m2 = 100e-12;
};

double TxEnergy(const EnergyModel& model, double bits, double distance_m);
double RxEnergy(const EnergyModel& model, double bits);

// Boundary inclusive: b is reachable from a iff distance <= a.range_m.
bool InRange(const NodeState& a, const NodeState& b);
bool InRange(const Position& tx_pos, double tx_range_m, const Position& rx_pos);

enum class ReceptionOutcome { kDelivered, kCollided, kRxBusy, kOutOfRange };

std::string_view ToString(ReceptionOutcome outcome);

struct Reception {
  std::uint64_t seq = 0;
  ReceptionOutcome outcome = ReceptionOutcome::kOutOfRange;
};

// Outcome at `rx` for every transmission in `active` that intersects `window`
// and was not sent by rx itself. `rx_sleep` lists the receiver's sleep windows;
// the receiver's own transmissions are taken from `active`.
std::vector<Reception> ResolveReception(const NodeState& rx, std::span<const Transmission> active,
                                        Interval window, std::span<const Interval> rx_sleep = {});

// Outcome of a single transmission, judged against everything else on air.
ReceptionOutcome ResolveFrame(const NodeState& rx, const Transmission& frame,
                              std::span<const Transmission> active,
                              std::span<const Interval> rx_sleep = {});

// Ticks of `frame` overlapped by other in-range transmissions at `rx`
// (union of the overlaps). A collided receiver pays rx energy for these only.
SimTime CollisionOverlap(const NodeState& rx, const Transmission& frame, std::span<const Transmission> active);

struct DebitResult {
  double debited_j = 0.0;
  bool died = false;
};

// Clamps at zero; `died` is set only on the transition to zero.
DebitResult Debit(NodeState& node, double joules);

}  // namespace xlradr
