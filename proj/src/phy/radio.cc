#include "xlradr/phy/radio.h"

#include <algorithm>

namespace xlradr {

double TxEnergy(const EnergyModel& model, double bits, double distance_m) {
  return model.e_elec_j_per_bit * bits + model.eps_amp_j_per_bit_m2 * bits * distance_m * distance_m;
}

double RxEnergy(const EnergyModel& model, double bits) { return model.e_elec_j_per_bit * bits; }

bool InRange(const Position& tx_pos, double tx_range_m, const Position& rx_pos) {
  return Distance(tx_pos, rx_pos) <= tx_range_m;
}

bool InRange(const NodeState& a, const NodeState& b) { return InRange(a.pos, a.range_m, b.pos); }

std::string_view ToString(ReceptionOutcome outcome) {
  switch (outcome) {
    case ReceptionOutcome::kDelivered: return "Delivered";
    case ReceptionOutcome::kCollided: return "Collided";
    case ReceptionOutcome::kRxBusy: return "RxBusy";
    case ReceptionOutcome::kOutOfRange: return "OutOfRange";
  }
  return "?";
}

namespace {

bool ReceiverBusy(const NodeState& rx, const Transmission& frame, std::span<const Transmission> active,
                  std::span<const Interval> rx_sleep) {
  if (!rx.alive) return true;
  if (rx.radio == RadioMode::kTransmitting || rx.radio == RadioMode::kSleeping) return true;
  const Interval air = frame.Airtime();
  for (const Interval& s : rx_sleep) {
    if (s.Overlaps(air)) return true;
  }
  return std::any_of(active.begin(), active.end(), [&](const Transmission& t) {
    return t.transmitter() == rx.id && t.Airtime().Overlaps(air);
  });
}

}  // namespace

ReceptionOutcome ResolveFrame(const NodeState& rx, const Transmission& frame,
                              std::span<const Transmission> active, std::span<const Interval> rx_sleep) {
  if (!InRange(frame.tx_pos, frame.tx_range_m, rx.pos)) return ReceptionOutcome::kOutOfRange;
  if (ReceiverBusy(rx, frame, active, rx_sleep)) return ReceptionOutcome::kRxBusy;
  const Interval air = frame.Airtime();
  for (const Transmission& other : active) {
    if (other.frame.seq == frame.frame.seq) continue;
    if (other.transmitter() == rx.id) continue;
    if (!other.Airtime().Overlaps(air)) continue;
    if (InRange(other.tx_pos, other.tx_range_m, rx.pos)) return ReceptionOutcome::kCollided;
  }
  return ReceptionOutcome::kDelivered;
}

std::vector<Reception> ResolveReception(const NodeState& rx, std::span<const Transmission> active,
                                        Interval window, std::span<const Interval> rx_sleep) {
  std::vector<Reception> out;
  for (const Transmission& t : active) {
    if (t.transmitter() == rx.id) continue;
    if (!t.Airtime().Overlaps(window)) continue;
    out.push_back({t.frame.seq, ResolveFrame(rx, t, active, rx_sleep)});
  }
  return out;
}

SimTime CollisionOverlap(const NodeState& rx, const Transmission& frame, std::span<const Transmission> active) {
  std::vector<Interval> parts;
  const Interval air = frame.Airtime();
  for (const Transmission& other : active) {
    if (other.frame.seq == frame.frame.seq || other.transmitter() == rx.id) continue;
    if (!other.Airtime().Overlaps(air)) continue;
    if (!InRange(other.tx_pos, other.tx_range_m, rx.pos)) continue;
    parts.push_back({std::max(air.begin, other.start), std::min(air.end, other.end)});
  }
  std::sort(parts.begin(), parts.end(), [](const Interval& a, const Interval& b) { return a.begin < b.begin; });
  SimTime total = 0;
  SimTime cursor = air.begin;
  for (const Interval& p : parts) {
    const SimTime from = std::max(cursor, p.begin);
    if (p.end > from) {
      total += p.end - from;
      cursor = p.end;
    }
  }
  return total;
}

DebitResult Debit(NodeState& node, double joules) {
  DebitResult result;
  if (!node.alive || joules <= 0.0) return result;
  if (joules < node.energy_j) {
    node.energy_j -= joules;
    result.debited_j = joules;
    return result;
  }
  result.debited_j = node.energy_j;
  node.energy_j = 0.0;
  node.alive = false;
  result.died = true;
  return result;
}

}  // namespace xlradr
