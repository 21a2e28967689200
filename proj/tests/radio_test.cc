#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "xlradr/phy/radio.h"

using namespace xlradr;

namespace {

NodeState At(std::size_t id, double x, double range = 100.0) {
  NodeState n;
  n.id = MakeNodeId(id);
  n.pos = {x, 0.0};
  n.range_m = range;
  n.energy_j = 1.0;
  return n;
}

Transmission Tx(std::uint64_t seq, const NodeState& from, SimTime start, SimTime end) {
  Transmission t;
  t.frame.seq = seq;
  t.frame.hop_tx = from.id;
  t.start = start;
  t.end = end;
  t.tx_pos = from.pos;
  t.tx_range_m = from.range_m;
  return t;
}

}  // namespace

TEST(Energy, HandEvaluatedValues) {
  const EnergyModel m;
  EXPECT_EQ(TxEnergy(m, 0, 100), 0.0);
  EXPECT_NEAR(TxEnergy(m, 1024, 100), 1.0752e-3, 1e-15);
  EXPECT_NEAR(TxEnergy(m, 1024, 0), 5.12e-5, 1e-18);
  EXPECT_NEAR(RxEnergy(m, 1024), 5.12e-5, 1e-18);
  EXPECT_EQ(RxEnergy(m, 777), TxEnergy(m, 777, 0));
}

TEST(InRange, BoundaryInclusive) {
  EXPECT_TRUE(InRange(At(0, 0, 250), At(1, 250)));
  EXPECT_FALSE(InRange(At(0, 0, 300), At(1, 300.0001)));
  EXPECT_TRUE(InRange(At(0, 5), At(1, 5)));
  // Asymmetric ranges.
  EXPECT_TRUE(InRange(At(0, 0, 300), At(1, 280, 250)));
  EXPECT_FALSE(InRange(At(1, 280, 250), At(0, 0, 300)));
}

TEST(Debit, ClampsAndFlagsDeathOnce) {
  NodeState n = At(0, 0);
  n.energy_j = 1.0;
  auto r = Debit(n, 0.3);
  EXPECT_NEAR(n.energy_j, 0.7, 1e-15);
  EXPECT_FALSE(r.died);

  n.energy_j = 0.2;
  r = Debit(n, 0.5);
  EXPECT_EQ(n.energy_j, 0.0);
  EXPECT_TRUE(r.died);
  EXPECT_DOUBLE_EQ(r.debited_j, 0.2);
  EXPECT_FALSE(Debit(n, 0.1).died);

  NodeState m = At(1, 0);
  m.energy_j = 0.15;
  EXPECT_FALSE(Debit(m, 0.1).died);
  EXPECT_TRUE(Debit(m, 0.1).died);
}

TEST(Resolve, SingleFrameDelivered) {
  const NodeState a = At(0, 0), rx = At(1, 50);
  std::vector<Transmission> air{Tx(1, a, 0, 10)};
  EXPECT_EQ(ResolveFrame(rx, air[0], air), ReceptionOutcome::kDelivered);
}

TEST(Resolve, PartialOverlapCollidesBoth) {
  const NodeState a = At(0, 0), b = At(2, 100), rx = At(1, 50);
  std::vector<Transmission> air{Tx(1, a, 0, 10), Tx(2, b, 9, 19)};
  const auto out = ResolveReception(rx, air, {0, 20});
  ASSERT_EQ(out.size(), 2u);
  EXPECT_EQ(out[0].outcome, ReceptionOutcome::kCollided);
  EXPECT_EQ(out[1].outcome, ReceptionOutcome::kCollided);
}

TEST(Resolve, BackToBackDoesNotCollide) {
  const NodeState a = At(0, 0), b = At(2, 100), rx = At(1, 50);
  std::vector<Transmission> air{Tx(1, a, 0, 10), Tx(2, b, 10, 20)};
  EXPECT_EQ(ResolveFrame(rx, air[0], air), ReceptionOutcome::kDelivered);
  EXPECT_EQ(ResolveFrame(rx, air[1], air), ReceptionOutcome::kDelivered);
}

TEST(Resolve, TransmittingReceiverIsBusy) {
  NodeState a = At(0, 0), rx = At(1, 50);
  std::vector<Transmission> air{Tx(1, a, 0, 10), Tx(2, rx, 5, 6)};
  EXPECT_EQ(ResolveFrame(rx, air[0], air), ReceptionOutcome::kRxBusy);
  rx.radio = RadioMode::kTransmitting;
  EXPECT_EQ(ResolveFrame(rx, air[0], std::vector<Transmission>{air[0]}), ReceptionOutcome::kRxBusy);
}

TEST(Resolve, SleepingReceiverIsBusy) {
  const NodeState a = At(0, 0), rx = At(1, 50);
  std::vector<Transmission> air{Tx(1, a, 0, 10)};
  const std::vector<Interval> sleep{{8, 30}};
  EXPECT_EQ(ResolveFrame(rx, air[0], air, sleep), ReceptionOutcome::kRxBusy);
  const std::vector<Interval> earlier{{0, 0}};
  EXPECT_EQ(ResolveFrame(rx, air[0], air, earlier), ReceptionOutcome::kDelivered);
}

TEST(Resolve, OutOfRangeInterfererIsHarmless) {
  const NodeState a = At(0, 0), far = At(2, 500), rx = At(1, 50);
  std::vector<Transmission> air{Tx(1, a, 0, 10), Tx(2, far, 0, 10)};
  EXPECT_EQ(ResolveFrame(rx, air[0], air), ReceptionOutcome::kDelivered);
  EXPECT_EQ(ResolveFrame(rx, air[1], air), ReceptionOutcome::kOutOfRange);
}

TEST(CollisionOverlap, UnionOfOverlaps) {
  const NodeState a = At(0, 0), b = At(2, 100), c = At(3, 90), rx = At(1, 50);
  std::vector<Transmission> air{Tx(1, a, 0, 10), Tx(2, b, 2, 5), Tx(3, c, 4, 7)};
  EXPECT_EQ(CollisionOverlap(rx, air[0], air), 5);  // [2,7)
  std::vector<Transmission> alone{air[0]};
  EXPECT_EQ(CollisionOverlap(rx, air[0], alone), 0);
}

// Every placement of two or three transmissions on a short timeline among
// three nodes, each of which may transmit or listen. Checks that overlapping
// in-range frames at a common receiver all fail and that a node never
// receives while it transmits.
TEST(CollisionProperty, ExhaustiveThreeNodeInterleavings) {
  const std::vector<NodeState> nodes{At(0, 0), At(1, 50), At(2, 100)};
  const SimTime kLen = 3;
  const SimTime kSpan = 6;
  std::size_t cases = 0;
  for (int count = 2; count <= 3; ++count) {
    // transmitter and start tick for each frame
    std::vector<int> digits(static_cast<std::size_t>(2 * count), 0);
    while (true) {
      std::vector<Transmission> air;
      for (int f = 0; f < count; ++f) {
        const auto& who = nodes[static_cast<std::size_t>(digits[2 * f] % 3)];
        const SimTime start = digits[2 * f + 1];
        air.push_back(Tx(static_cast<std::uint64_t>(f + 1), who, start, start + kLen));
      }
      for (const NodeState& rx : nodes) {
        for (const Transmission& t : air) {
          if (t.transmitter() == rx.id) continue;
          const auto got = ResolveFrame(rx, t, air);
          bool self_busy = false;
          bool other = false;
          for (const Transmission& u : air) {
            if (u.frame.seq == t.frame.seq) continue;
            const bool overlap = u.start < t.end && t.start < u.end;
            if (!overlap) continue;
            if (u.transmitter() == rx.id) self_busy = true;
            else if (InRange(u.tx_pos, u.tx_range_m, rx.pos)) other = true;
          }
          if (self_busy) {
            EXPECT_EQ(got, ReceptionOutcome::kRxBusy);
          } else if (other) {
            EXPECT_EQ(got, ReceptionOutcome::kCollided);
          } else {
            EXPECT_EQ(got, ReceptionOutcome::kDelivered);
          }
          ++cases;
        }
      }
      std::size_t i = 0;
      for (; i < digits.size(); ++i) {
        const int base = i % 2 == 0 ? 3 : static_cast<int>(kSpan);
        if (++digits[i] < base) break;
        digits[i] = 0;
      }
      if (i == digits.size()) break;
    }
  }
  EXPECT_GT(cases, 10000u);
}

TEST(CollisionProperty, PermutationInvariant) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> x(0, 300);
  std::uniform_int_distribution<int> t(0, 20);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<NodeState> nodes;
    for (std::size_t i = 0; i < 5; ++i) nodes.push_back(At(i, x(rng), 120));
    std::vector<Transmission> air;
    for (std::size_t i = 0; i < 4; ++i) {
      const SimTime s = t(rng);
      air.push_back(Tx(i + 1, nodes[i], s, s + 1 + t(rng) % 6));
    }
    const NodeState& rx = nodes[4];
    auto before = ResolveReception(rx, air, {0, 40});
    std::shuffle(air.begin(), air.end(), rng);
    auto after = ResolveReception(rx, air, {0, 40});
    auto by_seq = [](const Reception& a, const Reception& b) { return a.seq < b.seq; };
    std::sort(before.begin(), before.end(), by_seq);
    std::sort(after.begin(), after.end(), by_seq);
    ASSERT_EQ(before.size(), after.size());
    for (std::size_t i = 0; i < before.size(); ++i) EXPECT_EQ(before[i].outcome, after[i].outcome);
  }
}
