#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "xlradr/routing/e2xlradr.h"

using namespace xlradr;

namespace {

NeighborInfo Nb(std::size_t id, double x, double y, double energy = 1.0) {
  return {MakeNodeId(id), {x, y}, energy};
}

NodeState Self(double x, double y) {
  NodeState s;
  s.id = MakeNodeId(0);
  s.pos = {x, y};
  s.range_m = 300;
  return s;
}

// Integer nanometres: equal iff the selector's rounded distances are equal.
long long Nm(const Position& a, const Position& b) {
  return std::llround(std::hypot(a.x - b.x, a.y - b.y) * 1e9);
}

}  // namespace

TEST(SelectNextHop, DirectWhenDestinationIsNeighbor) {
  const NeighborView view{Nb(1, 100, 0), Nb(9, 50, 0)};
  const NextHop h = SelectNextHop(Self(0, 0), MakeNodeId(9), {50, 0}, view);
  EXPECT_EQ(h.kind, NextHop::Kind::kDirect);
  EXPECT_EQ(h.node, MakeNodeId(9));
}

TEST(SelectNextHop, FarthestWithProgress) {
  // Node 2 is farther from the sender but moves away from the destination.
  const NeighborView view{Nb(1, 200, 0), Nb(2, -250, 0), Nb(3, 100, 10)};
  const NextHop h = SelectNextHop(Self(0, 0), MakeNodeId(9), {1000, 0}, view);
  EXPECT_EQ(h.kind, NextHop::Kind::kRelay);
  EXPECT_EQ(h.node, MakeNodeId(1));
  EXPECT_EQ(h.tied, std::vector<NodeId>{MakeNodeId(1)});
}

TEST(SelectNextHop, TieBrokenByEnergyThenId) {
  const NeighborView view{Nb(4, 0, 200, 0.3), Nb(2, 200, 0, 0.3), Nb(3, 0, -200, 0.1)};
  const NextHop h = SelectNextHop(Self(0, 0), MakeNodeId(9), {500, 500}, view);
  EXPECT_EQ(h.node, MakeNodeId(2));
  EXPECT_EQ(h.tied, (std::vector<NodeId>{MakeNodeId(2), MakeNodeId(4)}));

  const NeighborView richer{Nb(4, 0, 200, 0.5), Nb(2, 200, 0, 0.3)};
  EXPECT_EQ(SelectNextHop(Self(0, 0), MakeNodeId(9), {500, 500}, richer).node, MakeNodeId(4));
}

TEST(SelectNextHop, NoProgressWhenEveryoneIsFarther) {
  const NeighborView view{Nb(1, -100, 0), Nb(2, 0, 100)};
  EXPECT_EQ(SelectNextHop(Self(0, 0), MakeNodeId(9), {100, -1000}, view).kind, NextHop::Kind::kNoProgress);
  EXPECT_EQ(SelectNextHop(Self(0, 0), MakeNodeId(9), {1000, 0}, NeighborView{Nb(1, -100, 0)}).kind,
            NextHop::Kind::kNoProgress);
  EXPECT_EQ(SelectNextHop(Self(0, 0), MakeNodeId(9), {1000, 0}, {}).kind, NextHop::Kind::kNoProgress);
}

// Exhaustive argmax over every neighbor on integer grids, where equal
// distances and equal energies are common.
TEST(SelectNextHopOracle, RandomTopologies) {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> coord(0, 20);
  std::uniform_int_distribution<int> level(1, 3);
  std::size_t ties = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<Position> pos(30);
    std::vector<double> energy(30);
    for (std::size_t i = 0; i < 30; ++i) {
      pos[i] = {coord(rng) * 50.0, coord(rng) * 50.0};
      energy[i] = 0.1 * level(rng);
    }
    const std::size_t self = 0;
    const std::size_t dst = 1 + rng() % 29;
    const double range = 300;
    NeighborView view;
    for (std::size_t i = 0; i < 30; ++i) {
      if (i != self && std::hypot(pos[i].x - pos[self].x, pos[i].y - pos[self].y) <= range) {
        view.push_back({MakeNodeId(i), pos[i], energy[i]});
      }
    }
    NodeState me;
    me.id = MakeNodeId(self);
    me.pos = pos[self];
    me.range_m = range;
    const NextHop got = SelectNextHop(me, MakeNodeId(dst), pos[dst], view);

    bool dst_near = false;
    for (const auto& n : view) dst_near |= n.id == MakeNodeId(dst);
    if (dst_near) {
      ASSERT_EQ(got.kind, NextHop::Kind::kDirect);
      ASSERT_EQ(got.node, MakeNodeId(dst));
      continue;
    }
    std::vector<const NeighborInfo*> ok;
    for (const auto& n : view) {
      if (Nm(n.pos, pos[dst]) < Nm(pos[self], pos[dst])) ok.push_back(&n);
    }
    if (ok.empty()) {
      ASSERT_EQ(got.kind, NextHop::Kind::kNoProgress);
      continue;
    }
    // a beats b: farther, then more energy, then lower id
    auto beats = [&](const NeighborInfo* a, const NeighborInfo* b) {
      const long long da = Nm(pos[self], a->pos), db = Nm(pos[self], b->pos);
      if (da != db) return da > db;
      if (a->last_known_energy_j != b->last_known_energy_j) return a->last_known_energy_j > b->last_known_energy_j;
      return Index(a->id) < Index(b->id);
    };
    const NeighborInfo* winner = nullptr;
    for (const NeighborInfo* c : ok) {
      bool all = true;
      for (const NeighborInfo* o : ok) all &= (o == c) || beats(c, o);
      if (all) winner = c;
    }
    ASSERT_NE(winner, nullptr);
    ASSERT_EQ(got.kind, NextHop::Kind::kRelay);
    ASSERT_EQ(got.node, winner->id);
    std::size_t tied = 0;
    for (const NeighborInfo* c : ok) tied += Nm(pos[self], c->pos) == Nm(pos[self], winner->pos);
    ASSERT_EQ(got.tied.size(), tied);
    ties += tied > 1;
  }
  EXPECT_GT(ties, 20u);  // the grid must actually exercise the tie path
}
