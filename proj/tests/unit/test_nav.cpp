#include <gtest/gtest.h>

#include <random>

#include "semnav/error.hpp"
#include "semnav/nav.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace semnav;

namespace {

CostMap random_costs(int n, std::mt19937_64& rng) {
  std::bernoulli_distribution blocked(0.25), unknown(0.3);
  CostMap m{Grid<bool>(n, n, false), Grid<double>(n, n, 1.0)};
  for (std::size_t i = 0; i < m.blocked.size(); ++i) {
    m.blocked.values()[i] = blocked(rng);
    if (unknown(rng)) m.cost.values()[i] = 2.0;
  }
  return m;
}

}  // namespace

TEST(Planner, EmptyMapGivesManhattanPaths) {
  const CostMap m{Grid<bool>(8, 8, false), Grid<double>(8, 8, 1.0)};
  const auto p = plan_path(m, {1, 1}, {6, 4});
  ASSERT_TRUE(p);
  EXPECT_EQ(p->cost, 8.0);
  EXPECT_EQ(p->cells.size(), 9u);
  EXPECT_EQ(p->cells.front(), (Cell{1, 1}));
  EXPECT_EQ(p->cells.back(), (Cell{6, 4}));
}

TEST(Planner, CostEqualsDijkstraOnRandomMaps) {
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<int> pos(0, 13);
  int compared = 0;
  for (int trial = 0; trial < 100; ++trial) {
    CostMap m = random_costs(14, rng);
    const Cell from{pos(rng), pos(rng)}, to{pos(rng), pos(rng)};
    if (from == to) continue;
    m.blocked[from] = 0;
    const auto got = plan_path(m, from, to);
    const auto expect = oracle::dijkstra(m.blocked, m.cost, from, to);
    ASSERT_EQ(got.has_value(), expect.has_value()) << "trial " << trial;
    if (!got) continue;
    ++compared;
    EXPECT_EQ(got->cost, *expect);
    double walked = 0.0;
    for (std::size_t i = 1; i < got->cells.size(); ++i) {
      EXPECT_EQ(manhattan(got->cells[i - 1], got->cells[i]), 1);
      const Cell c = got->cells[i];
      walked += (c == to && m.blocked[c]) ? 1.0 : m.cost[c];
      if (!(c == to)) EXPECT_FALSE(m.blocked[c]);
    }
    EXPECT_EQ(walked, got->cost);
  }
  EXPECT_GT(compared, 50);
}

TEST(Planner, EnclosedGoalIsUnreachable) {
  CostMap m{Grid<bool>(7, 7, false), Grid<double>(7, 7, 1.0)};
  for (int r = 2; r <= 4; ++r)
    for (int c = 2; c <= 4; ++c) m.blocked(r, c) = true;
  m.blocked(3, 3) = false;
  EXPECT_FALSE(plan_path(m, {0, 0}, {3, 3}).has_value());
  const auto edge = plan_path(m, {0, 0}, {2, 2});
  ASSERT_TRUE(edge);
  EXPECT_EQ(edge->cost, 4.0);
  EXPECT_THROW(plan_path(m, {0, 0}, {0, 0}), PreconditionError);
  EXPECT_THROW(plan_path(m, {0, 0}, {7, 0}), PreconditionError);
}

TEST(Planner, BeliefCostsFollowThresholdAndUnknownRules) {
  GlobalBeliefMap b(3, 3, 9);
  Volume occ(3, 1, 1, 0.0);
  occ(occupancy::kOccupied, 0, 0) = 0.7;
  occ(occupancy::kFree, 0, 0) = 0.3;
  b.register_occupancy(occ, {{0, 0}, Heading::north});
  occ(occupancy::kOccupied, 0, 0) = 0.1;
  occ(occupancy::kFree, 0, 0) = 0.9;
  b.register_occupancy(occ, {{1, 1}, Heading::north});
  occ(occupancy::kUnknown, 0, 0) = 0.5;
  occ(occupancy::kOccupied, 0, 0) = 0.2;
  occ(occupancy::kFree, 0, 0) = 0.3;
  b.register_occupancy(occ, {{2, 2}, Heading::north});
  const CostMap m = make_cost_map(b, PlannerConfig{});
  EXPECT_TRUE(m.blocked(0, 0));
  EXPECT_FALSE(m.blocked(1, 1));
  EXPECT_EQ(m.cost(1, 1), 1.0);
  EXPECT_EQ(m.cost(2, 2), 2.0);
  EXPECT_EQ(m.cost(0, 2), 2.0);
  EXPECT_EQ(traversable(m)(0, 0), false);
  EXPECT_THROW((PlannerConfig{1.0, 2.0}.validate()), ConfigError);
  EXPECT_THROW((PlannerConfig{0.5, 0.5}.validate()), ConfigError);
}

TEST(Dynamics, ForwardIntoAWallCountsACollision) {
  const GridWorld w = fixture::open_room(3, 3);
  AgentState a{{{1, 1}, Heading::north}};
  a = step(a, Action::forward, w);
  EXPECT_EQ(a.pose.cell, (Cell{1, 1}));
  EXPECT_EQ(a.collision_count, 1);
  EXPECT_EQ(a.last_collision, (Cell{0, 1}));
  EXPECT_EQ(a.steps_taken, 1);
}

TEST(Dynamics, TurnsFormARotationGroupAndForwardAdvances) {
  const GridWorld w = fixture::open_room(5, 5);
  AgentState a{{{3, 3}, Heading::east}};
  for (int i = 0; i < 4; ++i) a = step(a, Action::turn_left, w);
  EXPECT_EQ(a.pose.heading, Heading::east);
  EXPECT_EQ(a.pose.cell, (Cell{3, 3}));
  a = step(a, Action::forward, w);
  EXPECT_EQ(a.pose.cell, (Cell{3, 4}));
  EXPECT_EQ(a.forward_moves, 1);
  a = step(a, Action::turn_right, w);
  EXPECT_EQ(a.pose.heading, Heading::south);
  a = step(a, Action::stop, w);
  EXPECT_TRUE(a.stopped);
  EXPECT_THROW(step(a, Action::forward, w), PreconditionError);
}

TEST(PathFollowing, NextActionConventions) {
  const Pose p{{5, 5}, Heading::north};
  EXPECT_EQ(path_to_action({{5, 5}, {4, 5}}, p), Action::forward);
  EXPECT_EQ(path_to_action({{5, 5}, {6, 5}}, p), Action::turn_left);
  EXPECT_EQ(path_to_action({{5, 5}, {5, 6}}, p), Action::turn_right);
  EXPECT_EQ(path_to_action({{5, 5}, {5, 4}}, p), Action::turn_left);
  EXPECT_THROW(path_to_action({}, p), PreconditionError);
  EXPECT_THROW(path_to_action({{5, 5}}, p), PreconditionError);
  EXPECT_THROW(path_to_action({{4, 4}, {4, 5}}, p), PreconditionError);
}

TEST(PathFollowing, ExecutionOnAMatchingMapTakesPathPlusTurns) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const GridWorld w = generate_world(seed, WorldConfig{});
    const auto free = w.free_cells();
    const Cell from = free[free.size() / 5], to = free[free.size() * 4 / 5];
    const auto plan = plan_path(make_cost_map(w), from, to);
    ASSERT_TRUE(plan);
    AgentState a{{from, Heading::north}};
    // Turns needed: one per heading change, two for a reversal.
    int turns = 0;
    Heading h = Heading::north;
    for (std::size_t i = 1; i < plan->cells.size(); ++i) {
      const Cell d{plan->cells[i].row - plan->cells[i - 1].row, plan->cells[i].col - plan->cells[i - 1].col};
      Heading want = h;
      for (Heading c : {Heading::north, Heading::east, Heading::south, Heading::west})
        if (heading_step(c) == d) want = c;
      const int diff = (static_cast<int>(want) - static_cast<int>(h) + 4) % 4;
      turns += diff == 2 ? 2 : (diff == 0 ? 0 : 1);
      h = want;
    }
    std::size_t at = 0;
    while (a.pose.cell != to) {
      const std::vector<Cell> rest(plan->cells.begin() + static_cast<long>(at), plan->cells.end());
      const AgentState next = step(a, path_to_action(rest, a.pose), w);
      EXPECT_LE(manhattan(next.pose.cell, a.pose.cell), 1);
      if (next.pose.cell != a.pose.cell) {
        EXPECT_EQ(next.pose.heading, a.pose.heading);
        ++at;
      }
      a = next;
      ASSERT_LT(a.steps_taken, 10000);
    }
    EXPECT_EQ(a.collision_count, 0);
    EXPECT_EQ(a.steps_taken, static_cast<int>(plan->cells.size()) - 1 + turns);
  }
}
