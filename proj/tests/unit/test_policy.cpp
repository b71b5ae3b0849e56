#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "semnav/error.hpp"
#include "semnav/policy.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace semnav;

namespace {

constexpr int kTarget = 4;

// Fully observed map with the given target probability, class std-dev and
// occupancy per cell; other classes share the remaining mass.
GlobalBeliefMap make_map(const Grid<double>& mu, const Grid<double>& sigma, const Grid<double>& p_occ) {
  const int rows = mu.rows(), cols = mu.cols(), k = 9;
  const int size = 2 * std::max(rows, cols) + 1, half = size / 2;
  const Pose centre{{rows / 2, cols / 2}, Heading::north};
  Volume sem(k, size, size, 1.0 / k), var(k, size, size, 0.0), occ(3, size, size, 0.0);
  for (int i = 0; i < size; ++i)
    for (int j = 0; j < size; ++j) {
      occ(occupancy::kFree, i, j) = 1.0;
      const Cell c{i - half + rows / 2, j - half + cols / 2};
      if (!mu.contains(c)) continue;
      for (int q = 0; q < k; ++q) sem(q, i, j) = (1.0 - mu[c]) / (k - 1);
      sem(kTarget, i, j) = mu[c];
      var(kTarget, i, j) = sigma[c] * sigma[c];
      occ(occupancy::kOccupied, i, j) = p_occ[c];
      occ(occupancy::kFree, i, j) = 1.0 - p_occ[c];
    }
  GlobalBeliefMap m(rows, cols, k);
  m.register_semantics(sem, centre);
  m.register_uncertainty(var, centre);
  m.register_occupancy(occ, centre);
  return m;
}

GlobalBeliefMap open_map(const Grid<double>& mu, const Grid<double>& sigma) {
  return make_map(mu, sigma, Grid<double>(mu.rows(), mu.cols(), 0.0));
}

StrategyConfig strategy(StrategyKind kind, double a1 = 0.1, double a2 = 0.75) { return {kind, a1, a2}; }

Grid<bool> oracle_eligible(const GlobalBeliefMap& m, Cell agent, const PlannerConfig& planner) {
  CostMap costs = make_cost_map(m, planner);
  costs.blocked[agent] = 0;
  return oracle::eligible(costs, agent);
}

const StrategyKind kScored[] = {StrategyKind::upper, StrategyKind::lower, StrategyKind::mixed, StrategyKind::mean};

}  // namespace

TEST(Scores, HandExampleUpperBound) {
  Grid<double> mu(2, 3, 0.0), sigma(2, 3, 0.0);
  mu(0, 0) = 0.1, mu(0, 1) = 0.5, mu(0, 2) = 0.3;
  sigma(0, 0) = 0.9, sigma(0, 1) = 0.0, sigma(0, 2) = 0.2;
  const GlobalBeliefMap m = open_map(mu, sigma);
  const Grid<double> s = score_cells(m, kTarget, strategy(StrategyKind::upper));
  EXPECT_NEAR(s(0, 0), 0.19, 1e-12);
  EXPECT_NEAR(s(0, 1), 0.50, 1e-12);
  EXPECT_NEAR(s(0, 2), 0.32, 1e-12);
  const GoalChoice g = select_goal(m, kTarget, strategy(StrategyKind::upper), {{1, 1}, Heading::north}, PlannerConfig{});
  EXPECT_EQ(g.cell, (Cell{0, 1}));
}

TEST(Scores, ZeroWidthCollapsesEveryStrategyToTheMean) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 10; ++trial) {
    const GlobalBeliefMap m = fixture::random_belief(15, 15, rng);
    const Grid<double> mean = score_cells(m, kTarget, strategy(StrategyKind::mean, 0.0));
    const Pose agent{{7, 7}, Heading::north};
    const Cell expect = select_goal(m, kTarget, strategy(StrategyKind::mean, 0.0), agent, PlannerConfig{}).cell;
    for (StrategyKind k : kScored) {
      EXPECT_EQ(score_cells(m, kTarget, strategy(k, 0.0)), mean);
      EXPECT_EQ(select_goal(m, kTarget, strategy(k, 0.0), agent, PlannerConfig{}).cell, expect);
    }
  }
}

TEST(Scores, MixedBranchArithmetic) {
  Grid<double> mu(1, 3, 0.0), sigma(1, 3, 0.1);
  mu(0, 0) = 0.8, mu(0, 1) = 0.5;
  const GlobalBeliefMap m = open_map(mu, sigma);
  const Grid<double> s = score_cells(m, kTarget, strategy(StrategyKind::mixed));
  EXPECT_NEAR(s(0, 0), 0.79, 1e-12);
  EXPECT_NEAR(s(0, 1), 0.51, 1e-12);
  // At the switch point the upper branch applies.
  const double at = m.semantic_probability(kTarget, {0, 2});
  const Grid<double> boundary = score_cells(m, kTarget, strategy(StrategyKind::mixed, 0.1, at));
  EXPECT_EQ(boundary(0, 2), at + 0.1 * std::sqrt(m.uncertainty()(kTarget, 0, 2)));
}

TEST(Scores, MixedEqualsTheRightBoundEverywhere) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 10; ++trial) {
    const GlobalBeliefMap m = fixture::random_belief(20, 20, rng);
    for (double a2 : {0.05, 0.11, 0.3, 0.75}) {
      const Grid<double> mixed = score_cells(m, kTarget, strategy(StrategyKind::mixed, 0.4, a2));
      const Grid<double> upper = score_cells(m, kTarget, strategy(StrategyKind::upper, 0.4));
      const Grid<double> lower = score_cells(m, kTarget, strategy(StrategyKind::lower, 0.4));
      const auto mu = m.semantic_belief().plane(kTarget);
      for (std::size_t i = 0; i < mixed.size(); ++i) {
        if (mu[i] > a2) EXPECT_EQ(mixed.values()[i], lower.values()[i]);
        if (mu[i] < a2) EXPECT_EQ(mixed.values()[i], upper.values()[i]);
      }
    }
  }
}

TEST(Scores, InvalidRequestsAreRejected) {
  const GlobalBeliefMap m(5, 5, 9);
  EXPECT_THROW(score_cells(m, semantic::kWall, strategy(StrategyKind::upper)), PreconditionError);
  EXPECT_THROW(score_cells(m, 12, strategy(StrategyKind::upper)), PreconditionError);
  EXPECT_THROW(score_cells(m, kTarget, strategy(StrategyKind::fbe)), PreconditionError);
  EXPECT_THROW(parse_strategy("greedy"), ConfigError);
  EXPECT_THROW(strategy(StrategyKind::mixed, 0.1, 1.5).validate(), ConfigError);
  for (StrategyKind k : kScored) EXPECT_EQ(parse_strategy(strategy_name(k)), k);
}

TEST(GoalSelection, MatchesTheBruteForceOracle) {
  std::mt19937_64 rng(3);
  const PlannerConfig planner;
  for (int trial = 0; trial < 25; ++trial) {
    const GlobalBeliefMap m = fixture::random_belief(18, 18, rng, 0.35);
    std::uniform_int_distribution<int> pos(0, 17);
    const Pose agent{{pos(rng), pos(rng)}, Heading::north};
    const Grid<bool> eligible = oracle_eligible(m, agent.cell, planner);
    EXPECT_EQ(eligible_cells(m, agent, planner), eligible);
    for (StrategyKind k : kScored) {
      const auto expect = oracle::argmax(score_cells(m, kTarget, strategy(k)), eligible);
      if (!expect) {
        EXPECT_THROW(select_goal(m, kTarget, strategy(k), agent, planner), GoalSelectionError);
        continue;
      }
      EXPECT_EQ(select_goal(m, kTarget, strategy(k), agent, planner).cell, eligible.cell_at(*expect));
    }
  }
}

TEST(GoalSelection, TiesGoToTheLowestRowMajorIndex) {
  Grid<double> mu(4, 4, 0.1), sigma(4, 4, 0.0);
  mu(2, 1) = 0.6;
  mu(1, 3) = 0.6;
  const GlobalBeliefMap m = open_map(mu, sigma);
  EXPECT_EQ(select_goal(m, kTarget, strategy(StrategyKind::mean), {{3, 3}, Heading::north}, PlannerConfig{}).cell,
            (Cell{1, 3}));
}

TEST(GoalSelection, ExcludedCellsAreSkipped) {
  Grid<double> mu(4, 4, 0.1), sigma(4, 4, 0.0);
  mu(2, 1) = 0.6;
  mu(1, 3) = 0.5;
  const GlobalBeliefMap m = open_map(mu, sigma);
  const std::set<Cell> excluded{{2, 1}};
  EXPECT_EQ(select_goal(m, kTarget, strategy(StrategyKind::mean), {{3, 3}, Heading::north}, PlannerConfig{}, nullptr,
                        excluded)
                .cell,
            (Cell{1, 3}));
}

TEST(GoalSelection, ObstaclesAreEligibleOnlyAtTheReachableBoundary) {
  Grid<double> mu(5, 5, 0.1), sigma(5, 5, 0.0), occ(5, 5, 0.0);
  // A closed box of obstacles around (2,2); the centre is the best cell but unreachable.
  for (int r = 1; r <= 3; ++r)
    for (int c = 1; c <= 3; ++c) occ(r, c) = 0.9;
  occ(2, 2) = 0.0;
  mu(2, 2) = 0.9;
  mu(1, 2) = 0.5;
  const GlobalBeliefMap m = make_map(mu, sigma, occ);
  const Pose agent{{0, 0}, Heading::north};
  const Grid<bool> eligible = eligible_cells(m, agent, PlannerConfig{});
  EXPECT_FALSE(eligible(2, 2));
  EXPECT_TRUE(eligible(1, 2));
  EXPECT_FALSE(eligible(0, 0));
  EXPECT_EQ(select_goal(m, kTarget, strategy(StrategyKind::mean), agent, PlannerConfig{}).cell, (Cell{1, 2}));
}

TEST(GoalSelection, WideningTheBoundElsewhereNeverPicksAWorseCell) {
  std::mt19937_64 rng(4);
  const PlannerConfig planner;
  for (int trial = 0; trial < 20; ++trial) {
    GlobalBeliefMap m = fixture::random_belief(12, 12, rng);
    const Pose agent{{6, 6}, Heading::north};
    const auto before = select_goal(m, kTarget, strategy(StrategyKind::upper), agent, planner);
    std::uniform_int_distribution<int> pos(0, 11);
    Cell bump{pos(rng), pos(rng)};
    if (bump == before.cell) continue;
    Volume var(9, 1, 1, 0.0);
    for (int k = 0; k < 9; ++k) var(k, 0, 0) = m.uncertainty()(k, bump.row, bump.col);
    var(kTarget, 0, 0) += 0.5;
    m.register_uncertainty(var, {bump, Heading::north});
    const auto after = select_goal(m, kTarget, strategy(StrategyKind::upper), agent, planner);
    EXPECT_TRUE(after.cell == before.cell || after.cell == bump);
    EXPECT_GE(after.score, before.score);
  }
}

TEST(GoalSelection, IsDeterministic) {
  std::mt19937_64 a(5), b(5);
  const GlobalBeliefMap ma = fixture::random_belief(14, 14, a), mb = fixture::random_belief(14, 14, b);
  for (StrategyKind k : kScored)
    EXPECT_EQ(select_goal(ma, kTarget, strategy(k), {{3, 3}, Heading::east}, PlannerConfig{}).cell,
              select_goal(mb, kTarget, strategy(k), {{3, 3}, Heading::east}, PlannerConfig{}).cell);
}

TEST(Frontier, FullyObservedMapHasNoFrontier) {
  std::mt19937_64 rng(6);
  const GlobalBeliefMap m = fixture::random_belief(10, 10, rng);
  try {
    select_goal(m, kTarget, strategy(StrategyKind::fbe), {{5, 5}, Heading::north}, PlannerConfig{});
    FAIL() << "expected a goal selection error";
  } catch (const GoalSelectionError& e) {
    EXPECT_NE(std::string(e.what()).find("no frontier"), std::string::npos);
  }
}

TEST(Frontier, NearestFrontierByBelievedGeodesic) {
  GlobalBeliefMap m(9, 9, 9);
  Volume occ(3, 5, 5, 0.0);
  for (double& x : occ.plane(occupancy::kFree)) x = 1.0;
  m.register_occupancy(occ, {{4, 2}, Heading::north});
  const Grid<bool> f = frontier_cells(m);
  EXPECT_TRUE(f(4, 4));
  EXPECT_TRUE(f(2, 2));
  EXPECT_FALSE(f(4, 2));
  const GoalChoice g = select_goal(m, kTarget, strategy(StrategyKind::fbe), {{4, 3}, Heading::north}, PlannerConfig{});
  EXPECT_EQ(g.cell, (Cell{4, 4}));
  EXPECT_EQ(g.score, 1.0);
}

TEST(RandomGoal, DrawsEligibleCellsAndNeedsAGenerator) {
  std::mt19937_64 rng(7);
  const GlobalBeliefMap m = fixture::random_belief(10, 10, rng, 0.3);
  const Pose agent{{5, 5}, Heading::north};
  const Grid<bool> eligible = eligible_cells(m, agent, PlannerConfig{});
  for (int t = 0; t < 50; ++t) {
    const Cell c = select_goal(m, kTarget, strategy(StrategyKind::random), agent, PlannerConfig{}, &rng).cell;
    EXPECT_TRUE(eligible[c]);
  }
  EXPECT_THROW(select_goal(m, kTarget, strategy(StrategyKind::random), agent, PlannerConfig{}), PreconditionError);
}

TEST(ActiveTarget, SinglePositiveVarianceCell) {
  Grid<double> mu(6, 6, 0.2), sigma(6, 6, 0.0);
  sigma(4, 1) = 0.3;
  const GlobalBeliefMap m = open_map(mu, sigma);
  EXPECT_EQ(select_active_target(m, ActiveObjective::variance, {{0, 0}, Heading::north}, PlannerConfig{}).cell,
            (Cell{4, 1}));
}

TEST(ActiveTarget, MatchesTheBruteForceOracle) {
  std::mt19937_64 rng(8);
  const PlannerConfig planner;
  for (int trial = 0; trial < 15; ++trial) {
    const GlobalBeliefMap m = fixture::random_belief(16, 16, rng);
    const Pose agent{{8, 8}, Heading::north};
    const Grid<bool> eligible = oracle_eligible(m, agent.cell, planner);
    Grid<double> variance(16, 16, 0.0);
    for (int r = 0; r < 16; ++r)
      for (int c = 0; c < 16; ++c) {
        for (int k = 0; k < 9; ++k) variance(r, c) += m.uncertainty()(k, r, c);
        variance(r, c) /= 9.0;
      }
    const std::pair<ActiveObjective, const Grid<double>*> cases[] = {
        {ActiveObjective::variance, &variance}, {ActiveObjective::entropy, &m.entropy()}, {ActiveObjective::bald, &m.bald()}};
    for (const auto& [objective, field] : cases) {
      const auto expect = oracle::argmax(*field, eligible);
      ASSERT_TRUE(expect);
      EXPECT_EQ(select_active_target(m, objective, agent, planner).cell, eligible.cell_at(*expect));
    }
  }
}

TEST(ActiveTarget, ConstantEntropyPicksTheLowestIndex) {
  GlobalBeliefMap m(6, 6, 9);
  Volume occ(3, 13, 13, 0.0);
  for (double& x : occ.plane(occupancy::kFree)) x = 1.0;
  m.register_occupancy(occ, {{3, 3}, Heading::north});
  m.register_entropy(Grid<double>(13, 13, std::log(9.0)), {{3, 3}, Heading::north});
  EXPECT_EQ(select_active_target(m, ActiveObjective::entropy, {{0, 0}, Heading::north}, PlannerConfig{}).cell,
            (Cell{0, 1}));
}

TEST(ActiveTarget, ZeroUncertaintyFallsBackToFrontier) {
  GlobalBeliefMap m(9, 9, 9);
  Volume occ(3, 5, 5, 0.0);
  for (double& x : occ.plane(occupancy::kFree)) x = 1.0;
  m.register_occupancy(occ, {{4, 4}, Heading::north});
  const GoalChoice g = select_active_target(m, ActiveObjective::variance, {{4, 4}, Heading::north}, PlannerConfig{});
  EXPECT_TRUE(frontier_cells(m)[g.cell]);
  EXPECT_EQ(g.score, 2.0);
  EXPECT_THROW(parse_objective("mutual"), ConfigError);
}

TEST(StopCheck, ThresholdPathAndDistance) {
  Grid<double> mu(7, 7, 0.1), sigma(7, 7, 0.0);
  const NavConfig nav;
  const PlannerConfig planner;
  const Pose agent{{3, 0}, Heading::east};
  const std::vector<Cell> path{{3, 0}, {3, 1}, {3, 2}, {3, 3}, {3, 4}, {3, 5}, {3, 6}};
  EXPECT_FALSE(stop_check(open_map(mu, sigma), kTarget, agent, nav, path, planner));
  mu(3, 1) = 0.9;
  EXPECT_TRUE(stop_check(open_map(mu, sigma), kTarget, agent, nav, path, planner));
  mu(3, 1) = 0.1;
  mu(1, 1) = 0.95;
  EXPECT_FALSE(stop_check(open_map(mu, sigma), kTarget, agent, nav, path, planner));
  mu(1, 1) = 0.1;
  mu(3, 5) = 0.95;
  EXPECT_FALSE(stop_check(open_map(mu, sigma), kTarget, agent, nav, path, planner));
  mu(3, 4) = 0.95;
  EXPECT_TRUE(stop_check(open_map(mu, sigma), kTarget, agent, nav, path, planner));
  mu(3, 4) = 0.74;
  EXPECT_FALSE(stop_check(open_map(mu, sigma), kTarget, agent, nav, path, planner));
}

TEST(StopCheck, TrueMapDistanceVariant) {
  Grid<double> mu(7, 7, 0.1), sigma(7, 7, 0.0);
  mu(3, 2) = 0.9;
  const GlobalBeliefMap m = open_map(mu, sigma);
  // A wall between agent and target on the true map forces a detour.
  const GridWorld w = fixture::world_from_ascii({
      ".......",
      ".......",
      ".#.....",
      ".#.....",
      ".#.....",
      ".#.....",
      ".......",
  });
  NavConfig nav;
  nav.stop_distance_on_true_map = true;
  const Pose agent{{3, 0}, Heading::east};
  const std::vector<Cell> path{{3, 0}, {2, 0}, {1, 0}, {1, 1}, {1, 2}, {2, 2}, {3, 2}};
  EXPECT_FALSE(stop_check(m, kTarget, agent, nav, path, PlannerConfig{}, &w));
  nav.stop_distance_on_true_map = false;
  EXPECT_TRUE(stop_check(m, kTarget, agent, nav, path, PlannerConfig{}));
  nav.stop_distance_on_true_map = true;
  EXPECT_THROW(stop_check(m, kTarget, agent, nav, path, PlannerConfig{}), PreconditionError);
}
