#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "semnav/error.hpp"
#include "semnav/metrics.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace semnav;

TEST(Success, DefinitionBoundaries) {
  EXPECT_TRUE(success({false, 5, 5, 5, 0, 10, true}, 10, 500));
  EXPECT_FALSE(success({false, 5, 5, 5, 3, 500, false}, 10, 500));
  EXPECT_TRUE(success({false, 5, 5, 5, 10, 20, true}, 10, 500));
  EXPECT_FALSE(success({false, 5, 5, 5, 11, 20, true}, 10, 500));
  EXPECT_FALSE(success({false, 5, 5, 5, 0, 501, true}, 10, 500));
}

TEST(Spl, PerEpisodeTerms) {
  EXPECT_EQ(spl_term({true, 10, 10, 10, 0, 12, true}), 1.0);
  EXPECT_EQ(spl_term({true, 20, 10, 10, 0, 25, true}), 0.5);
  EXPECT_EQ(spl_term({false, 20, 10, 10, 0, 25, false}), 0.0);
  EXPECT_EQ(spl_term({true, 5, 10, 10, 0, 6, true}), 1.0);
}

TEST(SoftSpl, PerEpisodeTerms) {
  EXPECT_EQ(soft_spl_term({true, 10, 10, 10, 0, 12, true}), 1.0);
  EXPECT_EQ(soft_spl_term({false, 0, 10, 10, 10, 500, false}), 0.0);
  EXPECT_EQ(soft_spl_term({false, 20, 10, 10, 5, 500, false}), 0.25);
  EXPECT_EQ(soft_spl_term({false, 20, 10, 10, 15, 500, false}), 0.0);
  // A successful optimal episode scores the same under both.
  const EpisodeResult optimal{true, 7, 7, 7, 0, 9, true};
  EXPECT_EQ(soft_spl_term(optimal), spl_term(optimal));
}

TEST(Aggregates, FiveEpisodeTableExact) {
  const auto eps = fixture::five_episodes();
  // Worked by hand: SPL terms 1, .5, 0, 0, 0; SoftSPL terms 1, .25, .25, 0, 0.
  const NavSummary s = summarize(eps, 0.1);
  EXPECT_DOUBLE_EQ(s.spl.mean, 0.3);
  EXPECT_DOUBLE_EQ(s.soft_spl.mean, 0.3);
  EXPECT_DOUBLE_EQ(s.success.mean, 0.4);
  EXPECT_DOUBLE_EQ(s.dts_cells.mean, 5.8);
  EXPECT_NEAR(s.dts_meters.mean, 0.58, 1e-12);
  EXPECT_EQ(s.spl.count, 5);
  EXPECT_EQ(s.spl.excluded, 0);
  // Sample sd of {1,1,0,0,0} is sqrt(0.3).
  EXPECT_NEAR(s.success.ci95, 1.96 * std::sqrt(0.3) / std::sqrt(5.0), 1e-12);
  for (const EpisodeResult& e : eps) EXPECT_EQ(e.success, success(e, 10, 500));
  EXPECT_LE(s.spl.mean, s.success.mean);
}

TEST(Aggregates, ZeroDenominatorsAreExcludedAndCounted) {
  std::vector<EpisodeResult> eps = fixture::five_episodes();
  eps.push_back({true, 0, 0, 0, 0, 1, true});
  const Aggregate a = spl(eps);
  EXPECT_EQ(a.count, 5);
  EXPECT_EQ(a.excluded, 1);
  EXPECT_DOUBLE_EQ(a.mean, 0.3);
  EXPECT_EQ(soft_spl(eps).excluded, 1);
  EXPECT_EQ(success_rate(eps).count, 6);
}

TEST(Aggregates, SplNeverExceedsSuccessOnRandomResults) {
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<int> len(1, 60);
  std::bernoulli_distribution coin(0.5);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<EpisodeResult> eps;
    for (int i = 0; i < 20; ++i) {
      const int l = len(rng);
      const bool ok = coin(rng);
      eps.push_back({ok, len(rng), l, l, ok ? 0 : len(rng), 100, ok});
    }
    EXPECT_LE(spl(eps).mean, success_rate(eps).mean + 1e-15);
    for (const auto& e : eps) {
      EXPECT_LE(spl_term(e), e.success ? 1.0 : 0.0);
      EXPECT_GE(soft_spl_term(e), 0.0);
      EXPECT_LE(soft_spl_term(e), 1.0);
    }
  }
}

TEST(MapMetrics, PerfectPrediction) {
  Grid<int> truth(4, 4);
  for (int i = 0; i < 16; ++i) truth.values()[static_cast<std::size_t>(i)] = 1 + i % 3;
  const MapMetrics m = map_metrics({truth}, {truth}, 4);
  EXPECT_EQ(m.overall_accuracy, 1.0);
  for (const ClassScores& c : m.per_class) {
    if (!c.present) continue;
    EXPECT_EQ(c.iou, 1.0);
    EXPECT_EQ(c.f1, 1.0);
    EXPECT_EQ(c.accuracy, 1.0);
  }
  EXPECT_EQ(m.mean_iou, 1.0);
}

TEST(MapMetrics, HalfCoverageWithoutFalsePositives) {
  Grid<int> truth(2, 4, 1), pred(2, 4, 1);
  for (int c = 0; c < 4; ++c) truth(0, c) = 3;
  pred(0, 0) = 3;
  pred(0, 1) = 3;
  pred(0, 2) = 0;
  pred(0, 3) = 0;
  const MapMetrics m = map_metrics({pred}, {truth}, 4);
  const ClassScores& c3 = m.per_class[3];
  EXPECT_DOUBLE_EQ(c3.iou, 0.5);
  EXPECT_DOUBLE_EQ(c3.f1, 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(c3.accuracy, 0.5);
  const auto counts = oracle::confusion(pred, truth, 3);
  EXPECT_EQ(counts.tp, 2);
  EXPECT_EQ(counts.fp, 0);
  EXPECT_EQ(counts.fn, 2);
}

TEST(MapMetrics, AllUnknownPredictionScoresZero) {
  Grid<int> truth(3, 3, 2), pred(3, 3, 0);
  truth(1, 1) = 5;
  const MapMetrics m = map_metrics({pred}, {truth}, 9, {0});
  EXPECT_EQ(m.overall_accuracy, 0.0);
  EXPECT_EQ(m.per_class[2].accuracy, 0.0);
  EXPECT_EQ(m.per_class[5].accuracy, 0.0);
  EXPECT_EQ(m.mean_accuracy, 0.0);
  EXPECT_EQ(m.mean_iou, 0.0);
}

TEST(MapMetrics, AbsentClassesLeaveTheMeans) {
  Grid<int> truth(2, 2, 1), pred(2, 2, 1);
  pred(0, 0) = 4;
  truth(1, 1) = 2;
  pred(1, 1) = 2;
  const MapMetrics m = map_metrics({pred}, {truth}, 9);
  EXPECT_FALSE(m.per_class[4].present);
  EXPECT_FALSE(m.per_class[7].present);
  // Classes 1 and 2 only: IoU 2/3 and 1.
  EXPECT_DOUBLE_EQ(m.mean_iou, (2.0 / 3.0 + 1.0) / 2.0);
}

TEST(MapMetrics, AccumulatorMatchesLoopOracleAndF1BoundsIoU) {
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<int> label(0, 8);
  ConfusionAccumulator acc(9);
  std::vector<Grid<int>> preds, truths;
  for (int t = 0; t < 20; ++t) {
    Grid<int> p(9, 9), g(9, 9);
    for (auto& v : p.values()) v = label(rng);
    for (std::size_t i = 0; i < g.size(); ++i) g.values()[i] = std::bernoulli_distribution(0.6)(rng) ? p.values()[i] : label(rng);
    acc.add(p, g);
    preds.push_back(p);
    truths.push_back(g);
  }
  for (int k = 0; k < 9; ++k) {
    oracle::Counts sum;
    for (std::size_t i = 0; i < preds.size(); ++i) {
      const auto c = oracle::confusion(preds[i], truths[i], k);
      sum.tp += c.tp, sum.fp += c.fp, sum.fn += c.fn;
    }
    EXPECT_EQ(acc.counts()[static_cast<std::size_t>(k)].tp, sum.tp);
    EXPECT_EQ(acc.counts()[static_cast<std::size_t>(k)].fp, sum.fp);
    EXPECT_EQ(acc.counts()[static_cast<std::size_t>(k)].fn, sum.fn);
  }
  const MapMetrics m = map_metrics(acc);
  const MapMetrics direct = map_metrics(preds, truths, 9);
  EXPECT_EQ(m.mean_iou, direct.mean_iou);
  for (const ClassScores& c : m.per_class) EXPECT_GE(c.f1, c.iou);
  EXPECT_THROW(acc.add(Grid<int>(2, 2), Grid<int>(3, 3)), PreconditionError);
  EXPECT_THROW(acc.add(Grid<int>(2, 2, 9), Grid<int>(2, 2)), PreconditionError);
}

TEST(MeanCi, SingleValueHasZeroWidth) {
  const Aggregate a = mean_ci({0.7});
  EXPECT_EQ(a.mean, 0.7);
  EXPECT_EQ(a.ci95, 0.0);
  EXPECT_EQ(mean_ci({}).count, 0);
}
