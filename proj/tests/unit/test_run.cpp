#include <gtest/gtest.h>

#include "semnav/error.hpp"
#include "semnav/run.hpp"
#include "semnav/serialization.hpp"
#include "support/fixtures.hpp"

using namespace semnav;

namespace {

RunConfig tiny_config() {
  RunConfig c;
  c.world = WorldConfig{32, 32};
  c.arch = fixture::small_arch();
  c.ensemble_size = 2;
  c.train_seeds = {1, 2};
  c.eval_seeds = {101};
  c.offline_budget = 40;
  c.active_budget = 20;
  c.collection_steps_per_world = 10;
  c.train.batch_size = 8;
  c.finetune.batch_size = 8;
  c.eval_episodes = 2;
  c.hard_fraction = 0.0;
  c.nav.max_steps = 40;
  c.nav.success_radius = 3;
  c.nav_methods = {"random_walk", "upper"};
  c.map_sequences = 2;
  c.sequence_length = 4;
  return c;
}

}  // namespace

TEST(Run, OpenRunWritesResolvedConfig) {
  fixture::TempDir dir("run_open");
  const RunContext run = open_run(tiny_config(), dir.path() / "r");
  const RunConfig back = load_run_config(dir.path() / "r" / "config.json");
  EXPECT_EQ(to_json(back), to_json(run.config));
  RunConfig bad = tiny_config();
  bad.ensemble_size = 1;
  EXPECT_THROW(open_run(bad, dir.path() / "bad"), ConfigError);
}

TEST(Run, StoredWorldsMatchRegeneratedOnes) {
  fixture::TempDir dir("run_worlds");
  const RunContext run = open_run(tiny_config(), dir.path());
  const RunContext fresh{run.config, dir.path() / "elsewhere"};
  const GenerationSummary g = run_gen_worlds(run);
  EXPECT_EQ(g.train_worlds, 2u);
  EXPECT_EQ(g.eval_worlds, 1u);
  EXPECT_EQ(g.episodes, 2u);
  EXPECT_EQ(run.worlds("train"), fresh.worlds("train"));
  EXPECT_EQ(run.worlds("eval"), fresh.worlds("eval"));
  EXPECT_EQ(run.episodes(run.worlds("eval")), fresh.episodes(fresh.worlds("eval")));
  EXPECT_THROW(run.worlds("test"), PreconditionError);
}

TEST(Run, EpisodesOnTrainingWorldsAreRejected) {
  fixture::TempDir dir("run_leak");
  const RunContext run = open_run(tiny_config(), dir.path());
  std::vector<Episode> eps(1);
  eps[0].world_seed = 2;
  save_episodes(eps, dir.path() / "episodes.json");
  EXPECT_THROW(run.episodes(run.worlds("eval")), ConfigError);
}

TEST(Run, MissingModelIsReported) {
  fixture::TempDir dir("run_model");
  const RunContext run = open_run(tiny_config(), dir.path());
  EXPECT_THROW(run.model("offline"), Error);
}

TEST(Run, PipelineIsDeterministic) {
  fixture::TempDir dir("run_pipeline");
  const RunContext a = open_run(tiny_config(), dir.path() / "a");
  const RunContext b = open_run(tiny_config(), dir.path() / "b");
  run_pipeline(a);
  run_pipeline(b);
  for (const char* f : {"results/map_offline.csv", "results/map_active_variance.csv", "results/nav_offline_summary.csv",
                        "reports/table1.csv", "reports/table2.csv", "reports/table3.csv", "reports/table4.csv",
                        "logs/train_offline.csv"}) {
    ASSERT_TRUE(std::filesystem::exists(a.dir / f)) << f;
    EXPECT_EQ(read_text(a.dir / f), read_text(b.dir / f)) << f;
  }
  EXPECT_EQ(a.model("offline").members().size(), 2u);
  EXPECT_EQ(a.model(model_name(ActiveObjective::variance)).arch(), tiny_config().arch);
}
