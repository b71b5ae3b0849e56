#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "semnav/config.hpp"
#include "semnav/pipeline.hpp"

namespace semnav {

// A run directory and the resolved config that produced it. Every pipeline
// stage reads its inputs from and writes its artifacts into `dir`.
struct RunContext {
  RunConfig config;
  std::filesystem::path dir;

  std::filesystem::path world_path(const std::string& split, std::uint64_t seed) const;
  // Stored worlds when present, regenerated from the seeds otherwise.
  std::vector<GridWorld> worlds(const std::string& split) const;
  std::vector<Episode> episodes(const std::vector<GridWorld>& eval_worlds) const;
  // Loads models/<name>.ckpt; throws when absent or built for another architecture.
  Ensemble model(const std::string& name) const;
  NavSettings nav_settings() const;
};

// Creates the directory and writes the resolved config.json.
RunContext open_run(RunConfig config, const std::filesystem::path& dir);

struct GenerationSummary {
  std::size_t train_worlds = 0;
  std::size_t eval_worlds = 0;
  std::size_t episodes = 0;
};

GenerationSummary run_gen_worlds(const RunContext& run);
std::size_t run_collect_offline(const RunContext& run);
std::size_t run_train(const RunContext& run);
ActiveCollectionStats run_collect_active(const RunContext& run, ActiveObjective objective, const std::string& model);
std::size_t run_finetune(const RunContext& run, ActiveObjective objective, const std::string& model);
// `model` "none" scores only the projection baselines.
MapEvaluation run_eval_map(const RunContext& run, const std::string& model);
// Empty `methods` evaluates the configured list.
std::vector<MethodEvaluation> run_eval_nav(const RunContext& run, const std::string& model,
                                           std::vector<std::string> methods, bool trajectories);
// Renders every world, and one episode trajectory unless `model` is "none".
std::optional<EpisodeOutcome> run_render(const RunContext& run, const std::string& model, const std::string& method,
                                         int episode);

// gen-worlds, collect-offline, train, collect-active, finetune, eval-map for
// both models, eval-nav for the offline model, report.
void run_pipeline(const RunContext& run);

std::string model_name(ActiveObjective objective);

}  // namespace semnav
