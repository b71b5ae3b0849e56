#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "semnav/episodes.hpp"
#include "semnav/nav.hpp"
#include "semnav/observation.hpp"
#include "semnav/policy.hpp"
#include "semnav/predictor.hpp"
#include "semnav/training.hpp"
#include "semnav/world.hpp"

namespace semnav {

struct RunConfig {
  std::string output_dir = "run";
  WorldConfig world{96, 96};
  ObservationConfig observation;
  ArchConfig arch;
  int ensemble_size = 4;
  std::uint64_t model_seed = 1;
  TrainConfig train;
  TrainConfig finetune;
  StrategyConfig strategy;
  NavConfig nav;
  PlannerConfig planner;
  EpisodeConfig episodes;

  std::vector<std::uint64_t> train_seeds;  // default 1..20
  std::vector<std::uint64_t> eval_seeds;   // default 1001..1005

  int offline_budget = 18000;
  int active_budget = 10000;
  std::uint64_t collection_seed = 7;
  ActiveObjective objective = ActiveObjective::variance;
  // Goal reselection cadence while collecting actively.
  int collection_replan_interval = 20;
  // Steps spent in one world before active collection moves on.
  int collection_steps_per_world = 500;

  int eval_episodes = 200;
  double hard_fraction = 0.5;
  std::uint64_t episode_seed = 11;
  std::vector<std::string> nav_methods;

  int map_sequences = 40;  // per evaluation world
  int sequence_length = 10;
  std::uint64_t map_seed = 13;

  int workers = 1;

  RunConfig();
  void validate() const;
};

nlohmann::ordered_json to_json(const RunConfig& config);
// Strict: unknown keys and wrong types raise ConfigError naming the key.
RunConfig run_config_from_json(const nlohmann::json& j);

// Applies "a.b.c=value" overrides to a JSON document; the value is parsed as
// JSON when possible and taken as a string otherwise.
void apply_override(nlohmann::json& doc, const std::string& assignment);

RunConfig load_run_config(const std::filesystem::path& path, const std::vector<std::string>& overrides = {});

}  // namespace semnav
