#include "semnav/run.hpp"

#include <algorithm>

#include "semnav/checkpoint.hpp"
#include "semnav/dataset.hpp"
#include "semnav/error.hpp"
#include "semnav/render.hpp"
#include "semnav/report.hpp"
#include "semnav/serialization.hpp"
#include "semnav/training.hpp"

namespace fs = std::filesystem;

namespace semnav {

namespace {

const std::vector<std::uint64_t>& seeds_of(const RunConfig& config, const std::string& split) {
  if (split == "train") return config.train_seeds;
  if (split == "eval") return config.eval_seeds;
  throw PreconditionError("unknown world split '" + split + "'");
}

fs::path dataset_path(const RunContext& run, const std::string& name) {
  return run.dir / "datasets" / (name + ".bin");
}

std::vector<LossRecord> train_and_log(Ensemble& ensemble, const Dataset& data, TrainConfig tc, int workers,
                                      const fs::path& log) {
  tc.workers = workers;
  auto records = train(ensemble, data, tc);
  fs::create_directories(log.parent_path());
  write_training_log(records, log);
  return records;
}

}  // namespace

fs::path RunContext::world_path(const std::string& split, std::uint64_t seed) const {
  return dir / "worlds" / split / (std::to_string(seed) + ".world");
}

std::vector<GridWorld> RunContext::worlds(const std::string& split) const {
  std::vector<GridWorld> out;
  for (std::uint64_t s : seeds_of(config, split)) {
    const fs::path p = world_path(split, s);
    out.push_back(fs::exists(p) ? load_world(p) : generate_world(s, config.world));
  }
  return out;
}

std::vector<Episode> RunContext::episodes(const std::vector<GridWorld>& eval_worlds) const {
  const fs::path p = dir / "episodes.json";
  std::vector<Episode> out = fs::exists(p) ? load_episodes(p)
                                           : make_eval_episodes(eval_worlds, config.eval_episodes, config.hard_fraction,
                                                                config.episodes, config.nav.success_radius,
                                                                config.episode_seed);
  for (const Episode& e : out)
    if (std::find(config.train_seeds.begin(), config.train_seeds.end(), e.world_seed) != config.train_seeds.end())
      throw ConfigError("evaluation episode uses training world " + std::to_string(e.world_seed));
  return out;
}

Ensemble RunContext::model(const std::string& name) const {
  const fs::path p = dir / "models" / (name + ".ckpt");
  if (!fs::exists(p)) throw Error("model not found: " + p.string());
  Ensemble e = load_checkpoint(p);
  if (!(e.arch() == config.arch)) throw ConfigError("model " + name + " was built for a different architecture");
  return e;
}

NavSettings RunContext::nav_settings() const { return {config.observation, config.strategy, config.nav, config.planner}; }

RunContext open_run(RunConfig config, const fs::path& dir) {
  config.validate();
  fs::create_directories(dir);
  write_text(dir / "config.json", to_json(config).dump(2) + "\n");
  return {std::move(config), dir};
}

std::string model_name(ActiveObjective objective) { return "active_" + std::string(objective_name(objective)); }

GenerationSummary run_gen_worlds(const RunContext& run) {
  GenerationSummary out;
  std::vector<GridWorld> eval;
  for (const char* split : {"train", "eval"})
    for (std::uint64_t s : seeds_of(run.config, split)) {
      GridWorld w = generate_world(s, run.config.world);
      save_world(w, run.world_path(split, s));
      if (std::string(split) == "eval") eval.push_back(std::move(w));
    }
  out.train_worlds = run.config.train_seeds.size();
  out.eval_worlds = eval.size();
  const auto episodes = make_eval_episodes(eval, run.config.eval_episodes, run.config.hard_fraction,
                                           run.config.episodes, run.config.nav.success_radius, run.config.episode_seed);
  save_episodes(episodes, run.dir / "episodes.json");
  out.episodes = episodes.size();
  return out;
}

std::size_t run_collect_offline(const RunContext& run) {
  const RunConfig& c = run.config;
  const Dataset d = collect_offline(run.worlds("train"), c.offline_budget, c.observation, c.arch, c.collection_seed);
  save_dataset(d, dataset_path(run, "offline"));
  return d.size();
}

std::size_t run_train(const RunContext& run) {
  const Dataset d = load_dataset(dataset_path(run, "offline"));
  Ensemble e = Ensemble::create(run.config.arch, run.config.ensemble_size, run.config.model_seed);
  train_and_log(e, d, run.config.train, run.config.workers, run.dir / "logs" / "train_offline.csv");
  save_checkpoint(e, run.dir / "models" / "offline.ckpt");
  return d.size();
}

ActiveCollectionStats run_collect_active(const RunContext& run, ActiveObjective objective, const std::string& model) {
  const RunConfig& c = run.config;
  const Ensemble e = run.model(model);
  const ActiveCollectionSettings settings{c.observation, c.planner, objective, c.collection_replan_interval,
                                          c.collection_steps_per_world};
  ActiveCollectionStats stats;
  const Dataset d = collect_active(run.worlds("train"), e, c.active_budget, settings, mix_seed(c.collection_seed, 1),
                                   &stats);
  save_dataset(d, dataset_path(run, model_name(objective)));
  return stats;
}

std::size_t run_finetune(const RunContext& run, ActiveObjective objective, const std::string& model) {
  const std::string name = model_name(objective);
  const Dataset d = load_dataset(dataset_path(run, name));
  Ensemble e = run.model(model);
  train_and_log(e, d, run.config.finetune, run.config.workers,
                run.dir / "logs" / ("finetune_" + std::string(objective_name(objective)) + ".csv"));
  save_checkpoint(e, run.dir / "models" / (name + ".ckpt"));
  return d.size();
}

MapEvaluation run_eval_map(const RunContext& run, const std::string& model) {
  const RunConfig& c = run.config;
  std::optional<Ensemble> e;
  if (model != "none") e = run.model(model);
  const MapEvaluation ev = eval_map(e ? &*e : nullptr, run.worlds("eval"), c.map_sequences, c.sequence_length,
                                    c.observation, c.arch, c.map_seed);
  map_evaluation_table(ev, ClassCatalog::standard(), e.has_value())
      .save(run.dir / "results" / ("map_" + model + ".csv"));
  return ev;
}

std::vector<MethodEvaluation> run_eval_nav(const RunContext& run, const std::string& model,
                                           std::vector<std::string> methods, bool trajectories) {
  const RunConfig& c = run.config;
  if (methods.empty()) methods = c.nav_methods;
  const auto worlds = run.worlds("eval");
  const auto episodes = run.episodes(worlds);
  const Ensemble e = run.model(model);
  std::vector<MethodEvaluation> evals;
  for (const std::string& name : methods) {
    evals.push_back(evaluate_method(worlds, episodes, &e, parse_method(name), run.nav_settings(), c.episode_seed,
                                    c.workers));
    const MethodEvaluation& ev = evals.back();
    episode_table(ev, episodes).save(run.dir / "results" / "episodes" / (model + "_" + name + ".csv"));
    if (!trajectories) continue;
    const fs::path base = run.dir / "trajectories" / (model + "_" + name);
    for (std::size_t i = 0; i < ev.outcomes.size(); ++i) {
      trajectory_table(ev.outcomes[i]).save(base / ("episode_" + std::to_string(i) + ".csv"));
      decision_table(ev.outcomes[i]).save(base / ("goals_" + std::to_string(i) + ".csv"));
    }
  }
  nav_summary_table(evals, episodes, worlds.front().cell_size())
      .save(run.dir / "results" / ("nav_" + model + "_summary.csv"));
  return evals;
}

std::optional<EpisodeOutcome> run_render(const RunContext& run, const std::string& model, const std::string& method,
                                         int episode) {
  for (const char* split : {"train", "eval"})
    for (const GridWorld& w : run.worlds(split))
      save_png(render_labels(w.semantic()),
               run.dir / "renders" / (std::string(split) + "_" + std::to_string(w.seed()) + ".png"));
  if (model == "none") return std::nullopt;
  const auto worlds = run.worlds("eval");
  const auto episodes = run.episodes(worlds);
  if (episode < 0 || episode >= static_cast<int>(episodes.size()))
    throw ConfigError("episode index " + std::to_string(episode) + " out of range");
  const Episode& ep = episodes[static_cast<std::size_t>(episode)];
  const auto world = std::find_if(worlds.begin(), worlds.end(), [&](const GridWorld& w) { return w.seed() == ep.world_seed; });
  const Ensemble e = run.model(model);
  // Same per-episode seed as evaluate_method, so the render matches the results.
  GlobalBeliefMap belief;
  const EpisodeOutcome out = run_episode(*world, ep, &e, parse_method(method), run.nav_settings(),
                                         mix_seed(run.config.episode_seed, static_cast<std::uint64_t>(episode)), &belief);
  Image img = render_labels(world->semantic());
  std::vector<Cell> visited;
  for (const TrajectoryRow& t : out.trajectory) visited.push_back(t.pose.cell);
  paint_cells(img, visited, {255, 0, 0});
  paint_cells(img, world->cells_of_class(ep.target_class), {255, 255, 0});
  paint_cells(img, {ep.start.cell}, {0, 200, 0});
  const std::string stem = "episode_" + std::to_string(episode) + "_" + method;
  save_png(img, run.dir / "renders" / (stem + "_trajectory.png"));
  if (belief.rows() > 0) {
    Grid<int> believed = argmax_channels(belief.semantic_belief());
    for (int r = 0; r < believed.rows(); ++r)
      for (int c = 0; c < believed.cols(); ++c)
        if (!belief.observed({r, c})) believed(r, c) = semantic::kUnknown;
    save_png(render_labels(believed), run.dir / "renders" / (stem + "_belief.png"));
    Grid<double> variance(belief.rows(), belief.cols(), 0.0);
    const Volume& u = belief.uncertainty();
    for (int r = 0; r < u.rows(); ++r)
      for (int c = 0; c < u.cols(); ++c) {
        double sum = 0.0;
        for (int k = 0; k < u.channels(); ++k) sum += u(k, r, c);
        variance(r, c) = sum / u.channels();
      }
    save_pgm(variance, run.dir / "renders" / (stem + "_uncertainty.pgm"));
  }
  return out;
}

void run_pipeline(const RunContext& run) {
  run_gen_worlds(run);
  run_collect_offline(run);
  run_train(run);
  run_collect_active(run, run.config.objective, "offline");
  run_finetune(run, run.config.objective, "offline");
  run_eval_map(run, "offline");
  run_eval_map(run, model_name(run.config.objective));
  run_eval_nav(run, "offline", {}, false);
  build_report(run.dir);
}

}  // namespace semnav
