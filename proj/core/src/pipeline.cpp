#include "semnav/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "semnav/error.hpp"
#include "semnav/geodesic.hpp"
#include "semnav/uncertainty.hpp"
#include "semnav/workers.hpp"

namespace semnav {

namespace {

Heading heading_towards(Cell from, Cell to, Heading fallback) {
  const Cell d{to.row - from.row, to.col - from.col};
  for (Heading h : {Heading::north, Heading::east, Heading::south, Heading::west})
    if (heading_step(h) == d) return h;
  return fallback;
}

Heading random_heading(std::mt19937_64& rng) {
  return static_cast<Heading>(std::uniform_int_distribution<int>(0, 3)(rng));
}

// Poses along a true shortest path between two random free cells, each facing
// the next step.
std::vector<Pose> random_path_poses(const GridWorld& world, const std::vector<Cell>& free, std::mt19937_64& rng) {
  if (free.size() < 2) throw PreconditionError("world has fewer than two free cells");
  std::uniform_int_distribution<std::size_t> pick(0, free.size() - 1);
  const Cell a = free[pick(rng)];
  Cell b = free[pick(rng)];
  while (b == a) b = free[pick(rng)];
  const std::vector<Cell> path = shortest_path(world.free_mask(), a, b);
  std::vector<Pose> poses;
  Heading h = random_heading(rng);
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (i + 1 < path.size()) h = heading_towards(path[i], path[i + 1], h);
    poses.push_back({path[i], h});
  }
  return poses;
}

bool goal_reached(const CostMap& costs, const Pose& agent, Cell goal) {
  if (agent.cell == goal) return true;
  return costs.blocked[goal] && manhattan(agent.cell, goal) == 1;
}

std::optional<PlannedPath> plan(const CostMap& costs, Cell from, Cell to) {
  if (from == to) return std::nullopt;
  return plan_path(costs, from, to);
}

}  // namespace

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  std::uint64_t z = a * 0x9E3779B97F4A7C15ULL + b + 0x632BE59BD9B4E019ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::vector<GridWorld> make_worlds(const std::vector<std::uint64_t>& seeds, const WorldConfig& config) {
  std::vector<GridWorld> worlds;
  worlds.reserve(seeds.size());
  for (std::uint64_t s : seeds) worlds.push_back(generate_world(s, config));
  return worlds;
}

LocalObservation accumulate_view(const GridWorld& world, ProjectionMap& projection, const Pose& pose,
                                 const ObservationConfig& config, int crop_size, std::mt19937_64& rng) {
  projection.add(sense(world, pose, config, rng));
  return projection.crop(pose, crop_size);
}

EnsembleView ensemble_view(const Ensemble& ensemble, const LocalObservation& input) {
  const int k = ensemble.arch().semantic_classes;
  const std::vector<Prediction> preds =
      ensemble.predict(input.occupancy_distribution(), input.semantic_distribution(k));
  std::vector<Volume> semantic;
  EnsembleView v;
  v.occupancy_mean = Volume(preds.front().occupancy.channels(), preds.front().occupancy.rows(),
                            preds.front().occupancy.cols());
  for (const Prediction& p : preds) {
    semantic.push_back(p.semantics);
    for (std::size_t i = 0; i < p.occupancy.size(); ++i) v.occupancy_mean.values()[i] += p.occupancy.values()[i];
  }
  for (double& x : v.occupancy_mean.values()) x /= static_cast<double>(preds.size());
  if (semantic.size() >= 2) {
    ClassBeliefStats stats = ensemble_stats(semantic);
    v.semantic_mean = std::move(stats.mean);
    v.semantic_variance = std::move(stats.variance);
  } else {
    v.semantic_mean = semantic.front();
    v.semantic_variance = Volume(k, input.semantics.rows(), input.semantics.cols(), 0.0);
  }
  v.entropy = entropy_map(v.semantic_mean);
  v.bald = bald_map(semantic);
  return v;
}

void register_view(GlobalBeliefMap& belief, const EnsembleView& view, const Pose& pose) {
  belief.register_semantics(view.semantic_mean, pose);
  belief.register_occupancy(view.occupancy_mean, pose);
  belief.register_uncertainty(view.semantic_variance, pose);
  belief.register_entropy(view.entropy, pose);
  belief.register_bald(view.bald, pose);
}

Dataset collect_offline(const std::vector<GridWorld>& worlds, int budget, const ObservationConfig& observation,
                        const ArchConfig& arch, std::uint64_t seed) {
  Dataset d;
  d.crop_size = arch.crop_size;
  d.semantic_classes = arch.semantic_classes;
  if (budget <= 0) return d;
  if (worlds.empty()) throw PreconditionError("offline collection needs at least one world");
  std::vector<std::vector<Cell>> free;
  for (const GridWorld& w : worlds) free.push_back(w.free_cells());
  std::mt19937_64 rng(seed);
  d.samples.reserve(static_cast<std::size_t>(budget));
  for (std::size_t walk = 0; static_cast<int>(d.size()) < budget; ++walk) {
    const std::size_t wi = walk % worlds.size();
    const GridWorld& world = worlds[wi];
    ProjectionMap projection(world.height(), world.width());
    for (const Pose& pose : random_path_poses(world, free[wi], rng)) {
      if (static_cast<int>(d.size()) >= budget) break;
      d.samples.push_back(make_sample(accumulate_view(world, projection, pose, observation, arch.crop_size, rng), world));
    }
  }
  return d;
}

Dataset collect_active(const std::vector<GridWorld>& worlds, const Ensemble& ensemble, int budget,
                       const ActiveCollectionSettings& settings, std::uint64_t seed, ActiveCollectionStats* stats) {
  const ArchConfig& arch = ensemble.arch();
  Dataset d;
  d.crop_size = arch.crop_size;
  d.semantic_classes = arch.semantic_classes;
  if (budget <= 0) return d;
  if (worlds.empty()) throw PreconditionError("active collection needs at least one world");
  std::mt19937_64 rng(seed);
  ActiveCollectionStats local;
  ActiveCollectionStats& st = stats ? *stats : local;
  int barren_rounds = 0;

  for (std::size_t visit = 0; static_cast<int>(d.size()) < budget; ++visit) {
    const GridWorld& world = worlds[visit % worlds.size()];
    ++st.worlds_visited;
    const std::size_t before = d.size();
    const std::vector<Cell> free = world.free_cells();
    AgentState agent;
    agent.pose = {free[std::uniform_int_distribution<std::size_t>(0, free.size() - 1)(rng)], random_heading(rng)};
    ProjectionMap projection(world.height(), world.width());
    GlobalBeliefMap belief = init_global(world.height(), world.width(), world.catalog());
    std::optional<Cell> goal;
    std::set<Cell> excluded;

    for (int t = 0; t < settings.steps_per_world && static_cast<int>(d.size()) < budget; ++t) {
      const LocalObservation input =
          accumulate_view(world, projection, agent.pose, settings.observation, arch.crop_size, rng);
      register_view(belief, ensemble_view(ensemble, input), agent.pose);
      d.samples.push_back(make_sample(input, world));

      const CostMap costs = make_cost_map(belief, settings.planner);
      std::optional<PlannedPath> path;
      bool deadlock = false;
      const bool reached = goal && goal_reached(costs, agent.pose, *goal);
      if (reached) excluded.insert(*goal);
      if (!goal || reached || t % settings.replan_interval == 0) goal.reset();
      if (goal) path = plan(costs, agent.pose.cell, *goal);
      for (int attempt = 0; !path && attempt < 20; ++attempt) {
        if (goal) excluded.insert(*goal);
        try {
          goal = select_active_target(belief, settings.objective, agent.pose, settings.planner, excluded).cell;
        } catch (const GoalSelectionError&) {
          deadlock = true;
          break;
        }
        st.targets.push_back(*goal);
        path = plan(costs, agent.pose.cell, *goal);
      }
      if (deadlock || !path) {
        ++st.deadlocks;
        break;
      }
      agent = step(agent, path_to_action(path->cells, agent.pose), world);
      if (agent.last_collision) belief.mark_occupied(*agent.last_collision);
    }
    barren_rounds = d.size() == before ? barren_rounds + 1 : 0;
    if (barren_rounds >= static_cast<int>(worlds.size())) break;
  }
  return d;
}

NavMethod parse_method(const std::string& name) {
  NavMethod m;
  m.name = name;
  if (name == "random_walk") {
    m.random_walk = true;
    return m;
  }
  std::size_t start = 0;
  bool first = true;
  while (start <= name.size()) {
    const auto plus = name.find('+', start);
    const std::string part = name.substr(start, plus == std::string::npos ? std::string::npos : plus - start);
    if (first) {
      m.strategy = parse_strategy(part);
      first = false;
    } else if (part == "gt_path") {
      m.gt_path = true;
    } else if (part == "oracle_stop") {
      m.oracle_stop = true;
    } else {
      throw ConfigError("unknown navigation method modifier '" + part + "' in '" + name + "'");
    }
    if (plus == std::string::npos) break;
    start = plus + 1;
  }
  return m;
}

EpisodeOutcome run_episode(const GridWorld& world, const Episode& episode, const Ensemble* ensemble,
                           const NavMethod& method, const NavSettings& settings, std::uint64_t seed,
                           GlobalBeliefMap* final_belief) {
  if (!method.random_walk && ensemble == nullptr) throw PreconditionError("method '" + method.name + "' needs an ensemble");
  if (world.seed() != episode.world_seed) throw PreconditionError("episode belongs to a different world");
  std::mt19937_64 rng(seed);
  const NavConfig& nav = settings.nav;
  StrategyConfig strategy = settings.strategy;
  strategy.kind = method.strategy;

  const std::vector<Cell> targets = world.cells_of_class(episode.target_class);
  const Grid<int> true_dist = distance_field(world.free_mask(), targets);
  const CostMap true_costs = make_cost_map(world);

  EpisodeOutcome out;
  AgentState agent;
  agent.pose = episode.start;
  out.result.shortest_geodesic = episode.geodesic_start_to_target;
  out.result.initial_distance = true_dist[episode.start.cell];

  const int crop = ensemble ? ensemble->arch().crop_size : 0;
  ProjectionMap projection(world.height(), world.width());
  GlobalBeliefMap belief = init_global(world.height(), world.width(), world.catalog());
  std::optional<Cell> goal;
  std::set<Cell> excluded;

  while (agent.steps_taken < nav.max_steps) {
    const int t = agent.steps_taken;
    if (method.oracle_stop && true_dist[agent.pose.cell] != kUnreachable &&
        true_dist[agent.pose.cell] <= nav.success_radius) {
      out.trajectory.push_back({t, agent.pose, Action::stop, goal});
      agent = step(agent, Action::stop, world);
      break;
    }
    if (method.random_walk) {
      const auto action = static_cast<Action>(std::uniform_int_distribution<int>(0, 3)(rng));
      out.trajectory.push_back({t, agent.pose, action, std::nullopt});
      agent = step(agent, action, world);
      if (agent.stopped) break;
      continue;
    }

    const LocalObservation input = accumulate_view(world, projection, agent.pose, settings.observation, crop, rng);
    register_view(belief, ensemble_view(*ensemble, input), agent.pose);
    const CostMap believed = make_cost_map(belief, settings.planner);
    const CostMap& costs = method.gt_path ? true_costs : believed;

    std::string reason;
    if (!goal) {
      reason = "initial";
    } else if (goal_reached(costs, agent.pose, *goal)) {
      excluded.insert(*goal);
      reason = "reached";
    } else if (t % nav.replan_interval == 0) {
      reason = "schedule";
    }
    std::optional<PlannedPath> path;
    if (reason.empty()) {
      path = plan(costs, agent.pose.cell, *goal);
      if (!path) {
        excluded.insert(*goal);
        reason = "unreachable";
      }
    }
    if (!reason.empty()) {
      for (int attempt = 0; attempt < 50 && !path; ++attempt) {
        GoalChoice choice;
        try {
          choice = select_goal(belief, episode.target_class, strategy, agent.pose, settings.planner, &rng, excluded);
        } catch (const GoalSelectionError& e) {
          out.failure = e.what();
          break;
        }
        goal = choice.cell;
        out.decisions.push_back({t, choice.cell, choice.score, attempt == 0 ? reason : "unreachable"});
        path = plan(costs, agent.pose.cell, *goal);
        if (!path) excluded.insert(*goal);
      }
      if (!path) {
        if (out.failure.empty()) out.failure = "no reachable goal";
        break;
      }
    }

    Action action;
    if (!method.oracle_stop && stop_check(belief, episode.target_class, agent.pose, nav, path->cells,
                                          settings.planner, &world))
      action = Action::stop;
    else
      action = path_to_action(path->cells, agent.pose);
    out.trajectory.push_back({t, agent.pose, action, goal});
    agent = step(agent, action, world);
    if (agent.last_collision) belief.mark_occupied(*agent.last_collision);
    if (agent.stopped) break;
  }

  out.result.stop_called = agent.stopped;
  out.result.steps = agent.steps_taken;
  out.result.path_length = agent.forward_moves;
  const int final = true_dist[agent.pose.cell];
  if (final == kUnreachable) throw Error("target unreachable from the final pose; the world data is inconsistent");
  out.result.final_distance = final;
  out.result.success = success(out.result, nav.success_radius, nav.max_steps);
  if (final_belief != nullptr) *final_belief = std::move(belief);
  return out;
}

std::vector<Episode> make_eval_episodes(const std::vector<GridWorld>& worlds, int count, double hard_fraction,
                                        EpisodeConfig config, int success_radius, std::uint64_t seed) {
  if (worlds.empty()) throw PreconditionError("episode generation needs at least one world");
  config.min_geodesic = std::max(config.min_geodesic, success_radius + 1);
  const int hard = static_cast<int>(std::lround(count * hard_fraction));
  std::vector<std::mt19937_64> rngs;
  for (const GridWorld& w : worlds) rngs.emplace_back(mix_seed(seed, w.seed()));
  std::vector<Episode> out;
  for (int i = 0; i < count; ++i) {
    const Difficulty difficulty = i < hard ? Difficulty::hard : Difficulty::easy;
    bool done = false;
    for (std::size_t k = 0; k < worlds.size() && !done; ++k) {
      const std::size_t wi = (static_cast<std::size_t>(i) + k) % worlds.size();
      try {
        out.push_back(sample_episodes(worlds[wi], 1, difficulty, config, rngs[wi]).front());
        done = true;
      } catch (const SamplingError&) {
      }
    }
    if (!done)
      throw SamplingError("no world could produce a " + std::string(difficulty_name(difficulty)) + " episode");
  }
  return out;
}

MethodEvaluation evaluate_method(const std::vector<GridWorld>& worlds, const std::vector<Episode>& episodes,
                                 const Ensemble* ensemble, const NavMethod& method, const NavSettings& settings,
                                 std::uint64_t seed, int workers) {
  MethodEvaluation ev;
  ev.method = method;
  ev.outcomes.resize(episodes.size());
  parallel_for(static_cast<int>(episodes.size()), workers, [&](int i) {
    const Episode& e = episodes[static_cast<std::size_t>(i)];
    const auto it = std::find_if(worlds.begin(), worlds.end(), [&](const GridWorld& w) { return w.seed() == e.world_seed; });
    if (it == worlds.end()) throw PreconditionError("episode refers to unknown world seed " + std::to_string(e.world_seed));
    ev.outcomes[static_cast<std::size_t>(i)] =
        run_episode(*it, e, ensemble, method, settings, mix_seed(seed, static_cast<std::uint64_t>(i)));
  });
  std::vector<EpisodeResult> results;
  for (const EpisodeOutcome& o : ev.outcomes) results.push_back(o.result);
  ev.summary = summarize(results, worlds.front().cell_size());
  return ev;
}

MapEvaluation eval_map(const Ensemble* ensemble, const std::vector<GridWorld>& worlds, int sequences_per_world,
                       int sequence_length, const ObservationConfig& observation, const ArchConfig& arch,
                       std::uint64_t seed) {
  if (ensemble && !(ensemble->arch() == arch)) throw PreconditionError("ensemble architecture differs from the config");
  const int k = arch.semantic_classes;
  ConfusionAccumulator sem_single(k), sem_multi(k), sem_ens(k);
  ConfusionAccumulator occ_single(occupancy::kCount), occ_multi(occupancy::kCount), occ_ens(occupancy::kCount);
  MapEvaluation ev;
  for (const GridWorld& world : worlds) {
    std::mt19937_64 rng(mix_seed(seed, world.seed()));
    const std::vector<Cell> free = world.free_cells();
    for (int s = 0; s < sequences_per_world; ++s) {
      std::vector<Pose> poses = random_path_poses(world, free, rng);
      if (static_cast<int>(poses.size()) > sequence_length) poses.resize(static_cast<std::size_t>(sequence_length));
      ProjectionMap multi(world.height(), world.width());
      for (const Pose& pose : poses) {
        const std::vector<RevealedCell> view = sense(world, pose, observation, rng);
        ProjectionMap single(world.height(), world.width());
        single.add(view);
        multi.add(view);
        const LocalObservation one = single.crop(pose, arch.crop_size);
        const LocalObservation many = multi.crop(pose, arch.crop_size);
        const Grid<int> gt_sem = ground_truth_semantic_crop(world, pose, arch.crop_size);
        const Grid<int> gt_occ = ground_truth_occupancy_crop(world, pose, arch.crop_size);
        sem_single.add(one.semantics, gt_sem);
        sem_multi.add(many.semantics, gt_sem);
        occ_single.add(one.occupancy, gt_occ);
        occ_multi.add(many.occupancy, gt_occ);
        if (ensemble) {
          const EnsembleView v = ensemble_view(*ensemble, many);
          sem_ens.add(argmax_channels(v.semantic_mean), gt_sem);
          occ_ens.add(argmax_channels(v.occupancy_mean), gt_occ);
        }
        ++ev.crops;
      }
    }
  }
  const std::vector<int> skip{0};
  ev.semantic_single_view = map_metrics(sem_single, skip);
  ev.semantic_multi_view = map_metrics(sem_multi, skip);
  ev.occupancy_single_view = map_metrics(occ_single, skip);
  ev.occupancy_multi_view = map_metrics(occ_multi, skip);
  if (ensemble) {
    ev.semantic_ensemble = map_metrics(sem_ens, skip);
    ev.occupancy_ensemble = map_metrics(occ_ens, skip);
  }
  return ev;
}

}  // namespace semnav
