#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "semnav/belief.hpp"
#include "semnav/config.hpp"
#include "semnav/dataset.hpp"
#include "semnav/episodes.hpp"
#include "semnav/metrics.hpp"
#include "semnav/nav.hpp"
#include "semnav/observation.hpp"
#include "semnav/policy.hpp"
#include "semnav/predictor.hpp"
#include "semnav/world.hpp"

namespace semnav {

// Deterministic 64-bit mix for deriving per-item seeds.
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b);

std::vector<GridWorld> make_worlds(const std::vector<std::uint64_t>& seeds, const WorldConfig& config);

// Senses from the pose, adds the view to the projection and returns the
// accumulated egocentric crop (the predictor input).
LocalObservation accumulate_view(const GridWorld& world, ProjectionMap& projection, const Pose& pose,
                                 const ObservationConfig& config, int crop_size, std::mt19937_64& rng);

struct EnsembleView {
  Volume occupancy_mean;
  Volume semantic_mean;
  Volume semantic_variance;
  Grid<double> entropy;
  Grid<double> bald;
};

EnsembleView ensemble_view(const Ensemble& ensemble, const LocalObservation& input);

// Registers beliefs, variance, entropy and BALD of one view at its pose.
void register_view(GlobalBeliefMap& belief, const EnsembleView& view, const Pose& pose);

// Walks true shortest paths between random free cells, one fresh projection
// per path, recording a sample at every step until the budget is met.
Dataset collect_offline(const std::vector<GridWorld>& worlds, int budget, const ObservationConfig& observation,
                        const ArchConfig& arch, std::uint64_t seed);

struct ActiveCollectionSettings {
  ObservationConfig observation;
  PlannerConfig planner;
  ActiveObjective objective = ActiveObjective::variance;
  int replan_interval = 20;
  int steps_per_world = 500;
};

struct ActiveCollectionStats {
  int worlds_visited = 0;
  int deadlocks = 0;
  std::vector<Cell> targets;  // in selection order
};

// Navigates towards cells chosen by the acquisition objective, recording a
// sample every step. Returns exactly `budget` samples unless every world
// deadlocks immediately.
Dataset collect_active(const std::vector<GridWorld>& worlds, const Ensemble& ensemble, int budget,
                       const ActiveCollectionSettings& settings, std::uint64_t seed,
                       ActiveCollectionStats* stats = nullptr);

struct NavMethod {
  std::string name;
  StrategyKind strategy = StrategyKind::upper;
  bool random_walk = false;
  bool oracle_stop = false;
  bool gt_path = false;
};

// "<strategy>[+gt_path][+oracle_stop]" or "random_walk".
NavMethod parse_method(const std::string& name);

struct NavSettings {
  ObservationConfig observation;
  StrategyConfig strategy;
  NavConfig nav;
  PlannerConfig planner;
};

struct TrajectoryRow {
  int step = 0;
  Pose pose;
  Action action = Action::stop;
  std::optional<Cell> goal;
};

struct GoalDecision {
  int step = 0;
  Cell goal;
  double score = 0.0;
  std::string reason;  // schedule, reached, unreachable
};

struct EpisodeOutcome {
  EpisodeResult result;
  std::vector<TrajectoryRow> trajectory;
  std::vector<GoalDecision> decisions;
  std::string failure;  // why the agent gave up early, if it did
};

// `final_belief`, when given, receives the belief map at episode end.
EpisodeOutcome run_episode(const GridWorld& world, const Episode& episode, const Ensemble* ensemble,
                           const NavMethod& method, const NavSettings& settings, std::uint64_t seed,
                           GlobalBeliefMap* final_belief = nullptr);

// Easy and hard episodes spread round-robin over the worlds. Episodes start
// farther than the success radius from every target instance.
std::vector<Episode> make_eval_episodes(const std::vector<GridWorld>& worlds, int count, double hard_fraction,
                                        EpisodeConfig config, int success_radius, std::uint64_t seed);

struct MethodEvaluation {
  NavMethod method;
  std::vector<EpisodeOutcome> outcomes;
  NavSummary summary;
};

MethodEvaluation evaluate_method(const std::vector<GridWorld>& worlds, const std::vector<Episode>& episodes,
                                 const Ensemble* ensemble, const NavMethod& method, const NavSettings& settings,
                                 std::uint64_t seed, int workers);

struct MapEvaluation {
  MapMetrics semantic_single_view;
  MapMetrics semantic_multi_view;
  MapMetrics semantic_ensemble;
  MapMetrics occupancy_single_view;
  MapMetrics occupancy_multi_view;
  MapMetrics occupancy_ensemble;
  int crops = 0;
};

// Random shortest-path sequences on each world; every step compares the
// single-view projection, the accumulated projection and the ensemble's
// argmax-of-mean prediction against ground-truth crops. Without an ensemble
// only the projections are scored.
MapEvaluation eval_map(const Ensemble* ensemble, const std::vector<GridWorld>& worlds, int sequences_per_world,
                       int sequence_length, const ObservationConfig& observation, const ArchConfig& arch,
                       std::uint64_t seed);

}  // namespace semnav
