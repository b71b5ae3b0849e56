#pragma once

#include <optional>
#include <random>
#include <set>
#include <string_view>
#include <vector>

#include "semnav/belief.hpp"
#include "semnav/nav.hpp"
#include "semnav/world.hpp"

namespace semnav {

enum class StrategyKind { upper, lower, mixed, mean, fbe, random };

std::string_view strategy_name(StrategyKind k);
StrategyKind parse_strategy(std::string_view name);

struct StrategyConfig {
  StrategyKind kind = StrategyKind::upper;
  double alpha1 = 0.1;
  double alpha2 = 0.75;  // mixed only

  void validate() const;
  friend bool operator==(const StrategyConfig&, const StrategyConfig&) = default;
};

struct NavConfig {
  double stop_probability = 0.75;
  int stop_distance = 5;      // cells
  int replan_interval = 20;   // steps
  int max_steps = 500;
  int success_radius = 10;    // cells
  // Measure the stop distance on the true map instead of the believed one.
  bool stop_distance_on_true_map = false;

  void validate() const;
  friend bool operator==(const NavConfig&, const NavConfig&) = default;
};

// Confidence-bound scores for target class c; sigma is the square root of the
// registered class variance. Throws PreconditionError for fbe/random kinds or
// a structural target.
Grid<double> score_cells(const GlobalBeliefMap& map, int target_class, const StrategyConfig& strategy);

// Cells a goal may be placed on: reachable from the agent over traversable
// cells, plus blocked cells touching that region. The agent's cell is excluded.
Grid<bool> eligible_cells(const GlobalBeliefMap& map, const Pose& agent, const PlannerConfig& planner);

// Frontier: observed cells whose occupancy argmax is free, 4-adjacent to a
// never-observed cell.
Grid<bool> frontier_cells(const GlobalBeliefMap& map);

struct GoalChoice {
  Cell cell;
  double score = 0.0;
};

// Argmax of the strategy score over eligible cells not in `excluded`, ties to
// the lowest row-major index. fbe takes the nearest eligible frontier by
// believed geodesic; random draws uniformly from eligible cells (needs rng).
// Throws GoalSelectionError when nothing qualifies ("no frontier" for fbe).
GoalChoice select_goal(const GlobalBeliefMap& map, int target_class, const StrategyConfig& strategy,
                       const Pose& agent, const PlannerConfig& planner, std::mt19937_64* rng = nullptr,
                       const std::set<Cell>& excluded = {});

enum class ActiveObjective { variance, entropy, bald };

std::string_view objective_name(ActiveObjective o);
ActiveObjective parse_objective(std::string_view name);

// Argmax of the registered acquisition field over eligible cells; when the
// field is zero there, falls back to frontier selection.
GoalChoice select_active_target(const GlobalBeliefMap& map, ActiveObjective objective, const Pose& agent,
                                const PlannerConfig& planner, const std::set<Cell>& excluded = {});

// Stop when a path cell has mean target probability above the threshold and
// lies closer than the stop distance. `world` is needed only for the true-map
// distance variant.
bool stop_check(const GlobalBeliefMap& map, int target_class, const Pose& agent, const NavConfig& nav,
                const std::vector<Cell>& path, const PlannerConfig& planner, const GridWorld* world = nullptr);

}  // namespace semnav
