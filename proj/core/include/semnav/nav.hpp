#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "semnav/belief.hpp"
#include "semnav/pose.hpp"
#include "semnav/world.hpp"

namespace semnav {

struct PlannerConfig {
  double obstacle_threshold = 0.6;  // believed P(occupied) above this blocks a cell
  double unknown_cost = 2.0;        // step cost into unknown-dominant cells

  void validate() const;
  friend bool operator==(const PlannerConfig&, const PlannerConfig&) = default;
};

// Per-cell planning costs derived from a belief map.
struct CostMap {
  Grid<bool> blocked;
  Grid<double> cost;  // cost of entering the cell
};

// Unknown-dominant: never observed, or the occupancy argmax is unknown.
CostMap make_cost_map(const GlobalBeliefMap& belief, const PlannerConfig& config);

// True-map costs: walls and objects blocked, every free cell costs 1.
CostMap make_cost_map(const GridWorld& world);

// Cells that are not blocked.
Grid<bool> traversable(const CostMap& map);

struct PlannedPath {
  std::vector<Cell> cells;  // from .. to, both included
  double cost = 0.0;
};

// A* with the Manhattan heuristic over 4-connected moves. The goal may be
// entered even when blocked (object goals), at unit cost. nullopt when
// unreachable. Throws PreconditionError when from == to or either lies outside.
std::optional<PlannedPath> plan_path(const CostMap& map, Cell from, Cell to);

enum class Action { forward, turn_left, turn_right, stop };

std::string_view action_name(Action a);

struct AgentState {
  Pose pose;
  int steps_taken = 0;
  int collision_count = 0;
  int forward_moves = 0;
  bool stopped = false;
  // Set when the last forward move was blocked.
  std::optional<Cell> last_collision;
};

// Discrete dynamics on the true world. Throws PreconditionError after stop.
AgentState step(const AgentState& agent, Action action, const GridWorld& world);

// Next action along a path starting at the pose's cell: turn towards the next
// cell (left for a reversal), else forward. Throws PreconditionError for a
// path shorter than two cells or not starting at the pose.
Action path_to_action(const std::vector<Cell>& path, const Pose& pose);

}  // namespace semnav
