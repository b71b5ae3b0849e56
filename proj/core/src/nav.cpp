#include "semnav/nav.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <tuple>

#include "semnav/error.hpp"

namespace semnav {

void PlannerConfig::validate() const {
  if (!(obstacle_threshold > 0.0 && obstacle_threshold < 1.0))
    throw ConfigError("obstacle threshold must lie in (0, 1)");
  if (!(unknown_cost >= 1.0)) throw ConfigError("unknown cost multiplier must be at least 1");
}

CostMap make_cost_map(const GlobalBeliefMap& belief, const PlannerConfig& config) {
  CostMap m{Grid<bool>(belief.rows(), belief.cols(), false), Grid<double>(belief.rows(), belief.cols(), 1.0)};
  const Volume& occ = belief.occupancy_belief();
  for (int r = 0; r < belief.rows(); ++r)
    for (int c = 0; c < belief.cols(); ++c) {
      const Cell cell{r, c};
      if (occ(occupancy::kOccupied, r, c) > config.obstacle_threshold) m.blocked[cell] = true;
      const bool unknown_dominant =
          !belief.observed(cell) || (occ(occupancy::kUnknown, r, c) >= occ(occupancy::kOccupied, r, c) &&
                                     occ(occupancy::kUnknown, r, c) >= occ(occupancy::kFree, r, c));
      if (unknown_dominant) m.cost[cell] = config.unknown_cost;
    }
  return m;
}

CostMap make_cost_map(const GridWorld& world) {
  CostMap m{Grid<bool>(world.height(), world.width(), false), Grid<double>(world.height(), world.width(), 1.0)};
  for (std::size_t i = 0; i < m.blocked.size(); ++i) m.blocked.values()[i] = !world.free_mask().values()[i];
  return m;
}

Grid<bool> traversable(const CostMap& map) {
  Grid<bool> t(map.blocked.rows(), map.blocked.cols(), false);
  for (std::size_t i = 0; i < t.size(); ++i) t.values()[i] = !map.blocked.values()[i];
  return t;
}

std::optional<PlannedPath> plan_path(const CostMap& map, Cell from, Cell to) {
  if (!map.blocked.contains(from) || !map.blocked.contains(to)) throw PreconditionError("path endpoint outside the map");
  if (from == to) throw PreconditionError("plan_path needs distinct endpoints");

  const double inf = std::numeric_limits<double>::infinity();
  Grid<double> g(map.blocked.rows(), map.blocked.cols(), inf);
  Grid<int> parent(map.blocked.rows(), map.blocked.cols(), -1);
  Grid<bool> closed(map.blocked.rows(), map.blocked.cols(), false);
  // (f, h, index): lower heuristic first on equal f, then lower index.
  using Entry = std::tuple<double, int, std::size_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
  g[from] = 0.0;
  open.emplace(manhattan(from, to), manhattan(from, to), g.index(from));
  constexpr Cell kSteps[4] = {{-1, 0}, {1, 0}, {0, -1}, {0, 1}};

  while (!open.empty()) {
    const auto [f, h, idx] = open.top();
    open.pop();
    const Cell cur = g.cell_at(idx);
    if (closed[cur]) continue;
    closed[cur] = true;
    if (cur == to) break;
    for (const Cell d : kSteps) {
      const Cell nb{cur.row + d.row, cur.col + d.col};
      if (!g.contains(nb) || closed[nb]) continue;
      double enter;
      if (nb == to)
        enter = map.blocked[nb] ? 1.0 : map.cost[nb];
      else if (map.blocked[nb])
        continue;
      else
        enter = map.cost[nb];
      const double cand = g[cur] + enter;
      if (cand < g[nb]) {
        g[nb] = cand;
        parent[nb] = static_cast<int>(idx);
        const int nh = manhattan(nb, to);
        open.emplace(cand + nh, nh, g.index(nb));
      }
    }
  }
  if (!closed[to]) return std::nullopt;
  PlannedPath out;
  out.cost = g[to];
  for (Cell c = to;; c = g.cell_at(static_cast<std::size_t>(parent[c]))) {
    out.cells.push_back(c);
    if (c == from) break;
  }
  std::reverse(out.cells.begin(), out.cells.end());
  return out;
}

std::string_view action_name(Action a) {
  switch (a) {
    case Action::forward: return "forward";
    case Action::turn_left: return "turn_left";
    case Action::turn_right: return "turn_right";
    case Action::stop: return "stop";
  }
  return "?";
}

AgentState step(const AgentState& agent, Action action, const GridWorld& world) {
  if (agent.stopped) throw PreconditionError("agent already stopped");
  AgentState next = agent;
  next.last_collision.reset();
  ++next.steps_taken;
  switch (action) {
    case Action::forward: {
      const Cell d = heading_step(agent.pose.heading);
      const Cell target{agent.pose.cell.row + d.row, agent.pose.cell.col + d.col};
      if (world.is_free(target)) {
        next.pose.cell = target;
        ++next.forward_moves;
      } else {
        ++next.collision_count;
        if (world.contains(target)) next.last_collision = target;
      }
      break;
    }
    case Action::turn_left: next.pose.heading = turned_left(agent.pose.heading); break;
    case Action::turn_right: next.pose.heading = turned_right(agent.pose.heading); break;
    case Action::stop: next.stopped = true; break;
  }
  return next;
}

Action path_to_action(const std::vector<Cell>& path, const Pose& pose) {
  if (path.size() < 2) throw PreconditionError("path needs at least two cells");
  if (path.front() != pose.cell) throw PreconditionError("path does not start at the agent");
  const Cell d{path[1].row - pose.cell.row, path[1].col - pose.cell.col};
  if (std::abs(d.row) + std::abs(d.col) != 1) throw PreconditionError("path cells are not 4-adjacent");
  if (d == heading_step(pose.heading)) return Action::forward;
  if (d == heading_step(turned_right(pose.heading))) return Action::turn_right;
  return Action::turn_left;
}

}  // namespace semnav
