#include "semnav/policy.hpp"

#include <cmath>
#include <string>

#include "semnav/error.hpp"
#include "semnav/geodesic.hpp"

namespace semnav {

namespace {

constexpr Cell kSteps[4] = {{-1, 0}, {1, 0}, {0, -1}, {0, 1}};

Grid<bool> passable_with_agent(const GlobalBeliefMap& map, const Pose& agent, const PlannerConfig& planner) {
  Grid<bool> pass = traversable(make_cost_map(map, planner));
  if (pass.contains(agent.cell)) pass[agent.cell] = true;
  return pass;
}

GoalChoice argmax_over(const Grid<double>& field, const Grid<bool>& eligible, const std::set<Cell>& excluded,
                       const char* what) {
  std::optional<GoalChoice> best;
  for (std::size_t i = 0; i < field.size(); ++i) {
    if (!eligible.values()[i]) continue;
    const Cell c = field.cell_at(i);
    if (excluded.contains(c)) continue;
    if (!best || field.values()[i] > best->score) best = GoalChoice{c, field.values()[i]};
  }
  if (!best) throw GoalSelectionError(std::string("no eligible cell for ") + what);
  return *best;
}

GoalChoice nearest_frontier(const GlobalBeliefMap& map, const Pose& agent, const PlannerConfig& planner,
                            const std::set<Cell>& excluded) {
  const Grid<bool> frontier = frontier_cells(map);
  const Grid<bool> eligible = eligible_cells(map, agent, planner);
  const Cell from[1] = {agent.cell};
  const Grid<int> dist = distance_field(passable_with_agent(map, agent, planner), from);
  std::optional<GoalChoice> best;
  for (std::size_t i = 0; i < frontier.size(); ++i) {
    const Cell c = frontier.cell_at(i);
    if (!frontier.values()[i] || !eligible.values()[i] || dist[c] == kUnreachable || excluded.contains(c)) continue;
    const double d = dist[c];
    if (!best || d < best->score) best = GoalChoice{c, d};
  }
  if (!best) throw GoalSelectionError("no frontier");
  return *best;
}

}  // namespace

std::string_view strategy_name(StrategyKind k) {
  switch (k) {
    case StrategyKind::upper: return "upper";
    case StrategyKind::lower: return "lower";
    case StrategyKind::mixed: return "mixed";
    case StrategyKind::mean: return "mean";
    case StrategyKind::fbe: return "fbe";
    case StrategyKind::random: return "random";
  }
  return "?";
}

StrategyKind parse_strategy(std::string_view name) {
  for (StrategyKind k : {StrategyKind::upper, StrategyKind::lower, StrategyKind::mixed, StrategyKind::mean,
                         StrategyKind::fbe, StrategyKind::random})
    if (strategy_name(k) == name) return k;
  throw ConfigError("unknown strategy kind '" + std::string(name) + "'");
}

void StrategyConfig::validate() const {
  if (!(alpha1 >= 0.0)) throw ConfigError("alpha1 must be non-negative");
  if (!(alpha2 >= 0.0 && alpha2 <= 1.0)) throw ConfigError("alpha2 must lie in [0, 1]");
}

void NavConfig::validate() const {
  if (!(stop_probability > 0.0 && stop_probability < 1.0)) throw ConfigError("stop probability must lie in (0, 1)");
  if (stop_distance < 0) throw ConfigError("stop distance must be non-negative");
  if (replan_interval < 1) throw ConfigError("replan interval must be at least 1");
  if (max_steps < 1) throw ConfigError("max_steps must be positive");
  if (success_radius < 0) throw ConfigError("success radius must be non-negative");
}

Grid<double> score_cells(const GlobalBeliefMap& map, int target_class, const StrategyConfig& strategy) {
  if (target_class < 0 || target_class >= map.semantic_classes())
    throw PreconditionError("target class " + std::to_string(target_class) + " out of range");
  if (ClassCatalog::is_structural(target_class))
    throw PreconditionError("structural class " + std::to_string(target_class) + " is not a navigation target");
  if (strategy.kind == StrategyKind::fbe || strategy.kind == StrategyKind::random)
    throw PreconditionError("strategy '" + std::string(strategy_name(strategy.kind)) + "' has no cell scores");

  const auto mu = map.semantic_belief().plane(target_class);
  const auto var = map.uncertainty().plane(target_class);
  Grid<double> out(map.rows(), map.cols());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double m = mu[i];
    const double bound = strategy.alpha1 * std::sqrt(var[i]);
    switch (strategy.kind) {
      case StrategyKind::upper: out.values()[i] = m + bound; break;
      case StrategyKind::lower: out.values()[i] = m - bound; break;
      case StrategyKind::mixed: out.values()[i] = strategy.alpha2 - m >= 0.0 ? m + bound : m - bound; break;
      default: out.values()[i] = m; break;
    }
  }
  return out;
}

Grid<bool> eligible_cells(const GlobalBeliefMap& map, const Pose& agent, const PlannerConfig& planner) {
  const Grid<bool> pass = passable_with_agent(map, agent, planner);
  const Cell from[1] = {agent.cell};
  const Grid<int> dist = distance_field(pass, from);
  Grid<bool> out(map.rows(), map.cols(), false);
  for (int r = 0; r < map.rows(); ++r)
    for (int c = 0; c < map.cols(); ++c) {
      const Cell cell{r, c};
      if (dist[cell] != kUnreachable) {
        out[cell] = true;
        continue;
      }
      if (pass[cell]) continue;
      for (Cell d : kSteps) {
        const Cell n{r + d.row, c + d.col};
        if (dist.contains(n) && dist[n] != kUnreachable) {
          out[cell] = true;
          break;
        }
      }
    }
  if (out.contains(agent.cell)) out[agent.cell] = false;
  return out;
}

Grid<bool> frontier_cells(const GlobalBeliefMap& map) {
  Grid<bool> out(map.rows(), map.cols(), false);
  const Volume& occ = map.occupancy_belief();
  for (int r = 0; r < map.rows(); ++r)
    for (int c = 0; c < map.cols(); ++c) {
      if (!map.observed({r, c})) continue;
      const double free = occ(occupancy::kFree, r, c);
      if (free <= occ(occupancy::kOccupied, r, c) || free <= occ(occupancy::kUnknown, r, c)) continue;
      for (Cell d : kSteps) {
        const Cell n{r + d.row, c + d.col};
        if (map.contains(n) && !map.observed(n)) {
          out(r, c) = true;
          break;
        }
      }
    }
  return out;
}

GoalChoice select_goal(const GlobalBeliefMap& map, int target_class, const StrategyConfig& strategy,
                       const Pose& agent, const PlannerConfig& planner, std::mt19937_64* rng,
                       const std::set<Cell>& excluded) {
  if (strategy.kind == StrategyKind::fbe) return nearest_frontier(map, agent, planner, excluded);
  if (strategy.kind == StrategyKind::random) {
    if (rng == nullptr) throw PreconditionError("random goal selection needs a generator");
    const Grid<bool> eligible = eligible_cells(map, agent, planner);
    std::vector<Cell> pool;
    for (std::size_t i = 0; i < eligible.size(); ++i)
      if (eligible.values()[i] && !excluded.contains(eligible.cell_at(i))) pool.push_back(eligible.cell_at(i));
    if (pool.empty()) throw GoalSelectionError("no eligible cell for random goal");
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
    return {pool[pick(*rng)], 0.0};
  }
  const Grid<double> scores = score_cells(map, target_class, strategy);
  return argmax_over(scores, eligible_cells(map, agent, planner), excluded, "goal");
}

std::string_view objective_name(ActiveObjective o) {
  switch (o) {
    case ActiveObjective::variance: return "variance";
    case ActiveObjective::entropy: return "entropy";
    case ActiveObjective::bald: return "bald";
  }
  return "?";
}

ActiveObjective parse_objective(std::string_view name) {
  for (ActiveObjective o : {ActiveObjective::variance, ActiveObjective::entropy, ActiveObjective::bald})
    if (objective_name(o) == name) return o;
  throw ConfigError("unknown active objective '" + std::string(name) + "'");
}

GoalChoice select_active_target(const GlobalBeliefMap& map, ActiveObjective objective, const Pose& agent,
                                const PlannerConfig& planner, const std::set<Cell>& excluded) {
  Grid<double> field;
  switch (objective) {
    case ActiveObjective::variance: {
      const Volume& var = map.uncertainty();
      field = Grid<double>(map.rows(), map.cols(), 0.0);
      for (int k = 0; k < var.channels(); ++k) {
        const auto plane = var.plane(k);
        for (std::size_t i = 0; i < field.size(); ++i) field.values()[i] += plane[i];
      }
      for (double& v : field.values()) v /= var.channels();
      break;
    }
    case ActiveObjective::entropy: field = map.entropy(); break;
    case ActiveObjective::bald: field = map.bald(); break;
  }
  const Grid<bool> eligible = eligible_cells(map, agent, planner);
  std::optional<GoalChoice> best;
  try {
    best = argmax_over(field, eligible, excluded, "active target");
  } catch (const GoalSelectionError&) {
  }
  if (best && best->score > 0.0) return *best;
  return nearest_frontier(map, agent, planner, excluded);
}

bool stop_check(const GlobalBeliefMap& map, int target_class, const Pose& agent, const NavConfig& nav,
                const std::vector<Cell>& path, const PlannerConfig& planner, const GridWorld* world) {
  if (nav.stop_distance_on_true_map && world == nullptr)
    throw PreconditionError("true-map stop distance needs the world");
  std::optional<Grid<bool>> believed;
  for (const Cell cell : path) {
    if (!map.contains(cell) || map.semantic_probability(target_class, cell) <= nav.stop_probability) continue;
    if (manhattan(agent.cell, cell) >= nav.stop_distance) continue;
    if (cell == agent.cell) return true;
    const Cell to[1] = {cell};
    int d;
    if (nav.stop_distance_on_true_map) {
      Grid<bool> pass = world->free_mask();
      pass[agent.cell] = true;
      d = distance_field(pass, to)[agent.cell];
    } else {
      if (!believed) believed = passable_with_agent(map, agent, planner);
      d = distance_field(*believed, to)[agent.cell];
    }
    if (d != kUnreachable && d < nav.stop_distance) return true;
  }
  return false;
}

}  // namespace semnav
