#pragma once

#include <optional>
#include <span>
#include <vector>

#include "semnav/grid.hpp"
#include "semnav/world.hpp"

namespace semnav {

inline constexpr int kUnreachable = -1;

// 4-connected BFS distance from every cell to the nearest target. Paths run over
// passable cells; the final step may enter a target even when it is blocked,
// so object cells can be targets. Unreachable cells hold kUnreachable.
Grid<int> distance_field(const Grid<bool>& passable, std::span<const Cell> targets);

// Shortest 4-connected path length over free cells to the nearest member of
// `to_set`; nullopt when unreachable. Throws PreconditionError if `from` is
// not free or `to_set` is empty.
std::optional<int> geodesic_distance(const GridWorld& world, Cell from, std::span<const Cell> to_set);

// 8-connected distance with octile weights (1 and sqrt 2) and no corner
// cutting. Approximates continuous path length for detour ratios.
Grid<double> octile_distance_field(const Grid<bool>& passable, std::span<const Cell> targets);

// A shortest path from `from` to `to` (both included) descending the distance
// field of `to`; empty when unreachable. Ties pick N, S, W, E in that order.
std::vector<Cell> shortest_path(const Grid<bool>& passable, Cell from, Cell to);

}  // namespace semnav
