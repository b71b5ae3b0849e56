#include "semnav/geodesic.hpp"

#include <array>
#include <cmath>
#include <deque>
#include <limits>
#include <queue>

#include "semnav/error.hpp"

namespace semnav {

namespace {
constexpr std::array<Cell, 4> kSteps{{{-1, 0}, {1, 0}, {0, -1}, {0, 1}}};
}

Grid<int> distance_field(const Grid<bool>& passable, std::span<const Cell> targets) {
  Grid<int> dist(passable.rows(), passable.cols(), kUnreachable);
  std::deque<Cell> queue;
  for (Cell t : targets) {
    if (!passable.contains(t) || dist[t] == 0) continue;
    dist[t] = 0;
    queue.push_back(t);
  }
  while (!queue.empty()) {
    const Cell c = queue.front();
    queue.pop_front();
    for (Cell d : kSteps) {
      const Cell n{c.row + d.row, c.col + d.col};
      if (passable.contains(n) && passable[n] && dist[n] == kUnreachable) {
        dist[n] = dist[c] + 1;
        queue.push_back(n);
      }
    }
  }
  return dist;
}

std::optional<int> geodesic_distance(const GridWorld& world, Cell from, std::span<const Cell> to_set) {
  if (!world.is_free(from)) throw PreconditionError("geodesic_distance: origin is not a free cell");
  if (to_set.empty()) throw PreconditionError("geodesic_distance: empty target set");
  const Grid<bool>& free = world.free_mask();
  Grid<char> is_target(free.rows(), free.cols(), 0);
  for (Cell t : to_set)
    if (free.contains(t)) is_target[t] = 1;
  if (is_target[from]) return 0;
  Grid<int> dist(free.rows(), free.cols(), kUnreachable);
  std::deque<Cell> queue{from};
  dist[from] = 0;
  while (!queue.empty()) {
    const Cell c = queue.front();
    queue.pop_front();
    for (Cell d : kSteps) {
      const Cell n{c.row + d.row, c.col + d.col};
      if (!free.contains(n) || dist[n] != kUnreachable) continue;
      if (is_target[n]) return dist[c] + 1;
      if (!free[n]) continue;
      dist[n] = dist[c] + 1;
      queue.push_back(n);
    }
  }
  return std::nullopt;
}

Grid<double> octile_distance_field(const Grid<bool>& passable, std::span<const Cell> targets) {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  const double diag = std::sqrt(2.0);
  Grid<double> dist(passable.rows(), passable.cols(), kInf);
  using Entry = std::pair<double, std::size_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
  for (Cell t : targets) {
    if (!passable.contains(t)) continue;
    dist[t] = 0.0;
    open.push({0.0, dist.index(t)});
  }
  auto open_cell = [&](Cell c) { return passable.contains(c) && passable[c]; };
  while (!open.empty()) {
    const auto [d, idx] = open.top();
    open.pop();
    const Cell c = dist.cell_at(idx);
    if (d > dist[c]) continue;
    for (int dr = -1; dr <= 1; ++dr)
      for (int dc = -1; dc <= 1; ++dc) {
        if (dr == 0 && dc == 0) continue;
        const Cell n{c.row + dr, c.col + dc};
        if (!open_cell(n)) continue;
        double step = 1.0;
        if (dr != 0 && dc != 0) {
          if (!open_cell({c.row + dr, c.col}) || !open_cell({c.row, c.col + dc})) continue;
          step = diag;
        }
        if (d + step < dist[n]) {
          dist[n] = d + step;
          open.push({dist[n], dist.index(n)});
        }
      }
  }
  return dist;
}

std::vector<Cell> shortest_path(const Grid<bool>& passable, Cell from, Cell to) {
  const std::array<Cell, 1> target{to};
  const Grid<int> dist = distance_field(passable, target);
  if (!dist.contains(from) || dist[from] == kUnreachable) return {};
  std::vector<Cell> path{from};
  Cell c = from;
  while (c != to) {
    for (Cell d : kSteps) {
      const Cell n{c.row + d.row, c.col + d.col};
      if (dist.contains(n) && dist[n] == dist[c] - 1) {
        c = n;
        break;
      }
    }
    path.push_back(c);
  }
  return path;
}

}  // namespace semnav
