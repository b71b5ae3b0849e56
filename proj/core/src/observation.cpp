#include "semnav/observation.hpp"

#include <cmath>
#include <cstdlib>
#include <numbers>

#include "semnav/error.hpp"

namespace semnav {

void ObservationConfig::validate() const {
  if (!(range > 0.0)) throw ConfigError("observation range must be positive");
  if (!(fov_degrees > 0.0)) throw ConfigError("observation fov must be positive");
  if (label_noise < 0.0 || label_noise > 1.0)
    throw ConfigError("label noise must lie in [0, 1]");
  if (depth_dropout < 0.0 || depth_dropout >= 1.0)
    throw ConfigError("depth dropout must lie in [0, 1)");
}

bool line_of_sight(const Grid<bool>& blocked, Cell from, Cell to) {
  const int dr = to.row - from.row;
  const int dc = to.col - from.col;
  const int nr = std::abs(dr), nc = std::abs(dc);
  const int sr = dr > 0 ? 1 : -1, sc = dc > 0 ? 1 : -1;
  // The k-th row boundary is crossed at t = (2k+1) / (2 nr); compare in integers.
  int kr = 0, kc = 0;
  Cell c = from;
  while (kr < nr || kc < nc) {
    long row_t = kr < nr ? static_cast<long>(2 * kr + 1) * nc : -1;
    long col_t = kc < nc ? static_cast<long>(2 * kc + 1) * nr : -1;
    if (kr < nr && (kc >= nc || row_t < col_t)) {
      c.row += sr;
      ++kr;
    } else if (kc < nc && (kr >= nr || col_t < row_t)) {
      c.col += sc;
      ++kc;
    } else {
      c.row += sr;
      c.col += sc;
      ++kr;
      ++kc;
    }
    if (c == to) return true;
    if (!blocked.contains(c) || blocked[c]) return false;
  }
  return true;
}

std::vector<Cell> visible_cells(const GridWorld& world, const Pose& pose, double range,
                                double fov_degrees) {
  Grid<bool> blocked(world.height(), world.width(), false);
  for (std::size_t i = 0; i < blocked.size(); ++i)
    blocked.values()[i] = !world.free_mask().values()[i];
  const Cell fwd = heading_step(pose.heading);
  const double half_fov = fov_degrees * std::numbers::pi / 360.0;
  const double cos_limit = std::cos(half_fov);
  const int reach = static_cast<int>(std::floor(range));
  std::vector<Cell> out;
  for (int r = pose.cell.row - reach; r <= pose.cell.row + reach; ++r)
    for (int c = pose.cell.col - reach; c <= pose.cell.col + reach; ++c) {
      const Cell cell{r, c};
      if (!world.contains(cell)) continue;
      if (cell == pose.cell) {
        out.push_back(cell);
        continue;
      }
      const double drow = r - pose.cell.row, dcol = c - pose.cell.col;
      const double dist = std::hypot(drow, dcol);
      if (dist > range + 1e-9) continue;
      if (fov_degrees < 360.0) {
        const double cosine = (drow * fwd.row + dcol * fwd.col) / dist;
        if (cosine < cos_limit - 1e-12) continue;
      }
      if (line_of_sight(blocked, pose.cell, cell)) out.push_back(cell);
    }
  return out;
}

std::vector<RevealedCell> sense(const GridWorld& world, const Pose& pose,
                                const ObservationConfig& config, std::mt19937_64& rng) {
  config.validate();
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const int classes = world.catalog().semantic_count();
  std::vector<RevealedCell> out;
  for (Cell cell : visible_cells(world, pose, config.range, config.fov_degrees)) {
    if (config.depth_dropout > 0.0 && unit(rng) < config.depth_dropout) continue;
    int label = world.label(cell);
    if (config.label_noise > 0.0 && unit(rng) < config.label_noise) {
      // Uniform over the non-unknown classes other than the true one.
      int pick = std::uniform_int_distribution<int>(1, classes - 2)(rng);
      if (pick >= label) ++pick;
      label = pick;
    }
    out.push_back({cell, world.occupancy()[cell], label});
  }
  return out;
}

LocalObservation observe(const GridWorld& world, const Pose& pose, const ObservationConfig& config,
                         int crop_size, std::mt19937_64& rng) {
  ProjectionMap map(world.height(), world.width());
  map.add(sense(world, pose, config, rng));
  return map.crop(pose, crop_size);
}

void ProjectionMap::add(const std::vector<RevealedCell>& cells) {
  for (const RevealedCell& rc : cells) {
    occupancy_[rc.cell] = rc.occupancy;
    semantics_[rc.cell] = rc.semantic;
  }
}

void ProjectionMap::clear() {
  occupancy_.fill(occupancy::kUnknown);
  semantics_.fill(semantic::kUnknown);
}

LocalObservation ProjectionMap::crop(const Pose& pose, int crop_size) const {
  LocalObservation obs{Grid<int>(crop_size, crop_size, occupancy::kUnknown),
                       Grid<int>(crop_size, crop_size, semantic::kUnknown), pose};
  for (int i = 0; i < crop_size; ++i)
    for (int j = 0; j < crop_size; ++j) {
      const Cell w = crop_to_world(pose, i, j, crop_size);
      if (!occupancy_.contains(w)) continue;
      obs.occupancy(i, j) = occupancy_[w];
      obs.semantics(i, j) = semantics_[w];
    }
  return obs;
}

Grid<int> ground_truth_semantic_crop(const GridWorld& world, const Pose& pose, int crop_size) {
  Grid<int> out(crop_size, crop_size, semantic::kWall);
  for (int i = 0; i < crop_size; ++i)
    for (int j = 0; j < crop_size; ++j) {
      const Cell w = crop_to_world(pose, i, j, crop_size);
      if (world.contains(w)) out(i, j) = world.label(w);
    }
  return out;
}

Grid<int> ground_truth_occupancy_crop(const GridWorld& world, const Pose& pose, int crop_size) {
  Grid<int> sem = ground_truth_semantic_crop(world, pose, crop_size);
  for (int& v : sem.values()) v = occupancy_of(v);
  return sem;
}

}  // namespace semnav
