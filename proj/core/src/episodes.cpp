#include "semnav/episodes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>

#include "semnav/error.hpp"
#include "semnav/geodesic.hpp"

namespace semnav {

std::string_view difficulty_name(Difficulty d) { return d == Difficulty::easy ? "easy" : "hard"; }

Difficulty parse_difficulty(std::string_view name) {
  if (name == "easy") return Difficulty::easy;
  if (name == "hard") return Difficulty::hard;
  throw ConfigError("unknown difficulty: " + std::string(name));
}

int EpisodeConfig::resolved_hard_min_geodesic(const GridWorld& world) const {
  if (hard_min_geodesic >= 0) return hard_min_geodesic;
  return static_cast<int>(std::lround(0.35 * std::min(world.width(), world.height())));
}

namespace {

struct TargetFields {
  std::vector<Cell> instances;
  Grid<int> geodesic;
  Grid<double> octile;
};

}  // namespace

std::vector<Episode> sample_episodes(const GridWorld& world, int n, Difficulty difficulty,
                                     const EpisodeConfig& config, std::mt19937_64& rng) {
  std::vector<int> classes = config.target_classes;
  if (classes.empty()) classes = world.present_object_classes();
  for (int cls : classes) {
    if (ClassCatalog::is_structural(cls) || cls >= world.catalog().semantic_count())
      throw PreconditionError("episode target must be an object class");
    if (world.cells_of_class(cls).empty())
      throw PreconditionError("world has no instance of target class " +
                              world.catalog().semantic_name(cls));
  }
  if (classes.empty()) throw PreconditionError("world has no object instances to target");

  std::map<int, TargetFields> fields;
  for (int cls : classes) {
    TargetFields f;
    f.instances = world.cells_of_class(cls);
    f.geodesic = distance_field(world.free_mask(), f.instances);
    f.octile = octile_distance_field(world.free_mask(), f.instances);
    fields.emplace(cls, std::move(f));
  }

  const std::vector<Cell> free = world.free_cells();
  const int hard_min = config.resolved_hard_min_geodesic(world);
  std::uniform_int_distribution<std::size_t> pick_cell(0, free.size() - 1);
  std::uniform_int_distribution<std::size_t> pick_class(0, classes.size() - 1);
  std::uniform_int_distribution<int> pick_heading(0, 3);

  std::vector<Episode> out;
  int attempts = 0;
  while (static_cast<int>(out.size()) < n) {
    if (attempts++ >= config.max_retries)
      throw SamplingError("episode sampling exhausted " + std::to_string(config.max_retries) +
                          " retries: no " + std::string(difficulty_name(difficulty)) +
                          " episodes satisfy the difficulty predicate in world " +
                          std::to_string(world.seed()));
    const Cell start = free[pick_cell(rng)];
    const int cls = classes[pick_class(rng)];
    const Heading heading = static_cast<Heading>(pick_heading(rng));
    const TargetFields& f = fields.at(cls);
    const int geodesic = f.geodesic[start];
    if (geodesic == kUnreachable || geodesic < config.min_geodesic || geodesic == 0) continue;
    double euclid = std::numeric_limits<double>::infinity();
    for (Cell t : f.instances)
      euclid = std::min(euclid, std::hypot(double(t.row - start.row), double(t.col - start.col)));
    const double ratio = f.octile[start] / euclid;
    const bool hard = ratio >= config.hard_ratio && geodesic >= hard_min;
    const bool accept = difficulty == Difficulty::hard ? hard : (!hard && ratio >= config.easy_ratio);
    if (!accept) continue;
    out.push_back(Episode{world.seed(), Pose{start, heading}, cls, geodesic, euclid, ratio, difficulty});
  }
  return out;
}

}  // namespace semnav
