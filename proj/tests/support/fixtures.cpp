#include "support/fixtures.hpp"

#include <atomic>
#include <stdexcept>

#include <unistd.h>

#include "semnav/catalog.hpp"
#include "semnav/observation.hpp"

namespace fixture {

using namespace semnav;

GridWorld world_from_ascii(const std::vector<std::string>& rows, std::uint64_t seed) {
  const int h = static_cast<int>(rows.size());
  const int w = static_cast<int>(rows.front().size());
  Grid<int> labels(h, w, semantic::kFloor);
  for (int r = 0; r < h; ++r)
    for (int c = 0; c < w; ++c) {
      const char ch = rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
      if (ch == '#')
        labels(r, c) = semantic::kWall;
      else if (ch == '.')
        labels(r, c) = semantic::kFloor;
      else if (ch >= '0' && ch <= '8')
        labels(r, c) = ch - '0';
      else
        throw std::invalid_argument("bad map character");
    }
  return GridWorld(seed, 0.1, ClassCatalog::standard(), std::move(labels));
}

GridWorld open_room(int interior_rows, int interior_cols, std::uint64_t seed) {
  std::vector<std::string> rows;
  const std::string wall(static_cast<std::size_t>(interior_cols + 2), '#');
  rows.push_back(wall);
  for (int r = 0; r < interior_rows; ++r) rows.push_back("#" + std::string(static_cast<std::size_t>(interior_cols), '.') + "#");
  rows.push_back(wall);
  return world_from_ascii(rows, seed);
}

Volume random_distribution(int channels, int rows, int cols, std::mt19937_64& rng, double sharpness) {
  std::gamma_distribution<double> gamma(1.0 / sharpness, 1.0);
  Volume v(channels, rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) {
      double sum = 0.0;
      for (int k = 0; k < channels; ++k) sum += v(k, r, c) = gamma(rng) + 1e-12;
      for (int k = 0; k < channels; ++k) v(k, r, c) /= sum;
    }
  return v;
}

GlobalBeliefMap random_belief(int rows, int cols, std::mt19937_64& rng, double blocked_fraction) {
  const int k = ClassCatalog::standard().semantic_count();
  GlobalBeliefMap map(rows, cols, k);
  // A crop large enough to cover the whole map from its centre, facing north.
  const int size = 2 * std::max(rows, cols) + 1;
  const Pose centre{{rows / 2, cols / 2}, Heading::north};
  map.register_semantics(random_distribution(k, size, size, rng, 0.5), centre);
  Volume occ(occupancy::kCount, size, size);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int r = 0; r < size; ++r)
    for (int c = 0; c < size; ++c) {
      const double p_occ = u(rng) < blocked_fraction ? 0.9 : 0.05;
      occ(occupancy::kUnknown, r, c) = 0.02;
      occ(occupancy::kOccupied, r, c) = p_occ;
      occ(occupancy::kFree, r, c) = 0.98 - p_occ;
    }
  map.register_occupancy(occ, centre);
  Volume var(k, size, size);
  for (double& x : var.values()) x = 0.25 * u(rng) * u(rng);
  map.register_uncertainty(var, centre);
  Grid<double> field(size, size);
  for (double& x : field.values()) x = u(rng);
  map.register_entropy(field, centre);
  for (double& x : field.values()) x = u(rng);
  map.register_bald(field, centre);
  return map;
}

ArchConfig small_arch() {
  ArchConfig a;
  a.crop_size = 11;
  a.width1 = 4;
  a.width2 = 6;
  a.width3 = 6;
  return a;
}

Example random_example(const ArchConfig& arch, std::mt19937_64& rng) {
  const int n = arch.crop_size;
  std::uniform_int_distribution<int> sem(1, arch.semantic_classes - 1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Example ex;
  ex.target_semantics = Grid<int>(n, n);
  ex.target_occupancy = Grid<int>(n, n);
  Grid<int> in_sem(n, n, 0), in_occ(n, n, 0);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) {
      const int s = sem(rng);
      ex.target_semantics(r, c) = s;
      ex.target_occupancy(r, c) = occupancy_of(s);
      if (u(rng) < 0.5) {
        in_sem(r, c) = s;
        in_occ(r, c) = occupancy_of(s);
      }
    }
  ex.occupancy = one_hot(in_occ, occupancy::kCount);
  ex.semantics = one_hot(in_sem, arch.semantic_classes);
  return ex;
}

Dataset single_sample_dataset(const ArchConfig& arch, std::uint64_t world_seed) {
  WorldConfig wc;
  const GridWorld world = generate_world(world_seed, wc);
  std::mt19937_64 rng(world_seed);
  ObservationConfig obs;
  obs.fov_degrees = 360.0;
  obs.range = 2.0 * arch.crop_size;
  const auto free = world.free_cells();
  // The free cell with the most object cells in its crop makes a richer sample.
  Pose best{free.front(), Heading::north};
  int best_objects = -1;
  for (std::size_t i = 0; i < free.size(); i += 7) {
    const Pose p{free[i], Heading::north};
    int objects = 0;
    for (int v : ground_truth_semantic_crop(world, p, arch.crop_size).values())
      objects += v >= semantic::kFirstObject;
    if (objects > best_objects) {
      best_objects = objects;
      best = p;
    }
  }
  Dataset d;
  d.crop_size = arch.crop_size;
  d.semantic_classes = arch.semantic_classes;
  d.samples.push_back(make_sample(observe(world, best, obs, arch.crop_size, rng), world));
  return d;
}

std::vector<EpisodeResult> five_episodes() {
  // success, path_length p, shortest l, initial d0, final dT, steps, stop_called
  return {
      {true, 10, 10, 10, 0, 14, true},    // optimal success
      {true, 20, 10, 10, 5, 30, true},    // success on a path twice as long
      {false, 20, 10, 10, 5, 500, false}, // timeout halfway to the target
      {false, 0, 8, 8, 8, 500, false},    // never moved
      {false, 12, 6, 6, 11, 40, true},    // stopped too far, moved away
  };
}

namespace {
std::atomic<int> counter{0};
}

TempDir::TempDir(const std::string& tag) {
  path_ = std::filesystem::temp_directory_path() /
          ("semnav_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
  std::filesystem::remove_all(path_);
  std::filesystem::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

}  // namespace fixture
