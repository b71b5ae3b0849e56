#pragma once

#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "semnav/belief.hpp"
#include "semnav/dataset.hpp"
#include "semnav/metrics.hpp"
#include "semnav/predictor.hpp"
#include "semnav/world.hpp"

namespace fixture {

// '#' wall, '.' floor, '0'-'8' the semantic class with that index.
semnav::GridWorld world_from_ascii(const std::vector<std::string>& rows, std::uint64_t seed = 0);

// An open room of the given interior size surrounded by walls.
semnav::GridWorld open_room(int interior_rows, int interior_cols, std::uint64_t seed = 0);

// Random per-cell distribution volume (channels x rows x cols).
semnav::Volume random_distribution(int channels, int rows, int cols, std::mt19937_64& rng, double sharpness = 1.0);

// Belief map whose every cell has been registered once with random semantic,
// occupancy and variance crops, so scores and eligibility are non-trivial.
semnav::GlobalBeliefMap random_belief(int rows, int cols, std::mt19937_64& rng, double blocked_fraction = 0.2);

// A small architecture used where full-size networks are needlessly slow.
semnav::ArchConfig small_arch();

// A random but well-formed training example for the architecture.
semnav::Example random_example(const semnav::ArchConfig& arch, std::mt19937_64& rng);

// One sample with every cell of the crop observed: the input equals the target.
semnav::Dataset single_sample_dataset(const semnav::ArchConfig& arch, std::uint64_t world_seed);

// Hand-made episodes with metric values worked out by hand (see the test).
std::vector<semnav::EpisodeResult> five_episodes();

// A fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag);
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace fixture
