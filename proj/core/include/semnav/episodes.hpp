#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

#include "semnav/pose.hpp"
#include "semnav/world.hpp"

namespace semnav {

enum class Difficulty { easy, hard };

std::string_view difficulty_name(Difficulty d);
Difficulty parse_difficulty(std::string_view name);

struct EpisodeConfig {
  double easy_ratio = 1.05;
  double hard_ratio = 1.1;
  // Negative: 0.35 * min(width, height) of the world being sampled.
  int hard_min_geodesic = -1;
  // Every episode starts at least this far (geodesic) from the target.
  int min_geodesic = 1;
  int max_retries = 20000;
  // Empty: any object class present in the world.
  std::vector<int> target_classes;

  int resolved_hard_min_geodesic(const GridWorld& world) const;
  friend bool operator==(const EpisodeConfig&, const EpisodeConfig&) = default;
};

struct Episode {
  std::uint64_t world_seed = 0;
  Pose start;
  int target_class = 0;
  int geodesic_start_to_target = 0;     // 4-connected, cells
  double euclidean_start_to_target = 0; // to the nearest instance, cells
  double path_ratio = 1.0;              // octile geodesic / euclidean
  Difficulty difficulty = Difficulty::easy;

  friend bool operator==(const Episode&, const Episode&) = default;
};

// Rejection sampling. Hard: path_ratio >= hard_ratio and geodesic >=
// hard_min_geodesic. Easy: path_ratio >= easy_ratio and not hard. Throws
// SamplingError naming the difficulty when the retry budget runs out.
std::vector<Episode> sample_episodes(const GridWorld& world, int n, Difficulty difficulty,
                                     const EpisodeConfig& config, std::mt19937_64& rng);

}  // namespace semnav
