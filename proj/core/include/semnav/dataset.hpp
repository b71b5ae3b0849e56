#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "semnav/grid.hpp"
#include "semnav/observation.hpp"
#include "semnav/predictor.hpp"

namespace semnav {

// Compact labels; inputs may hold unknown, targets never do.
struct TrainingSample {
  Grid<std::uint8_t> input_occupancy;
  Grid<std::uint8_t> input_semantics;
  Grid<std::uint8_t> target_occupancy;
  Grid<std::uint8_t> target_semantics;

  friend bool operator==(const TrainingSample&, const TrainingSample&) = default;
};

struct Dataset {
  int crop_size = 0;
  int semantic_classes = 0;
  std::vector<TrainingSample> samples;

  bool empty() const { return samples.empty(); }
  std::size_t size() const { return samples.size(); }
  void append(const Dataset& other);

  friend bool operator==(const Dataset&, const Dataset&) = default;
};

// Pairs an input observation with the ground-truth crops at the same pose.
TrainingSample make_sample(const LocalObservation& input, const GridWorld& world);

Example to_example(const TrainingSample& sample, int semantic_classes);

void save_dataset(const Dataset& dataset, const std::filesystem::path& path);
Dataset load_dataset(const std::filesystem::path& path);

}  // namespace semnav
