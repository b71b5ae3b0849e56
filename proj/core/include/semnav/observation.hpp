#pragma once

#include <random>
#include <vector>

#include "semnav/grid.hpp"
#include "semnav/pose.hpp"
#include "semnav/world.hpp"

namespace semnav {

struct ObservationConfig {
  double range = 12.0;        // cells, centre to centre
  double fov_degrees = 90.0;  // >= 360 sees all around
  double label_noise = 0.0;   // probability a revealed label is replaced by a wrong class
  double depth_dropout = 0.0; // probability a revealed cell reverts to unknown

  void validate() const;
  friend bool operator==(const ObservationConfig&, const ObservationConfig&) = default;
};

// Egocentric crop: agent on the centre cell looking towards row 0. Labels are
// class indices; unseen cells are unknown (0) in both grids.
struct LocalObservation {
  Grid<int> occupancy;
  Grid<int> semantics;
  Pose pose_at_capture;

  Volume occupancy_distribution() const { return one_hot(occupancy, 3); }
  Volume semantic_distribution(int num_classes) const { return one_hot(semantics, num_classes); }
};

struct RevealedCell {
  Cell cell;
  int occupancy;
  int semantic;
};

// True when the segment between the two cell centres passes through no
// blocked cell interior (endpoints excluded). Grazing a corner is not a crossing.
bool line_of_sight(const Grid<bool>& blocked, Cell from, Cell to);

// Cells within range and field of view of the pose with line of sight, in
// row-major order. The agent's own cell is always included.
std::vector<Cell> visible_cells(const GridWorld& world, const Pose& pose, double range,
                                double fov_degrees);

// Geocentric revealed cells after dropout and label noise.
std::vector<RevealedCell> sense(const GridWorld& world, const Pose& pose,
                                const ObservationConfig& config, std::mt19937_64& rng);

// Single-view egocentric observation of crop_size x crop_size cells.
LocalObservation observe(const GridWorld& world, const Pose& pose, const ObservationConfig& config,
                         int crop_size, std::mt19937_64& rng);

// Geocentric label maps accumulated over views; newer labels overwrite older ones.
class ProjectionMap {
 public:
  ProjectionMap() = default;
  ProjectionMap(int rows, int cols)
      : occupancy_(rows, cols, occupancy::kUnknown), semantics_(rows, cols, semantic::kUnknown) {}

  void add(const std::vector<RevealedCell>& cells);
  void clear();

  const Grid<int>& occupancy() const { return occupancy_; }
  const Grid<int>& semantics() const { return semantics_; }

  LocalObservation crop(const Pose& pose, int crop_size) const;

 private:
  Grid<int> occupancy_;
  Grid<int> semantics_;
};

// Ground-truth egocentric labels. Cells beyond the world border read as wall.
Grid<int> ground_truth_semantic_crop(const GridWorld& world, const Pose& pose, int crop_size);
Grid<int> ground_truth_occupancy_crop(const GridWorld& world, const Pose& pose, int crop_size);

}  // namespace semnav
