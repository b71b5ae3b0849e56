#pragma once

#include <vector>

#include "semnav/catalog.hpp"
#include "semnav/grid.hpp"
#include "semnav/pose.hpp"

namespace semnav {

// Where one egocentric crop cell lands on the global map.
struct Placement {
  int crop_row = 0;
  int crop_col = 0;
  Cell cell;
};

// Crop cells of a size x size egocentric crop centred on the pose, rotated so
// crop-up points along the heading. Cells outside the map are dropped.
std::vector<Placement> egocentric_to_geocentric(int crop_size, const Pose& pose, int map_rows, int map_cols);

// Rotates a square grid clockwise by quarter turns.
template <typename T>
Grid<T> rotate_clockwise(const Grid<T>& g, int quarter_turns) {
  Grid<T> out = g;
  const int n = g.rows();
  for (int t = 0; t < ((quarter_turns % 4) + 4) % 4; ++t) {
    Grid<T> next(n, n);
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) next(c, n - 1 - r) = out(r, c);
    out = std::move(next);
  }
  return out;
}

// Geocentric belief over one episode. Semantic and occupancy beliefs are
// fused independently by Bayes' rule in log space and kept normalized.
class GlobalBeliefMap {
 public:
  GlobalBeliefMap() = default;
  GlobalBeliefMap(int rows, int cols, int semantic_classes, int occupancy_classes = occupancy::kCount);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int semantic_classes() const { return semantic_.channels(); }
  bool contains(Cell c) const { return observed_.contains(c); }

  const Volume& semantic_belief() const { return semantic_; }
  const Volume& occupancy_belief() const { return occupancy_; }
  const Volume& uncertainty() const { return uncertainty_; }
  const Grid<double>& entropy() const { return entropy_; }
  const Grid<double>& bald() const { return bald_; }
  const Grid<bool>& observed_mask() const { return observed_; }

  double semantic_probability(int k, Cell c) const { return semantic_(k, c.row, c.col); }
  double occupied_probability(Cell c) const { return occupancy_(occupancy::kOccupied, c.row, c.col); }
  bool observed(Cell c) const { return observed_[c] != 0; }

  // Crops are class x size x size distributions in the egocentric frame of
  // `pose`. Throws PreconditionError if a cell is not normalized.
  void register_semantics(const Volume& crop, const Pose& pose);
  void register_occupancy(const Volume& crop, const Pose& pose);

  // Last write wins on covered cells.
  void register_uncertainty(const Volume& variance_crop, const Pose& pose);
  void register_entropy(const Grid<double>& crop, const Pose& pose);
  void register_bald(const Grid<double>& crop, const Pose& pose);

  // A collision proved the cell blocked; its occupancy belief becomes certain.
  void mark_occupied(Cell c);

 private:
  void fuse(Volume& belief, Volume& log_belief, const Volume& crop, const Pose& pose, bool mark);
  void overwrite(Grid<double>& field, const Grid<double>& crop, const Pose& pose);

  int rows_ = 0;
  int cols_ = 0;
  Volume semantic_;
  Volume log_semantic_;
  Volume occupancy_;
  Volume log_occupancy_;
  Volume uncertainty_;
  Grid<double> entropy_;
  Grid<double> bald_;
  Grid<bool> observed_;
};

// Uniform prior over the catalog's semantic and occupancy classes.
GlobalBeliefMap init_global(int rows, int cols, const ClassCatalog& catalog);

}  // namespace semnav
