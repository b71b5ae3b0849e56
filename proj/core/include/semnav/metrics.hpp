#pragma once

#include <string>
#include <vector>

#include "semnav/catalog.hpp"
#include "semnav/grid.hpp"

namespace semnav {

struct EpisodeResult {
  bool success = false;
  int path_length = 0;      // forward moves taken
  int shortest_geodesic = 0;
  int initial_distance = 0;
  int final_distance = 0;   // geodesic to the nearest target instance at the end
  int steps = 0;
  bool stop_called = false;
};

bool success(const EpisodeResult& r, int success_radius, int max_steps);

struct Aggregate {
  double mean = 0.0;
  double ci95 = 0.0;  // normal-approximation half width
  int count = 0;       // episodes that contributed
  int excluded = 0;    // episodes dropped for a zero denominator
};

// Mean and 95% half width (1.96 * sample sd / sqrt n).
Aggregate mean_ci(const std::vector<double>& values);

double spl_term(const EpisodeResult& r);
double soft_spl_term(const EpisodeResult& r);

// Episodes with a zero shortest geodesic (SPL) or zero initial distance
// (SoftSPL) are excluded and counted; a warning goes to the log sink.
Aggregate spl(const std::vector<EpisodeResult>& results);
Aggregate soft_spl(const std::vector<EpisodeResult>& results);
Aggregate success_rate(const std::vector<EpisodeResult>& results);
Aggregate dts(const std::vector<EpisodeResult>& results, double cell_size = 1.0);

struct NavSummary {
  Aggregate spl;
  Aggregate soft_spl;
  Aggregate success;
  Aggregate dts_cells;
  Aggregate dts_meters;
};

NavSummary summarize(const std::vector<EpisodeResult>& results, double cell_size);

// Dataset-level confusion counts for one class.
struct ClassCounts {
  long long tp = 0;
  long long fp = 0;
  long long fn = 0;
  long long gt = 0;  // ground-truth cells of the class
};

class ConfusionAccumulator {
 public:
  explicit ConfusionAccumulator(int num_classes = 0) : counts_(static_cast<std::size_t>(num_classes)) {}

  // Throws PreconditionError on a shape mismatch or out-of-range label.
  void add(const Grid<int>& predicted, const Grid<int>& truth);

  int num_classes() const { return static_cast<int>(counts_.size()); }
  const std::vector<ClassCounts>& counts() const { return counts_; }
  long long correct() const { return correct_; }
  long long total() const { return total_; }

 private:
  std::vector<ClassCounts> counts_;
  long long correct_ = 0;
  long long total_ = 0;
};

struct ClassScores {
  int class_index = 0;
  double accuracy = 0.0;  // TP / ground-truth cells
  double iou = 0.0;
  double f1 = 0.0;
  bool present = false;   // class occurs in the ground truth
};

struct MapMetrics {
  std::vector<ClassScores> per_class;
  double overall_accuracy = 0.0;
  // Unweighted means over classes present in the ground truth.
  double mean_accuracy = 0.0;
  double mean_iou = 0.0;
  double mean_f1 = 0.0;
};

// `skip_classes` are left out of the means (for example unknown).
MapMetrics map_metrics(const ConfusionAccumulator& acc, const std::vector<int>& skip_classes = {});
MapMetrics map_metrics(const std::vector<Grid<int>>& predicted, const std::vector<Grid<int>>& truth,
                       int num_classes, const std::vector<int>& skip_classes = {});

}  // namespace semnav
