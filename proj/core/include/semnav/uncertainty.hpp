#pragma once

#include <span>

#include "semnav/grid.hpp"

namespace semnav {

struct ClassBeliefStats {
  Volume mean;
  Volume variance;  // population variance across members
  int member_count = 0;
};

// Needs at least two members of identical shape.
ClassBeliefStats ensemble_stats(std::span<const Volume> predictions);

// Shannon entropy in nats per cell, with 0 ln 0 = 0.
Grid<double> entropy_map(const Volume& distribution);

// Mutual information: H(mean) minus the mean member entropy, clamped at 0.
Grid<double> bald_map(std::span<const Volume> predictions);

// Variance averaged over all classes per cell.
Grid<double> mean_class_variance(const ClassBeliefStats& stats);

}  // namespace semnav
