#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <vector>

#include "semnav/dataset.hpp"
#include "semnav/predictor.hpp"

namespace semnav {

struct TrainConfig {
  double learning_rate = 0.0002;
  int batch_size = 8;
  int epochs = 1;
  // Stops early once this many optimizer steps ran; negative means no cap.
  int max_steps = -1;
  double semantic_weight = 1.0;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  std::uint64_t shuffle_seed = 0;
  // Loss is logged every `log_every` steps (and always on the last step).
  int log_every = 10;
  // Members train on separate threads when > 1.
  int workers = 1;

  void validate() const;
  friend bool operator==(const TrainConfig&, const TrainConfig&) = default;
};

struct LossRecord {
  int step = 0;
  int member = 0;
  double occupancy = 0.0;
  double semantic = 0.0;
  double total = 0.0;
};

// Adam moments for one flat parameter vector.
class AdamState {
 public:
  explicit AdamState(std::size_t n = 0) : m_(n, 0.0), v_(n, 0.0) {}
  void step(std::span<double> params, std::span<const double> grad, const TrainConfig& config);

 private:
  std::vector<double> m_;
  std::vector<double> v_;
  long t_ = 0;
};

// Trains one member in place; the shuffle order derives from shuffle_seed and
// the member index. Throws TrainingError on a non-finite loss.
std::vector<LossRecord> train_member(TwoStagePredictor& member, int member_index, const Dataset& dataset,
                                     const TrainConfig& config);

// Trains every member independently on the same dataset. Records are ordered
// by member, then step.
std::vector<LossRecord> train(Ensemble& ensemble, const Dataset& dataset, const TrainConfig& config);

// CSV with header step,member,L_occ,L_sem,L_total.
void write_training_log(const std::vector<LossRecord>& records, const std::filesystem::path& path);

// Mean loss of a predictor over a dataset (no gradient).
LossBreakdown evaluate_loss(const TwoStagePredictor& member, const Dataset& dataset, double semantic_weight);

}  // namespace semnav
