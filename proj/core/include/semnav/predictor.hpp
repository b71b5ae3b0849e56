#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "semnav/grid.hpp"
#include "semnav/nn.hpp"

namespace semnav {

struct ArchConfig {
  int crop_size = 33;
  int semantic_classes = 9;
  int width1 = 8;
  int width2 = 16;
  int width3 = 16;

  nn::StageShape occupancy_stage() const;
  nn::StageShape semantic_stage() const;
  void validate() const;
  friend bool operator==(const ArchConfig&, const ArchConfig&) = default;
};

struct PredictorParameters {
  std::vector<double> theta_o;  // occupancy stage
  std::vector<double> theta_s;  // semantic stage
  std::uint64_t init_seed = 0;

  friend bool operator==(const PredictorParameters&, const PredictorParameters&) = default;
};

// One supervised example in volume form.
struct Example {
  Volume occupancy;          // p_t, 3 x h x w one-hot
  Volume semantics;          // s_t, K x h x w one-hot
  Grid<int> target_occupancy;
  Grid<int> target_semantics;
};

struct LossBreakdown {
  double occupancy = 0.0;
  double semantic = 0.0;
  double total = 0.0;
};

struct Prediction {
  Volume occupancy;  // p-hat, 3 x h x w
  Volume semantics;  // m-hat, K x h x w
};

// Occupancy stage f_o(p) followed by semantic stage f_s(p-hat (+) s).
class TwoStagePredictor {
 public:
  TwoStagePredictor(const ArchConfig& arch, std::uint64_t init_seed);
  TwoStagePredictor(const ArchConfig& arch, PredictorParameters params);

  const ArchConfig& arch() const { return arch_; }
  const PredictorParameters& parameters() const { return params_; }
  PredictorParameters& parameters() { return params_; }

  Volume predict_occupancy(const Volume& occupancy) const;
  Volume predict_semantics(const Volume& predicted_occupancy, const Volume& semantics) const;
  Prediction predict(const Volume& occupancy, const Volume& semantics) const;

  // Mean per-cell cross-entropy of both stages, L = L_occ + w * L_sem. When the
  // gradient spans are non-empty they receive dL/dtheta (accumulated, scaled by
  // `scale`). The semantic loss backpropagates into the occupancy stage.
  LossBreakdown loss(const Example& example, double semantic_weight, std::span<double> grad_o = {},
                     std::span<double> grad_s = {}, double scale = 1.0) const;

 private:
  ArchConfig arch_;
  nn::EncoderDecoder occupancy_net_;
  nn::EncoderDecoder semantic_net_;
  PredictorParameters params_;
};

class Ensemble {
 public:
  Ensemble() = default;
  explicit Ensemble(std::vector<TwoStagePredictor> members);
  // Member i is initialised from seed base_seed * 1000003 + i.
  static Ensemble create(const ArchConfig& arch, int size, std::uint64_t base_seed);

  int size() const { return static_cast<int>(members_.size()); }
  const ArchConfig& arch() const;
  const std::vector<TwoStagePredictor>& members() const { return members_; }
  std::vector<TwoStagePredictor>& members() { return members_; }

  // Both stages per member, in member order.
  std::vector<Prediction> predict(const Volume& occupancy, const Volume& semantics) const;

 private:
  std::vector<TwoStagePredictor> members_;
};

// Semantic outputs m-hat of every member, in member order.
std::vector<Volume> ensemble_predict(const Ensemble& ensemble, const Volume& occupancy,
                                     const Volume& semantics);

}  // namespace semnav
