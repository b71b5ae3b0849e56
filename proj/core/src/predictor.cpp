#include "semnav/predictor.hpp"

#include <cmath>
#include <random>

#include "semnav/catalog.hpp"
#include "semnav/error.hpp"

namespace semnav {

nn::StageShape ArchConfig::occupancy_stage() const {
  return {occupancy::kCount, occupancy::kCount, crop_size, width1, width2, width3};
}

nn::StageShape ArchConfig::semantic_stage() const {
  return {occupancy::kCount + semantic_classes, semantic_classes, crop_size, width1, width2, width3};
}

void ArchConfig::validate() const {
  if (crop_size < 9 || crop_size % 2 == 0) throw ConfigError("crop_size must be odd and at least 9");
  if (semantic_classes < 4) throw ConfigError("semantic_classes must be at least 4");
  if (width1 < 1 || width2 < 1 || width3 < 1) throw ConfigError("layer widths must be positive");
}

namespace {

PredictorParameters initialise(const ArchConfig& arch, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  PredictorParameters p;
  p.init_seed = seed;
  p.theta_o = nn::EncoderDecoder(arch.occupancy_stage()).initial_parameters(rng);
  p.theta_s = nn::EncoderDecoder(arch.semantic_stage()).initial_parameters(rng);
  return p;
}

std::span<const float> to_float(const std::vector<double>& params, std::vector<float>& buffer) {
  buffer.assign(params.begin(), params.end());
  return buffer;
}

void check_labels(const Grid<int>& labels, int classes, int size, const char* what) {
  if (labels.rows() != size || labels.cols() != size)
    throw PreconditionError(std::string(what) + " target shape mismatch");
  for (int v : labels.values())
    if (v < 0 || v >= classes) throw PreconditionError(std::string(what) + " target label out of range");
}

}  // namespace

TwoStagePredictor::TwoStagePredictor(const ArchConfig& arch, std::uint64_t init_seed)
    : TwoStagePredictor(arch, initialise(arch, init_seed)) {}

TwoStagePredictor::TwoStagePredictor(const ArchConfig& arch, PredictorParameters params)
    : arch_(arch),
      occupancy_net_(arch.occupancy_stage()),
      semantic_net_(arch.semantic_stage()),
      params_(std::move(params)) {
  arch_.validate();
  if (params_.theta_o.size() != occupancy_net_.parameter_count() ||
      params_.theta_s.size() != semantic_net_.parameter_count())
    throw PreconditionError("parameter vector sizes do not match the architecture");
}

Volume TwoStagePredictor::predict_occupancy(const Volume& occupancy) const {
  thread_local nn::EncoderDecoder::InferenceCache cache;
  thread_local std::vector<float> params;
  Volume logits;
  occupancy_net_.infer(to_float(params_.theta_o, params), occupancy, cache, logits);
  return nn::softmax_channels(logits);
}

Volume TwoStagePredictor::predict_semantics(const Volume& predicted_occupancy, const Volume& semantics) const {
  if (predicted_occupancy.channels() != occupancy::kCount || semantics.channels() != arch_.semantic_classes)
    throw PreconditionError("semantic stage expects " + std::to_string(occupancy::kCount) + " + " +
                            std::to_string(arch_.semantic_classes) + " input channels");
  thread_local nn::EncoderDecoder::InferenceCache cache;
  thread_local std::vector<float> params;
  Volume logits;
  semantic_net_.infer(to_float(params_.theta_s, params), nn::concat_channels(predicted_occupancy, semantics), cache,
                      logits);
  return nn::softmax_channels(logits);
}

Prediction TwoStagePredictor::predict(const Volume& occupancy, const Volume& semantics) const {
  Prediction out;
  out.occupancy = predict_occupancy(occupancy);
  out.semantics = predict_semantics(out.occupancy, semantics);
  return out;
}

LossBreakdown TwoStagePredictor::loss(const Example& ex, double semantic_weight, std::span<double> grad_o,
                                      std::span<double> grad_s, double scale) const {
  const int size = arch_.crop_size;
  check_labels(ex.target_occupancy, occupancy::kCount, size, "occupancy");
  check_labels(ex.target_semantics, arch_.semantic_classes, size, "semantic");
  if (ex.semantics.channels() != arch_.semantic_classes)
    throw PreconditionError("semantic input channel count mismatch");

  thread_local nn::EncoderDecoder::Cache occ_cache, sem_cache;
  Volume occ_logits, sem_logits;
  occupancy_net_.forward(params_.theta_o, ex.occupancy, occ_cache, occ_logits);
  const Volume occ_log = nn::log_softmax_channels(occ_logits);
  Volume occ_prob = occ_log;
  for (double& v : occ_prob.values()) v = std::exp(v);
  semantic_net_.forward(params_.theta_s, nn::concat_channels(occ_prob, ex.semantics), sem_cache, sem_logits);
  const Volume sem_log = nn::log_softmax_channels(sem_logits);

  const double cells = static_cast<double>(size) * size;
  LossBreakdown out;
  for (int r = 0; r < size; ++r)
    for (int c = 0; c < size; ++c) {
      out.occupancy -= occ_log(ex.target_occupancy(r, c), r, c);
      out.semantic -= sem_log(ex.target_semantics(r, c), r, c);
    }
  out.occupancy /= cells;
  out.semantic /= cells;
  out.total = out.occupancy + semantic_weight * out.semantic;
  if (grad_o.empty() && grad_s.empty()) return out;
  if (grad_o.size() != params_.theta_o.size() || grad_s.size() != params_.theta_s.size())
    throw PreconditionError("gradient buffers do not match parameter sizes");

  // d L / d semantic logits = w (softmax - onehot) / cells
  Volume d_sem = sem_log;
  for (double& v : d_sem.values()) v = std::exp(v);
  for (int r = 0; r < size; ++r)
    for (int c = 0; c < size; ++c) d_sem(ex.target_semantics(r, c), r, c) -= 1.0;
  const double sem_scale = scale * semantic_weight / cells;
  for (double& v : d_sem.values()) v *= sem_scale;
  Volume d_sem_input;
  semantic_net_.backward(params_.theta_s, sem_cache, d_sem, grad_s, &d_sem_input);

  // Occupancy logits receive the direct loss gradient plus the softmax
  // Jacobian applied to the gradient flowing back from the semantic stage.
  Volume d_occ(occupancy::kCount, size, size);
  const double occ_scale = scale / cells;
  for (int r = 0; r < size; ++r)
    for (int c = 0; c < size; ++c) {
      double dot = 0.0;
      for (int k = 0; k < occupancy::kCount; ++k) dot += occ_prob(k, r, c) * d_sem_input(k, r, c);
      for (int k = 0; k < occupancy::kCount; ++k) {
        const double direct = occ_prob(k, r, c) - (ex.target_occupancy(r, c) == k ? 1.0 : 0.0);
        d_occ(k, r, c) = occ_scale * direct + occ_prob(k, r, c) * (d_sem_input(k, r, c) - dot);
      }
    }
  occupancy_net_.backward(params_.theta_o, occ_cache, d_occ, grad_o, nullptr);
  return out;
}

Ensemble::Ensemble(std::vector<TwoStagePredictor> members) : members_(std::move(members)) {
  if (members_.empty()) throw PreconditionError("an ensemble needs at least one member");
  for (const auto& m : members_)
    if (!(m.arch() == members_.front().arch()))
      throw PreconditionError("ensemble members must share one architecture");
}

Ensemble Ensemble::create(const ArchConfig& arch, int size, std::uint64_t base_seed) {
  if (size < 1) throw ConfigError("ensemble size must be at least 1");
  std::vector<TwoStagePredictor> members;
  for (int i = 0; i < size; ++i) members.emplace_back(arch, base_seed * 1000003ULL + static_cast<std::uint64_t>(i));
  return Ensemble(std::move(members));
}

const ArchConfig& Ensemble::arch() const {
  if (members_.empty()) throw PreconditionError("empty ensemble");
  return members_.front().arch();
}

std::vector<Prediction> Ensemble::predict(const Volume& occupancy, const Volume& semantics) const {
  std::vector<Prediction> out;
  out.reserve(members_.size());
  for (const auto& m : members_) out.push_back(m.predict(occupancy, semantics));
  return out;
}

std::vector<Volume> ensemble_predict(const Ensemble& ensemble, const Volume& occupancy, const Volume& semantics) {
  std::vector<Volume> out;
  for (auto& p : ensemble.predict(occupancy, semantics)) out.push_back(std::move(p.semantics));
  return out;
}

}  // namespace semnav
