#include "semnav/training.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include "semnav/error.hpp"
#include "semnav/workers.hpp"

namespace semnav {

void TrainConfig::validate() const {
  if (learning_rate < 0.0) throw ConfigError("learning rate must be non-negative");
  if (batch_size < 1) throw ConfigError("batch size must be positive");
  if (epochs < 0) throw ConfigError("epochs must be non-negative");
  if (semantic_weight < 0.0) throw ConfigError("semantic weight must be non-negative");
  if (log_every < 1) throw ConfigError("log_every must be positive");
}

void AdamState::step(std::span<double> params, std::span<const double> grad, const TrainConfig& config) {
  ++t_;
  const double c1 = 1.0 - std::pow(config.beta1, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(config.beta2, static_cast<double>(t_));
  for (std::size_t i = 0; i < params.size(); ++i) {
    m_[i] = config.beta1 * m_[i] + (1.0 - config.beta1) * grad[i];
    v_[i] = config.beta2 * v_[i] + (1.0 - config.beta2) * grad[i] * grad[i];
    const double update = config.learning_rate * (m_[i] / c1) / (std::sqrt(v_[i] / c2) + config.epsilon);
    params[i] -= update;
  }
}

std::vector<LossRecord> train_member(TwoStagePredictor& member, int member_index, const Dataset& dataset,
                                     const TrainConfig& config) {
  config.validate();
  if (dataset.empty()) throw PreconditionError("cannot train on an empty dataset");
  if (dataset.crop_size != member.arch().crop_size || dataset.semantic_classes != member.arch().semantic_classes)
    throw PreconditionError("dataset shape does not match the predictor architecture");

  PredictorParameters& params = member.parameters();
  AdamState adam_o(params.theta_o.size()), adam_s(params.theta_s.size());
  std::vector<double> grad_o(params.theta_o.size()), grad_s(params.theta_s.size());
  std::mt19937_64 rng(config.shuffle_seed * 7919ULL + static_cast<std::uint64_t>(member_index));
  std::vector<std::size_t> order(dataset.size());

  std::vector<LossRecord> log;
  const std::size_t batch = static_cast<std::size_t>(config.batch_size);
  const std::size_t batches_per_epoch = (dataset.size() + batch - 1) / batch;
  long total_steps = static_cast<long>(batches_per_epoch) * config.epochs;
  if (config.max_steps >= 0) total_steps = std::min<long>(total_steps, config.max_steps);

  int step = 0;
  for (int epoch = 0; epoch < config.epochs && step < total_steps; ++epoch) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t b = 0; b < batches_per_epoch && step < total_steps; ++b) {
      std::fill(grad_o.begin(), grad_o.end(), 0.0);
      std::fill(grad_s.begin(), grad_s.end(), 0.0);
      const std::size_t begin = b * batch;
      const std::size_t end = std::min(begin + batch, dataset.size());
      const double scale = 1.0 / static_cast<double>(end - begin);
      LossBreakdown mean;
      for (std::size_t i = begin; i < end; ++i) {
        const Example ex = to_example(dataset.samples[order[i]], dataset.semantic_classes);
        const LossBreakdown l = member.loss(ex, config.semantic_weight, grad_o, grad_s, scale);
        mean.occupancy += l.occupancy * scale;
        mean.semantic += l.semantic * scale;
        mean.total += l.total * scale;
      }
      if (!std::isfinite(mean.total)) {
        std::ostringstream msg;
        msg << "non-finite loss at step " << step << ", member " << member_index << ", batch " << b
            << " of epoch " << epoch << " (L_occ=" << mean.occupancy << ", L_sem=" << mean.semantic << ")";
        throw TrainingError(msg.str());
      }
      adam_o.step(params.theta_o, grad_o, config);
      adam_s.step(params.theta_s, grad_s, config);
      if (step % config.log_every == 0 || step + 1 == total_steps)
        log.push_back({step, member_index, mean.occupancy, mean.semantic, mean.total});
      ++step;
    }
  }
  return log;
}

std::vector<LossRecord> train(Ensemble& ensemble, const Dataset& dataset, const TrainConfig& config) {
  const int n = ensemble.size();
  std::vector<std::vector<LossRecord>> logs(static_cast<std::size_t>(n));
  parallel_for(n, config.workers, [&](int i) {
    const auto k = static_cast<std::size_t>(i);
    logs[k] = train_member(ensemble.members()[k], i, dataset, config);
  });
  std::vector<LossRecord> all;
  for (auto& l : logs) all.insert(all.end(), l.begin(), l.end());
  return all;
}

void write_training_log(const std::vector<LossRecord>& records, const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream os(path);
  if (!os) throw Error("cannot write training log: " + path.string());
  os << "step,member,L_occ,L_sem,L_total\n";
  os.precision(8);
  for (const LossRecord& r : records)
    os << r.step << ',' << r.member << ',' << r.occupancy << ',' << r.semantic << ',' << r.total << '\n';
}

LossBreakdown evaluate_loss(const TwoStagePredictor& member, const Dataset& dataset, double semantic_weight) {
  LossBreakdown mean;
  if (dataset.empty()) return mean;
  for (const TrainingSample& s : dataset.samples) {
    const LossBreakdown l = member.loss(to_example(s, dataset.semantic_classes), semantic_weight);
    mean.occupancy += l.occupancy;
    mean.semantic += l.semantic;
    mean.total += l.total;
  }
  const double n = static_cast<double>(dataset.size());
  return {mean.occupancy / n, mean.semantic / n, mean.total / n};
}

}  // namespace semnav
