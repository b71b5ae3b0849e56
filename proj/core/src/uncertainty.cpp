#include "semnav/uncertainty.hpp"

#include <algorithm>
#include <cmath>

#include "semnav/error.hpp"

namespace semnav {

namespace {

void check_members(std::span<const Volume> predictions, std::size_t minimum) {
  if (predictions.size() < minimum)
    throw PreconditionError("ensemble statistics need at least " + std::to_string(minimum) + " members, got " +
                            std::to_string(predictions.size()));
  for (const Volume& v : predictions)
    if (!v.same_shape(predictions.front())) throw PreconditionError("ensemble members differ in shape");
}

}  // namespace

ClassBeliefStats ensemble_stats(std::span<const Volume> predictions) {
  check_members(predictions, 2);
  const Volume& first = predictions.front();
  ClassBeliefStats s{Volume(first.channels(), first.rows(), first.cols()),
                     Volume(first.channels(), first.rows(), first.cols()), static_cast<int>(predictions.size())};
  const double n = static_cast<double>(predictions.size());
  const std::size_t total = first.values().size();
  for (std::size_t i = 0; i < total; ++i) {
    const double base = first.values()[i];
    double shift = 0.0;
    for (const Volume& v : predictions) shift += v.values()[i] - base;
    const double mean = base + shift / n;
    double sq = 0.0;
    for (const Volume& v : predictions) {
      const double d = v.values()[i] - mean;
      sq += d * d;
    }
    s.mean.values()[i] = mean;
    s.variance.values()[i] = sq / n;
  }
  return s;
}

Grid<double> entropy_map(const Volume& distribution) {
  Grid<double> h(distribution.rows(), distribution.cols(), 0.0);
  for (int k = 0; k < distribution.channels(); ++k)
    for (int r = 0; r < distribution.rows(); ++r)
      for (int c = 0; c < distribution.cols(); ++c) {
        const double p = distribution(k, r, c);
        if (p > 0.0) h(r, c) -= p * std::log(p);
      }
  return h;
}

Grid<double> bald_map(std::span<const Volume> predictions) {
  check_members(predictions, 1);
  const Volume& first = predictions.front();
  const double n = static_cast<double>(predictions.size());
  Volume mean(first.channels(), first.rows(), first.cols());
  for (std::size_t i = 0; i < mean.values().size(); ++i) {
    const double base = first.values()[i];
    double shift = 0.0;
    for (const Volume& v : predictions) shift += v.values()[i] - base;
    mean.values()[i] = base + shift / n;
  }

  Grid<double> out(first.rows(), first.cols(), 0.0);
  for (const Volume& v : predictions)
    for (int k = 0; k < first.channels(); ++k)
      for (int r = 0; r < first.rows(); ++r)
        for (int c = 0; c < first.cols(); ++c) {
          const double p = v(k, r, c);
          if (p > 0.0) out(r, c) += p * (std::log(p) - std::log(mean(k, r, c))) / n;
        }
  for (double& x : out.values()) x = std::max(0.0, x);
  return out;
}

Grid<double> mean_class_variance(const ClassBeliefStats& stats) {
  const Volume& var = stats.variance;
  Grid<double> out(var.rows(), var.cols(), 0.0);
  if (var.channels() == 0) return out;
  for (int k = 0; k < var.channels(); ++k)
    for (int r = 0; r < var.rows(); ++r)
      for (int c = 0; c < var.cols(); ++c) out(r, c) += var(k, r, c);
  for (double& x : out.values()) x /= var.channels();
  return out;
}

}  // namespace semnav
