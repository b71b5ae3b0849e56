#include "semnav/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>

#include "semnav/error.hpp"

namespace semnav {

bool success(const EpisodeResult& r, int success_radius, int max_steps) {
  return r.stop_called && r.final_distance <= success_radius && r.steps <= max_steps;
}

Aggregate mean_ci(const std::vector<double>& values) {
  Aggregate a;
  a.count = static_cast<int>(values.size());
  if (values.empty()) return a;
  double sum = 0.0;
  for (double v : values) sum += v;
  a.mean = sum / a.count;
  if (a.count > 1) {
    double sq = 0.0;
    for (double v : values) sq += (v - a.mean) * (v - a.mean);
    a.ci95 = 1.96 * std::sqrt(sq / (a.count - 1)) / std::sqrt(static_cast<double>(a.count));
  }
  return a;
}

double spl_term(const EpisodeResult& r) {
  if (!r.success) return 0.0;
  const double l = r.shortest_geodesic;
  return l / std::max<double>(r.path_length, l);
}

double soft_spl_term(const EpisodeResult& r) {
  const double d0 = r.initial_distance;
  const double progress = std::max(0.0, 1.0 - r.final_distance / d0);
  return progress * d0 / std::max<double>(r.path_length, d0);
}

namespace {

template <typename Term, typename Keep>
Aggregate aggregate(const std::vector<EpisodeResult>& results, Term term, Keep keep, const char* name) {
  std::vector<double> values;
  int excluded = 0;
  for (const EpisodeResult& r : results) {
    if (!keep(r)) {
      ++excluded;
      continue;
    }
    values.push_back(term(r));
  }
  if (excluded > 0)
    std::cerr << "warning: " << name << " excluded " << excluded << " episode(s) with a zero distance\n";
  Aggregate a = mean_ci(values);
  a.excluded = excluded;
  return a;
}

}  // namespace

Aggregate spl(const std::vector<EpisodeResult>& results) {
  return aggregate(results, spl_term, [](const EpisodeResult& r) { return r.shortest_geodesic > 0; }, "SPL");
}

Aggregate soft_spl(const std::vector<EpisodeResult>& results) {
  return aggregate(results, soft_spl_term, [](const EpisodeResult& r) { return r.initial_distance > 0; }, "SoftSPL");
}

Aggregate success_rate(const std::vector<EpisodeResult>& results) {
  std::vector<double> v;
  for (const EpisodeResult& r : results) v.push_back(r.success ? 1.0 : 0.0);
  return mean_ci(v);
}

Aggregate dts(const std::vector<EpisodeResult>& results, double cell_size) {
  std::vector<double> v;
  for (const EpisodeResult& r : results) v.push_back(r.final_distance * cell_size);
  return mean_ci(v);
}

NavSummary summarize(const std::vector<EpisodeResult>& results, double cell_size) {
  return {spl(results), soft_spl(results), success_rate(results), dts(results, 1.0), dts(results, cell_size)};
}

void ConfusionAccumulator::add(const Grid<int>& predicted, const Grid<int>& truth) {
  if (predicted.rows() != truth.rows() || predicted.cols() != truth.cols())
    throw PreconditionError("prediction and ground truth differ in shape");
  const int k = num_classes();
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const int p = predicted.values()[i];
    const int t = truth.values()[i];
    if (p < 0 || p >= k || t < 0 || t >= k) throw PreconditionError("label out of range in map metrics");
    ++counts_[static_cast<std::size_t>(t)].gt;
    if (p == t) {
      ++counts_[static_cast<std::size_t>(t)].tp;
      ++correct_;
    } else {
      ++counts_[static_cast<std::size_t>(p)].fp;
      ++counts_[static_cast<std::size_t>(t)].fn;
    }
    ++total_;
  }
}

MapMetrics map_metrics(const ConfusionAccumulator& acc, const std::vector<int>& skip_classes) {
  MapMetrics m;
  m.overall_accuracy = acc.total() > 0 ? static_cast<double>(acc.correct()) / acc.total() : 0.0;
  int present = 0;
  for (int k = 0; k < acc.num_classes(); ++k) {
    const ClassCounts& c = acc.counts()[static_cast<std::size_t>(k)];
    ClassScores s;
    s.class_index = k;
    s.present = c.gt > 0;
    const double tp = static_cast<double>(c.tp);
    if (c.gt > 0) s.accuracy = tp / c.gt;
    if (c.tp + c.fp + c.fn > 0) {
      s.iou = tp / (c.tp + c.fp + c.fn);
      s.f1 = 2.0 * tp / (2 * c.tp + c.fp + c.fn);
    }
    m.per_class.push_back(s);
    const bool skipped = std::find(skip_classes.begin(), skip_classes.end(), k) != skip_classes.end();
    if (s.present && !skipped) {
      m.mean_accuracy += s.accuracy;
      m.mean_iou += s.iou;
      m.mean_f1 += s.f1;
      ++present;
    }
  }
  if (present > 0) {
    m.mean_accuracy /= present;
    m.mean_iou /= present;
    m.mean_f1 /= present;
  }
  return m;
}

MapMetrics map_metrics(const std::vector<Grid<int>>& predicted, const std::vector<Grid<int>>& truth, int num_classes,
                       const std::vector<int>& skip_classes) {
  if (predicted.size() != truth.size()) throw PreconditionError("prediction and ground-truth counts differ");
  ConfusionAccumulator acc(num_classes);
  for (std::size_t i = 0; i < truth.size(); ++i) acc.add(predicted[i], truth[i]);
  return map_metrics(acc, skip_classes);
}

}  // namespace semnav
