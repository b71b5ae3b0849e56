#include "semnav/belief.hpp"

#include <cmath>
#include <limits>

#include "semnav/error.hpp"

namespace semnav {

namespace {

constexpr double kNormTolerance = 1e-6;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void check_crop(const Volume& crop, int channels, const char* what) {
  if (crop.channels() != channels || crop.rows() != crop.cols() || crop.rows() % 2 == 0)
    throw PreconditionError(std::string(what) + " crop has the wrong shape");
}

}  // namespace

std::vector<Placement> egocentric_to_geocentric(int crop_size, const Pose& pose, int map_rows, int map_cols) {
  std::vector<Placement> out;
  out.reserve(static_cast<std::size_t>(crop_size) * crop_size);
  for (int i = 0; i < crop_size; ++i)
    for (int j = 0; j < crop_size; ++j) {
      const Cell w = crop_to_world(pose, i, j, crop_size);
      if (w.row >= 0 && w.col >= 0 && w.row < map_rows && w.col < map_cols) out.push_back({i, j, w});
    }
  return out;
}

GlobalBeliefMap::GlobalBeliefMap(int rows, int cols, int semantic_classes, int occupancy_classes)
    : rows_(rows),
      cols_(cols),
      semantic_(semantic_classes, rows, cols, 1.0 / semantic_classes),
      log_semantic_(semantic_classes, rows, cols, -std::log(static_cast<double>(semantic_classes))),
      occupancy_(occupancy_classes, rows, cols, 1.0 / occupancy_classes),
      log_occupancy_(occupancy_classes, rows, cols, -std::log(static_cast<double>(occupancy_classes))),
      uncertainty_(semantic_classes, rows, cols, 0.0),
      entropy_(rows, cols, 0.0),
      bald_(rows, cols, 0.0),
      observed_(rows, cols, false) {
  if (rows < 1 || cols < 1) throw PreconditionError("belief map needs a positive size");
  if (semantic_classes < 2 || occupancy_classes < 2) throw PreconditionError("belief map needs at least two classes");
}

GlobalBeliefMap init_global(int rows, int cols, const ClassCatalog& catalog) {
  return GlobalBeliefMap(rows, cols, static_cast<int>(catalog.semantic_classes.size()),
                         static_cast<int>(catalog.occupancy_classes.size()));
}

void GlobalBeliefMap::fuse(Volume& belief, Volume& log_belief, const Volume& crop, const Pose& pose, bool mark) {
  const int k_count = belief.channels();
  const int n = crop.rows();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double sum = 0.0;
      for (int k = 0; k < k_count; ++k) {
        const double p = crop(k, i, j);
        if (!(p >= 0.0)) throw PreconditionError("crop holds a negative or NaN probability");
        sum += p;
      }
      if (std::abs(sum - 1.0) > kNormTolerance)
        throw PreconditionError("crop not normalized: cell sums to " + std::to_string(sum));
    }

  std::vector<double> post(static_cast<std::size_t>(k_count));
  for (const Placement& pl : egocentric_to_geocentric(n, pose, rows_, cols_)) {
    const int r = pl.cell.row, c = pl.cell.col;
    double peak = kNegInf;
    for (int k = 0; k < k_count; ++k) {
      const double e = crop(k, pl.crop_row, pl.crop_col);
      post[k] = e > 0.0 ? log_belief(k, r, c) + std::log(e) : kNegInf;
      peak = std::max(peak, post[k]);
    }
    if (peak == kNegInf) {
      // Disjoint support: trust the fresh evidence.
      for (int k = 0; k < k_count; ++k) {
        const double e = crop(k, pl.crop_row, pl.crop_col);
        post[k] = e > 0.0 ? std::log(e) : kNegInf;
        peak = std::max(peak, post[k]);
      }
    }
    double total = 0.0;
    for (int k = 0; k < k_count; ++k) total += std::exp(post[k] - peak);
    const double log_norm = peak + std::log(total);
    for (int k = 0; k < k_count; ++k) {
      log_belief(k, r, c) = post[k] - log_norm;
      belief(k, r, c) = std::exp(post[k] - log_norm);
    }
    if (mark) observed_(r, c) = true;
  }
}

void GlobalBeliefMap::register_semantics(const Volume& crop, const Pose& pose) {
  check_crop(crop, semantic_.channels(), "semantic");
  fuse(semantic_, log_semantic_, crop, pose, true);
}

void GlobalBeliefMap::register_occupancy(const Volume& crop, const Pose& pose) {
  check_crop(crop, occupancy_.channels(), "occupancy");
  fuse(occupancy_, log_occupancy_, crop, pose, true);
}

void GlobalBeliefMap::register_uncertainty(const Volume& variance_crop, const Pose& pose) {
  check_crop(variance_crop, uncertainty_.channels(), "uncertainty");
  for (double v : variance_crop.values())
    if (!(v >= 0.0)) throw PreconditionError("variance crop holds a negative or NaN value");
  for (const Placement& pl : egocentric_to_geocentric(variance_crop.rows(), pose, rows_, cols_))
    for (int k = 0; k < uncertainty_.channels(); ++k)
      uncertainty_(k, pl.cell.row, pl.cell.col) = variance_crop(k, pl.crop_row, pl.crop_col);
}

void GlobalBeliefMap::overwrite(Grid<double>& field, const Grid<double>& crop, const Pose& pose) {
  if (crop.rows() != crop.cols() || crop.rows() % 2 == 0) throw PreconditionError("scalar crop has the wrong shape");
  for (const Placement& pl : egocentric_to_geocentric(crop.rows(), pose, rows_, cols_))
    field[pl.cell] = crop(pl.crop_row, pl.crop_col);
}

void GlobalBeliefMap::register_entropy(const Grid<double>& crop, const Pose& pose) { overwrite(entropy_, crop, pose); }

void GlobalBeliefMap::register_bald(const Grid<double>& crop, const Pose& pose) { overwrite(bald_, crop, pose); }

void GlobalBeliefMap::mark_occupied(Cell c) {
  if (!observed_.contains(c)) throw PreconditionError("mark_occupied outside the map");
  for (int k = 0; k < occupancy_.channels(); ++k) {
    const bool hit = k == occupancy::kOccupied;
    occupancy_(k, c.row, c.col) = hit ? 1.0 : 0.0;
    log_occupancy_(k, c.row, c.col) = hit ? 0.0 : kNegInf;
  }
  observed_[c] = true;
}

}  // namespace semnav
