#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <span>
#include <type_traits>
#include <vector>

namespace semnav {

// Row grows southwards, column grows eastwards.
struct Cell {
  int row = 0;
  int col = 0;

  friend auto operator<=>(const Cell&, const Cell&) = default;
};

inline int manhattan(Cell a, Cell b) {
  return (a.row > b.row ? a.row - b.row : b.row - a.row) +
         (a.col > b.col ? a.col - b.col : b.col - a.col);
}

template <typename T>
class Grid {
  // Bytes instead of the packed vector<bool> so cells stay addressable.
  using Stored = std::conditional_t<std::is_same_v<T, bool>, unsigned char, T>;

 public:
  Grid() = default;
  Grid(int rows, int cols, T fill = T{})
      : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols, static_cast<Stored>(fill)) {}

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }

  bool contains(int r, int c) const { return r >= 0 && c >= 0 && r < rows_ && c < cols_; }
  bool contains(Cell cell) const { return contains(cell.row, cell.col); }

  std::size_t index(int r, int c) const { return static_cast<std::size_t>(r) * cols_ + c; }
  std::size_t index(Cell cell) const { return index(cell.row, cell.col); }
  Cell cell_at(std::size_t i) const {
    return {static_cast<int>(i / cols_), static_cast<int>(i % cols_)};
  }

  Stored& operator()(int r, int c) { return data_[index(r, c)]; }
  const Stored& operator()(int r, int c) const { return data_[index(r, c)]; }
  Stored& operator[](Cell cell) { return data_[index(cell)]; }
  const Stored& operator[](Cell cell) const { return data_[index(cell)]; }

  std::span<Stored> values() { return data_; }
  std::span<const Stored> values() const { return data_; }

  void fill(const T& v) { std::fill(data_.begin(), data_.end(), static_cast<Stored>(v)); }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<Stored> data_;
};

// Channel-major stack of planes, laid out (channel, row, col). Used both for
// per-cell class distributions and for network activations.
class Volume {
 public:
  Volume() = default;
  Volume(int channels, int rows, int cols, double fill = 0.0)
      : channels_(channels),
        rows_(rows),
        cols_(cols),
        data_(static_cast<std::size_t>(channels) * rows * cols, fill) {}

  int channels() const { return channels_; }
  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int plane_size() const { return rows_ * cols_; }
  std::size_t size() const { return data_.size(); }
  bool same_shape(const Volume& o) const {
    return channels_ == o.channels_ && rows_ == o.rows_ && cols_ == o.cols_;
  }

  double& operator()(int k, int r, int c) {
    return data_[(static_cast<std::size_t>(k) * rows_ + r) * cols_ + c];
  }
  double operator()(int k, int r, int c) const {
    return data_[(static_cast<std::size_t>(k) * rows_ + r) * cols_ + c];
  }

  std::span<double> plane(int k) {
    return {data_.data() + static_cast<std::size_t>(k) * plane_size(),
            static_cast<std::size_t>(plane_size())};
  }
  std::span<const double> plane(int k) const {
    return {data_.data() + static_cast<std::size_t>(k) * plane_size(),
            static_cast<std::size_t>(plane_size())};
  }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }
  std::span<double> values() { return data_; }
  std::span<const double> values() const { return data_; }

  friend bool operator==(const Volume&, const Volume&) = default;

 private:
  int channels_ = 0;
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> data_;
};

// One-hot encoding of a label grid into a (num_classes, rows, cols) volume.
template <typename T>
Volume one_hot(const Grid<T>& labels, int num_classes) {
  Volume v(num_classes, labels.rows(), labels.cols());
  for (int r = 0; r < labels.rows(); ++r)
    for (int c = 0; c < labels.cols(); ++c) v(static_cast<int>(labels(r, c)), r, c) = 1.0;
  return v;
}

// Per-cell argmax over channels; ties resolve to the lowest channel.
inline Grid<int> argmax_channels(const Volume& v) {
  Grid<int> out(v.rows(), v.cols());
  for (int r = 0; r < v.rows(); ++r)
    for (int c = 0; c < v.cols(); ++c) {
      int best = 0;
      for (int k = 1; k < v.channels(); ++k)
        if (v(k, r, c) > v(best, r, c)) best = k;
      out(r, c) = best;
    }
  return out;
}

}  // namespace semnav
