#pragma once

#include <cstddef>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "semnav/grid.hpp"

namespace semnav::nn {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using RowMatrixF = Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Channel-major single-precision activations for the inference path.
struct FloatVolume {
  int channels = 0;
  int rows = 0;
  int cols = 0;
  std::vector<float> data;

  void reshape(int c, int r, int w) {
    channels = c;
    rows = r;
    cols = w;
    data.resize(static_cast<std::size_t>(c) * r * w);
  }
};

// 2-D convolution with "same"-style padding of kernel/2. Parameters live in a
// flat vector owned elsewhere: weights (out x in*k*k, row-major), then biases.
struct Conv2d {
  int in_channels = 0;
  int out_channels = 0;
  int kernel = 3;
  int stride = 1;
  std::size_t offset = 0;

  std::size_t weight_count() const {
    return static_cast<std::size_t>(out_channels) * in_channels * kernel * kernel;
  }
  std::size_t parameter_count() const { return weight_count() + out_channels; }
  int output_size(int input_size) const { return (input_size + 2 * (kernel / 2) - kernel) / stride + 1; }

  // He-normal weights, zero biases.
  void initialize(std::span<double> params, std::mt19937_64& rng) const;

  // `cols` receives the im2col buffer needed by backward().
  void forward(std::span<const double> params, const Volume& in, RowMatrix& cols, Volume& out) const;

  // Single-precision forward without the im2col record.
  void infer(std::span<const float> params, const FloatVolume& in, RowMatrixF& cols, FloatVolume& out) const;

  // Accumulates parameter gradients; writes the input gradient when `din` is set.
  void backward(std::span<const double> params, const RowMatrix& cols, const Volume& dout,
                std::span<double> grads, Volume* din, int in_rows, int in_cols) const;
};

// Layer shapes of one encoder-decoder stage.
struct StageShape {
  int in_channels = 3;
  int out_channels = 3;
  int size = 33;
  int width1 = 8;
  int width2 = 16;
  int width3 = 16;

  friend bool operator==(const StageShape&, const StageShape&) = default;
};

// Two stride-2 encoder blocks, two nearest-upsampling decoder blocks, one
// full-resolution skip connection and a 1x1 classification head. Produces logits.
class EncoderDecoder {
 public:
  struct Cache {
    Volume input, e1, e2, e3, up1, d1, up2, d2;
    RowMatrix cols_e1, cols_e2, cols_e3, cols_d1, cols_d2, cols_head;
  };

  struct InferenceCache {
    FloatVolume input, e1, e2, e3, up1, d1, up2, d2, logits;
    RowMatrixF cols;
  };

  explicit EncoderDecoder(StageShape shape);

  const StageShape& shape() const { return shape_; }
  std::size_t parameter_count() const { return parameter_count_; }

  std::vector<double> initial_parameters(std::mt19937_64& rng) const;

  void forward(std::span<const double> params, const Volume& input, Cache& cache, Volume& logits) const;
  // Forward in single precision; logits match forward() to float rounding.
  void infer(std::span<const float> params, const Volume& input, InferenceCache& cache, Volume& logits) const;
  void backward(std::span<const double> params, const Cache& cache, const Volume& dlogits,
                std::span<double> grads, Volume* dinput) const;

 private:
  StageShape shape_;
  Conv2d e1_, e2_, e3_, d1_, d2_, head_;
  int size1_, size2_, size3_;
  std::size_t parameter_count_ = 0;
};

// Nearest-neighbour upsampling to rows x cols, source cell (r/2, c/2).
Volume upsample_nearest(const Volume& in, int rows, int cols);
void upsample_nearest_backward(const Volume& dout, Volume& din);

// Per-cell softmax over channels.
Volume softmax_channels(const Volume& logits);
// Per-cell log-softmax over channels.
Volume log_softmax_channels(const Volume& logits);

// Concatenates along the channel axis.
Volume concat_channels(const Volume& a, const Volume& b);

}  // namespace semnav::nn
