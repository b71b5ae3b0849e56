#include "semnav/nn.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>

#include "semnav/error.hpp"

namespace semnav::nn {

namespace {

using ConstMap = Eigen::Map<const RowMatrix>;

// Output columns [lo, hi) whose input column ow * stride + offset lies inside [0, width).
void valid_range(int offset, int stride, int out_cols, int width, int& lo, int& hi) {
  lo = offset >= 0 ? 0 : (-offset + stride - 1) / stride;
  hi = width - 1 - offset < 0 ? 0 : std::min(out_cols, (width - 1 - offset) / stride + 1);
  if (hi < lo) hi = lo;
}

template <typename T, typename Matrix>
void im2col(const T* in, int channels, int in_rows, int in_cols, int kernel, int stride, int out_rows, int out_cols,
            Matrix& cols) {
  const int pad = kernel / 2;
  cols.resize(static_cast<Eigen::Index>(channels) * kernel * kernel,
              static_cast<Eigen::Index>(out_rows) * out_cols);
  for (int c = 0; c < channels; ++c)
    for (int ki = 0; ki < kernel; ++ki)
      for (int kj = 0; kj < kernel; ++kj) {
        T* row = cols.data() + ((static_cast<Eigen::Index>(c) * kernel + ki) * kernel + kj) * cols.cols();
        int lo, hi;
        valid_range(kj - pad, stride, out_cols, in_cols, lo, hi);
        for (int oh = 0; oh < out_rows; ++oh) {
          const int ih = oh * stride + ki - pad;
          T* dst = row + static_cast<Eigen::Index>(oh) * out_cols;
          if (ih < 0 || ih >= in_rows) {
            std::fill(dst, dst + out_cols, T{0});
            continue;
          }
          const T* src = in + (static_cast<std::size_t>(c) * in_rows + ih) * in_cols;
          const int off = kj - pad;
          std::fill(dst, dst + lo, T{0});
          if (stride == 1) {
            std::copy(src + lo + off, src + hi + off, dst + lo);
          } else {
            for (int ow = lo; ow < hi; ++ow) dst[ow] = src[ow * stride + off];
          }
          std::fill(dst + hi, dst + out_cols, T{0});
        }
      }
}

void im2col(const Volume& in, int kernel, int stride, int out_rows, int out_cols, RowMatrix& cols) {
  im2col(in.data(), in.channels(), in.rows(), in.cols(), kernel, stride, out_rows, out_cols, cols);
}

void relu_inplace(FloatVolume& v) {
  for (float& x : v.data) x = x > 0.0f ? x : 0.0f;
}

void upsample_nearest(const FloatVolume& in, int rows, int cols, FloatVolume& out, int channel_offset = 0) {
  for (int k = 0; k < in.channels; ++k)
    for (int r = 0; r < rows; ++r) {
      const float* src = in.data.data() + (static_cast<std::size_t>(k) * in.rows + r / 2) * in.cols;
      float* dst = out.data.data() + (static_cast<std::size_t>(k + channel_offset) * rows + r) * cols;
      for (int c = 0; c < cols; ++c) dst[c] = src[c / 2];
    }
}

void col2im(const RowMatrix& dcols, int kernel, int stride, int out_rows, int out_cols, Volume& din) {
  const int pad = kernel / 2;
  std::fill(din.values().begin(), din.values().end(), 0.0);
  for (int c = 0; c < din.channels(); ++c)
    for (int ki = 0; ki < kernel; ++ki)
      for (int kj = 0; kj < kernel; ++kj) {
        const double* row =
            dcols.data() + ((static_cast<Eigen::Index>(c) * kernel + ki) * kernel + kj) * dcols.cols();
        int lo, hi;
        valid_range(kj - pad, stride, out_cols, din.cols(), lo, hi);
        for (int oh = 0; oh < out_rows; ++oh) {
          const int ih = oh * stride + ki - pad;
          if (ih < 0 || ih >= din.rows()) continue;
          const double* src = row + static_cast<Eigen::Index>(oh) * out_cols;
          double* dst = din.data() + (static_cast<std::size_t>(c) * din.rows() + ih) * din.cols();
          const int off = kj - pad;
          for (int ow = lo; ow < hi; ++ow) dst[ow * stride + off] += src[ow];
        }
      }
}

void relu_inplace(Volume& v) {
  for (double& x : v.values()) x = x > 0.0 ? x : 0.0;
}

// dout masked by the post-activation output.
Volume relu_backward(const Volume& dout, const Volume& activated) {
  Volume d = dout;
  auto dv = d.values();
  auto av = activated.values();
  for (std::size_t i = 0; i < dv.size(); ++i)
    if (av[i] <= 0.0) dv[i] = 0.0;
  return d;
}

}  // namespace

void Conv2d::initialize(std::span<double> params, std::mt19937_64& rng) const {
  const double fan_in = static_cast<double>(in_channels) * kernel * kernel;
  std::normal_distribution<double> normal(0.0, std::sqrt(2.0 / fan_in));
  auto w = params.subspan(offset, weight_count());
  for (double& x : w) x = normal(rng);
  auto b = params.subspan(offset + weight_count(), static_cast<std::size_t>(out_channels));
  std::fill(b.begin(), b.end(), 0.0);
}

void Conv2d::forward(std::span<const double> params, const Volume& in, RowMatrix& cols, Volume& out) const {
  if (in.channels() != in_channels)
    throw PreconditionError("convolution input has " + std::to_string(in.channels()) +
                            " channels, expected " + std::to_string(in_channels));
  const int out_rows = output_size(in.rows());
  const int out_cols = output_size(in.cols());
  im2col(in, kernel, stride, out_rows, out_cols, cols);
  const RowMatrix weights =
      ConstMap(params.data() + offset, out_channels, static_cast<Eigen::Index>(in_channels) * kernel * kernel);
  const Eigen::VectorXd bias = Eigen::Map<const Eigen::VectorXd>(params.data() + offset + weight_count(), out_channels);
  if (!(out.channels() == out_channels && out.rows() == out_rows && out.cols() == out_cols))
    out = Volume(out_channels, out_rows, out_cols);
  RowMatrix result(out_channels, static_cast<Eigen::Index>(out_rows) * out_cols);
  result.noalias() = weights * cols;
  result.colwise() += bias;
  std::copy_n(result.data(), result.size(), out.data());
}

void Conv2d::infer(std::span<const float> params, const FloatVolume& in, RowMatrixF& cols, FloatVolume& out) const {
  if (in.channels != in_channels) throw PreconditionError("convolution input channel mismatch");
  const int out_rows = output_size(in.rows);
  const int out_cols = output_size(in.cols);
  im2col(in.data.data(), in.channels, in.rows, in.cols, kernel, stride, out_rows, out_cols, cols);
  const RowMatrixF weights = Eigen::Map<const RowMatrixF>(params.data() + offset, out_channels,
                                                           static_cast<Eigen::Index>(in_channels) * kernel * kernel);
  const Eigen::VectorXf bias = Eigen::Map<const Eigen::VectorXf>(params.data() + offset + weight_count(), out_channels);
  out.reshape(out_channels, out_rows, out_cols);
  RowMatrixF result(out_channels, static_cast<Eigen::Index>(out_rows) * out_cols);
  result.noalias() = weights * cols;
  result.colwise() += bias;
  std::copy_n(result.data(), result.size(), out.data.data());
}

void Conv2d::backward(std::span<const double> params, const RowMatrix& cols, const Volume& dout,
                      std::span<double> grads, Volume* din, int in_rows, int in_cols) const {
  const Eigen::Index pixels = static_cast<Eigen::Index>(dout.rows()) * dout.cols();
  const RowMatrix d = ConstMap(dout.data(), out_channels, pixels);
  RowMatrix dw(out_channels, static_cast<Eigen::Index>(in_channels) * kernel * kernel);
  dw.noalias() = d * cols.transpose();
  const Eigen::VectorXd db = d.rowwise().sum();
  double* g = grads.data() + offset;
  for (Eigen::Index i = 0; i < dw.size(); ++i) g[i] += dw.data()[i];
  g += weight_count();
  for (Eigen::Index i = 0; i < db.size(); ++i) g[i] += db[i];
  if (din == nullptr) return;
  const RowMatrix weights =
      ConstMap(params.data() + offset, out_channels, static_cast<Eigen::Index>(in_channels) * kernel * kernel);
  const RowMatrix dcols = weights.transpose() * d;
  if (!(din->channels() == in_channels && din->rows() == in_rows && din->cols() == in_cols))
    *din = Volume(in_channels, in_rows, in_cols);
  col2im(dcols, kernel, stride, dout.rows(), dout.cols(), *din);
}

EncoderDecoder::EncoderDecoder(StageShape shape) : shape_(shape) {
  if (shape.size < 5 || shape.in_channels < 1 || shape.out_channels < 2 || shape.width1 < 1 ||
      shape.width2 < 1 || shape.width3 < 1)
    throw PreconditionError("invalid encoder-decoder shape");
  std::size_t offset = 0;
  auto layer = [&](int in, int out, int kernel, int stride) {
    Conv2d conv{in, out, kernel, stride, offset};
    offset += conv.parameter_count();
    return conv;
  };
  e1_ = layer(shape.in_channels, shape.width1, 3, 1);
  e2_ = layer(shape.width1, shape.width2, 3, 2);
  e3_ = layer(shape.width2, shape.width3, 3, 2);
  d1_ = layer(shape.width3, shape.width2, 3, 1);
  d2_ = layer(shape.width2 + shape.width1, shape.width1, 3, 1);
  head_ = layer(shape.width1, shape.out_channels, 1, 1);
  parameter_count_ = offset;
  size1_ = shape.size;
  size2_ = e2_.output_size(size1_);
  size3_ = e3_.output_size(size2_);
}

std::vector<double> EncoderDecoder::initial_parameters(std::mt19937_64& rng) const {
  std::vector<double> params(parameter_count_);
  for (const Conv2d* conv : {&e1_, &e2_, &e3_, &d1_, &d2_, &head_}) conv->initialize(params, rng);
  return params;
}

void EncoderDecoder::forward(std::span<const double> params, const Volume& input, Cache& cache,
                             Volume& logits) const {
  if (input.channels() != shape_.in_channels || input.rows() != shape_.size || input.cols() != shape_.size)
    throw PreconditionError("stage input shape mismatch: got " + std::to_string(input.channels()) + "x" +
                            std::to_string(input.rows()) + "x" + std::to_string(input.cols()) +
                            ", expected " + std::to_string(shape_.in_channels) + "x" +
                            std::to_string(shape_.size) + "x" + std::to_string(shape_.size));
  if (params.size() != parameter_count_) throw PreconditionError("stage parameter count mismatch");
  cache.input = input;
  e1_.forward(params, input, cache.cols_e1, cache.e1);
  relu_inplace(cache.e1);
  e2_.forward(params, cache.e1, cache.cols_e2, cache.e2);
  relu_inplace(cache.e2);
  e3_.forward(params, cache.e2, cache.cols_e3, cache.e3);
  relu_inplace(cache.e3);
  cache.up1 = upsample_nearest(cache.e3, size2_, size2_);
  d1_.forward(params, cache.up1, cache.cols_d1, cache.d1);
  relu_inplace(cache.d1);
  cache.up2 = concat_channels(upsample_nearest(cache.d1, size1_, size1_), cache.e1);
  d2_.forward(params, cache.up2, cache.cols_d2, cache.d2);
  relu_inplace(cache.d2);
  head_.forward(params, cache.d2, cache.cols_head, logits);
}

void EncoderDecoder::infer(std::span<const float> params, const Volume& input, InferenceCache& cache,
                           Volume& logits) const {
  if (input.channels() != shape_.in_channels || input.rows() != shape_.size || input.cols() != shape_.size)
    throw PreconditionError("stage input shape mismatch");
  if (params.size() != parameter_count_) throw PreconditionError("stage parameter count mismatch");
  cache.input.reshape(input.channels(), input.rows(), input.cols());
  std::copy(input.values().begin(), input.values().end(), cache.input.data.begin());
  e1_.infer(params, cache.input, cache.cols, cache.e1);
  relu_inplace(cache.e1);
  e2_.infer(params, cache.e1, cache.cols, cache.e2);
  relu_inplace(cache.e2);
  e3_.infer(params, cache.e2, cache.cols, cache.e3);
  relu_inplace(cache.e3);
  cache.up1.reshape(shape_.width3, size2_, size2_);
  upsample_nearest(cache.e3, size2_, size2_, cache.up1);
  d1_.infer(params, cache.up1, cache.cols, cache.d1);
  relu_inplace(cache.d1);
  cache.up2.reshape(shape_.width2 + shape_.width1, size1_, size1_);
  upsample_nearest(cache.d1, size1_, size1_, cache.up2);
  std::copy(cache.e1.data.begin(), cache.e1.data.end(),
            cache.up2.data.begin() + static_cast<std::ptrdiff_t>(shape_.width2) * size1_ * size1_);
  d2_.infer(params, cache.up2, cache.cols, cache.d2);
  relu_inplace(cache.d2);
  head_.infer(params, cache.d2, cache.cols, cache.logits);
  if (!(logits.channels() == shape_.out_channels && logits.rows() == size1_ && logits.cols() == size1_))
    logits = Volume(shape_.out_channels, size1_, size1_);
  std::copy(cache.logits.data.begin(), cache.logits.data.end(), logits.values().begin());
}

void EncoderDecoder::backward(std::span<const double> params, const Cache& cache, const Volume& dlogits,
                              std::span<double> grads, Volume* dinput) const {
  if (grads.size() != parameter_count_) throw PreconditionError("stage gradient size mismatch");
  Volume g_d2, g_up2, g_d1, g_up1, g_e3, g_e2, g_e1;
  head_.backward(params, cache.cols_head, dlogits, grads, &g_d2, size1_, size1_);
  g_d2 = relu_backward(g_d2, cache.d2);
  d2_.backward(params, cache.cols_d2, g_d2, grads, &g_up2, size1_, size1_);

  // Split the concatenated gradient into the upsampled-decoder and skip parts.
  const int w2 = shape_.width2;
  Volume g_up_d1(w2, size1_, size1_);
  g_e1 = Volume(shape_.width1, size1_, size1_);
  const std::size_t plane = static_cast<std::size_t>(size1_) * size1_;
  std::copy_n(g_up2.data(), w2 * plane, g_up_d1.data());
  std::copy_n(g_up2.data() + w2 * plane, shape_.width1 * plane, g_e1.data());

  g_d1 = Volume(w2, size2_, size2_);
  upsample_nearest_backward(g_up_d1, g_d1);
  g_d1 = relu_backward(g_d1, cache.d1);
  d1_.backward(params, cache.cols_d1, g_d1, grads, &g_up1, size2_, size2_);

  g_e3 = Volume(shape_.width3, size3_, size3_);
  upsample_nearest_backward(g_up1, g_e3);
  g_e3 = relu_backward(g_e3, cache.e3);
  e3_.backward(params, cache.cols_e3, g_e3, grads, &g_e2, size2_, size2_);
  g_e2 = relu_backward(g_e2, cache.e2);

  Volume g_e1_from_e2;
  e2_.backward(params, cache.cols_e2, g_e2, grads, &g_e1_from_e2, size1_, size1_);
  auto total = g_e1.values();
  auto extra = g_e1_from_e2.values();
  for (std::size_t i = 0; i < total.size(); ++i) total[i] += extra[i];
  g_e1 = relu_backward(g_e1, cache.e1);
  e1_.backward(params, cache.cols_e1, g_e1, grads, dinput, size1_, size1_);
}

Volume upsample_nearest(const Volume& in, int rows, int cols) {
  Volume out(in.channels(), rows, cols);
  for (int k = 0; k < in.channels(); ++k)
    for (int r = 0; r < rows; ++r)
      for (int c = 0; c < cols; ++c) out(k, r, c) = in(k, r / 2, c / 2);
  return out;
}

void upsample_nearest_backward(const Volume& dout, Volume& din) {
  std::fill(din.values().begin(), din.values().end(), 0.0);
  for (int k = 0; k < dout.channels(); ++k)
    for (int r = 0; r < dout.rows(); ++r)
      for (int c = 0; c < dout.cols(); ++c) din(k, r / 2, c / 2) += dout(k, r, c);
}

Volume log_softmax_channels(const Volume& logits) {
  Volume out(logits.channels(), logits.rows(), logits.cols());
  const int plane = logits.plane_size();
  const int channels = logits.channels();
  const double* src = logits.data();
  double* dst = out.data();
  for (int p = 0; p < plane; ++p) {
    double mx = -std::numeric_limits<double>::infinity();
    for (int k = 0; k < channels; ++k) mx = std::max(mx, src[k * plane + p]);
    double sum = 0.0;
    for (int k = 0; k < channels; ++k) sum += std::exp(src[k * plane + p] - mx);
    const double lse = mx + std::log(sum);
    for (int k = 0; k < channels; ++k) dst[k * plane + p] = src[k * plane + p] - lse;
  }
  return out;
}

Volume softmax_channels(const Volume& logits) {
  Volume out = log_softmax_channels(logits);
  const int plane = out.plane_size();
  const int channels = out.channels();
  double* v = out.data();
  for (int p = 0; p < plane; ++p) {
    double sum = 0.0;
    for (int k = 0; k < channels; ++k) sum += (v[k * plane + p] = std::exp(v[k * plane + p]));
    for (int k = 0; k < channels; ++k) v[k * plane + p] /= sum;
  }
  return out;
}

Volume concat_channels(const Volume& a, const Volume& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw PreconditionError("concat_channels: spatial shape mismatch");
  Volume out(a.channels() + b.channels(), a.rows(), a.cols());
  std::copy(a.values().begin(), a.values().end(), out.data());
  std::copy(b.values().begin(), b.values().end(), out.data() + a.size());
  return out;
}

}  // namespace semnav::nn
