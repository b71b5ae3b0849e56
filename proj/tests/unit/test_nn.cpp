#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "semnav/error.hpp"
#include "semnav/nn.hpp"

using namespace semnav;
using namespace semnav::nn;

namespace {

Volume random_volume(int c, int r, int w, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Volume v(c, r, w);
  for (double& x : v.values()) x = n(rng);
  return v;
}

// Direct convolution by nested loops.
Volume naive_conv(const Conv2d& conv, std::span<const double> p, const Volume& in) {
  const int pad = conv.kernel / 2;
  const int rows = conv.output_size(in.rows()), cols = conv.output_size(in.cols());
  Volume out(conv.out_channels, rows, cols);
  const std::size_t kk = static_cast<std::size_t>(conv.kernel) * conv.kernel;
  for (int o = 0; o < conv.out_channels; ++o)
    for (int r = 0; r < rows; ++r)
      for (int c = 0; c < cols; ++c) {
        double acc = p[conv.offset + conv.weight_count() + static_cast<std::size_t>(o)];
        for (int i = 0; i < conv.in_channels; ++i)
          for (int ki = 0; ki < conv.kernel; ++ki)
            for (int kj = 0; kj < conv.kernel; ++kj) {
              const int ir = r * conv.stride + ki - pad, ic = c * conv.stride + kj - pad;
              if (ir < 0 || ic < 0 || ir >= in.rows() || ic >= in.cols()) continue;
              const std::size_t w = conv.offset + (static_cast<std::size_t>(o) * conv.in_channels + i) * kk +
                                    static_cast<std::size_t>(ki) * conv.kernel + kj;
              acc += p[w] * in(i, ir, ic);
            }
        out(o, r, c) = acc;
      }
  return out;
}

double weighted_sum(const Volume& v, const Volume& w) {
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) s += v.values()[i] * w.values()[i];
  return s;
}

}  // namespace

class ConvShapes : public ::testing::TestWithParam<std::tuple<int, int>> {};

TEST_P(ConvShapes, ForwardMatchesNestedLoops) {
  const auto [stride, size] = GetParam();
  std::mt19937_64 rng(static_cast<std::uint64_t>(stride * 100 + size));
  Conv2d conv{3, 4, 3, stride, 5};
  std::vector<double> p(conv.offset + conv.parameter_count());
  std::normal_distribution<double> n(0.0, 1.0);
  for (double& x : p) x = n(rng);
  const Volume in = random_volume(3, size, size, rng);
  RowMatrix cols;
  Volume out;
  conv.forward(p, in, cols, out);
  const Volume ref = naive_conv(conv, p, in);
  ASSERT_TRUE(out.same_shape(ref));
  for (std::size_t i = 0; i < out.size(); ++i) EXPECT_NEAR(out.values()[i], ref.values()[i], 1e-12);

  std::vector<float> pf(p.begin(), p.end());
  FloatVolume fin;
  fin.reshape(3, size, size);
  std::copy(in.values().begin(), in.values().end(), fin.data.begin());
  RowMatrixF fcols;
  FloatVolume fout;
  conv.infer(pf, fin, fcols, fout);
  ASSERT_EQ(fout.data.size(), out.size());
  for (std::size_t i = 0; i < out.size(); ++i) EXPECT_NEAR(fout.data[i], out.values()[i], 1e-4);
}

INSTANTIATE_TEST_SUITE_P(StridesAndSizes, ConvShapes,
                         ::testing::Combine(::testing::Values(1, 2), ::testing::Values(5, 8, 11)));

TEST(Conv, BackwardMatchesFiniteDifferences) {
  std::mt19937_64 rng(3);
  Conv2d conv{2, 3, 3, 2, 0};
  std::vector<double> p(conv.parameter_count());
  std::normal_distribution<double> n(0.0, 1.0);
  for (double& x : p) x = n(rng);
  Volume in = random_volume(2, 7, 7, rng);
  RowMatrix cols;
  Volume out;
  conv.forward(p, in, cols, out);
  const Volume probe = random_volume(out.channels(), out.rows(), out.cols(), rng);
  std::vector<double> grads(p.size(), 0.0);
  Volume din(2, 7, 7);
  conv.backward(p, cols, probe, grads, &din, 7, 7);
  auto objective = [&](const std::vector<double>& params, const Volume& x) {
    RowMatrix c2;
    Volume o;
    conv.forward(params, x, c2, o);
    return weighted_sum(o, probe);
  };
  const double h = 1e-6;
  for (std::size_t i = 0; i < p.size(); i += 3) {
    auto hi = p, lo = p;
    hi[i] += h;
    lo[i] -= h;
    EXPECT_NEAR(grads[i], (objective(hi, in) - objective(lo, in)) / (2 * h), 1e-6);
  }
  for (std::size_t i = 0; i < in.size(); i += 5) {
    Volume hi = in, lo = in;
    hi.values()[i] += h;
    lo.values()[i] -= h;
    EXPECT_NEAR(din.values()[i], (objective(p, hi) - objective(p, lo)) / (2 * h), 1e-6);
  }
}

TEST(Conv, ChannelMismatchThrows) {
  Conv2d conv{3, 4, 3, 1, 0};
  std::vector<double> p(conv.parameter_count());
  RowMatrix cols;
  Volume out;
  EXPECT_THROW(conv.forward(p, Volume(2, 5, 5), cols, out), PreconditionError);
}

TEST(Softmax, NormalizedAndStable) {
  Volume logits(4, 2, 2);
  logits(0, 0, 0) = 1000.0;
  logits(1, 1, 1) = -1000.0;
  const Volume p = softmax_channels(logits);
  const Volume lp = log_softmax_channels(logits);
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) {
      double sum = 0.0;
      for (int k = 0; k < 4; ++k) {
        sum += p(k, r, c);
        EXPECT_TRUE(std::isfinite(lp(k, r, c)));
        EXPECT_NEAR(std::exp(lp(k, r, c)), p(k, r, c), 1e-12);
      }
      EXPECT_NEAR(sum, 1.0, 1e-12);
    }
  EXPECT_NEAR(p(0, 0, 0), 1.0, 1e-12);
  EXPECT_NEAR(p(0, 1, 0), 0.25, 1e-12);
}

TEST(Upsample, BackwardIsTheAdjoint) {
  std::mt19937_64 rng(4);
  const Volume x = random_volume(3, 4, 4, rng);
  const Volume y = random_volume(3, 7, 8, rng);
  const Volume ux = upsample_nearest(x, 7, 8);
  EXPECT_EQ(ux(1, 6, 7), x(1, 3, 3));
  Volume dx(3, 4, 4);
  upsample_nearest_backward(y, dx);
  EXPECT_NEAR(weighted_sum(ux, y), weighted_sum(x, dx), 1e-12);
}

TEST(Concat, StacksChannels) {
  const Volume a(2, 3, 3, 1.0), b(4, 3, 3, 2.0);
  const Volume c = concat_channels(a, b);
  EXPECT_EQ(c.channels(), 6);
  EXPECT_EQ(c(1, 2, 2), 1.0);
  EXPECT_EQ(c(2, 0, 0), 2.0);
}

TEST(EncoderDecoder, GradientsMatchFiniteDifferences) {
  const StageShape shape{3, 4, 9, 3, 4, 4};
  const EncoderDecoder net(shape);
  std::mt19937_64 rng(5);
  const std::vector<double> p = net.initial_parameters(rng);
  ASSERT_EQ(p.size(), net.parameter_count());
  const Volume in = random_volume(3, 9, 9, rng);
  EncoderDecoder::Cache cache;
  Volume logits;
  net.forward(p, in, cache, logits);
  EXPECT_EQ(logits.channels(), 4);
  EXPECT_EQ(logits.rows(), 9);
  const Volume probe = random_volume(4, 9, 9, rng);
  std::vector<double> grads(p.size(), 0.0);
  Volume din;
  net.backward(p, cache, probe, grads, &din);
  auto objective = [&](const std::vector<double>& params, const Volume& x) {
    EncoderDecoder::Cache c;
    Volume o;
    net.forward(params, x, c, o);
    return weighted_sum(o, probe);
  };
  const double h = 1e-6;
  std::uniform_int_distribution<std::size_t> pick(0, p.size() - 1);
  for (int t = 0; t < 40; ++t) {
    const std::size_t i = pick(rng);
    auto hi = p, lo = p;
    hi[i] += h;
    lo[i] -= h;
    const double fd = (objective(hi, in) - objective(lo, in)) / (2 * h);
    EXPECT_NEAR(grads[i], fd, 1e-5 * std::max(1.0, std::abs(fd))) << "param " << i;
  }
  for (std::size_t i = 0; i < in.size(); i += 11) {
    Volume hi = in, lo = in;
    hi.values()[i] += h;
    lo.values()[i] -= h;
    const double fd = (objective(p, hi) - objective(p, lo)) / (2 * h);
    EXPECT_NEAR(din.values()[i], fd, 1e-5 * std::max(1.0, std::abs(fd)));
  }
}

TEST(EncoderDecoder, InferenceAgreesWithForward) {
  const EncoderDecoder net(StageShape{});
  std::mt19937_64 rng(6);
  const std::vector<double> p = net.initial_parameters(rng);
  const Volume in = random_volume(3, 33, 33, rng);
  EncoderDecoder::Cache cache;
  Volume a, b;
  net.forward(p, in, cache, a);
  EncoderDecoder::InferenceCache icache;
  const std::vector<float> pf(p.begin(), p.end());
  net.infer(pf, in, icache, b);
  ASSERT_TRUE(a.same_shape(b));
  for (std::size_t i = 0; i < a.size(); ++i)
    EXPECT_NEAR(a.values()[i], b.values()[i], 1e-4 * std::max(1.0, std::abs(a.values()[i])));
  EXPECT_THROW(net.infer(pf, Volume(3, 31, 31), icache, b), PreconditionError);
}

TEST(EncoderDecoder, DefaultSizeIsTensOfThousandsOfParameters) {
  const EncoderDecoder net(StageShape{});
  EXPECT_GT(net.parameter_count(), 1000u);
  EXPECT_LT(net.parameter_count(), 100000u);
}
