// Copyright 2026 The codec-lens Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "codec_lens/nn.h"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "codec_lens/error.h"
#include "codec_lens/linear_transforms.h"
#include "codec_lens/random.h"
#include "codec_lens/toy.h"
#include "test_util.h"

namespace codec_lens {
namespace {

using testing::Dot;
using testing::MaxAbsDiff;
using testing::RandomConvLayer;

TEST(Conv2dTest, IdentityKernelPassesThrough) {
  Rng rng(1);
  const Tensor3 x = rng.normal_tensor({3, 5, 7});
  EXPECT_EQ(conv2d(x, testing::IdentityLayer(LayerKind::kConv, 3)), x);
  EXPECT_EQ(tconv2d(x, testing::IdentityLayer(LayerKind::kTConv, 3)), x);
}

TEST(Conv2dTest, BoxFilterOnImpulse) {
  LayerSpec l;
  l.kind = LayerKind::kConv;
  l.in_channels = l.out_channels = 1;
  l.kernel_h = l.kernel_w = 3;
  l.padding = 1;
  l.weight = {{1, 1, 3, 3}, std::vector<double>(9, 1.0)};
  Tensor3 x(1, 5, 5);
  x(0, 2, 2) = 1.0;
  const Tensor3 y = conv2d(x, l);
  ASSERT_EQ(y.shape(), (Shape3{1, 5, 5}));
  for (std::size_t r = 0; r < 5; ++r) {
    for (std::size_t c = 0; c < 5; ++c) {
      const bool inside = r >= 1 && r <= 3 && c >= 1 && c <= 3;
      EXPECT_EQ(y(0, r, c), inside ? 1.0 : 0.0);
    }
  }
}

TEST(Conv2dTest, OutputShapeAndErrors) {
  Rng rng(2);
  const LayerSpec l = RandomConvLayer(rng, LayerKind::kConv, 2, 3, 5, 5, 2, 2);
  EXPECT_EQ(conv2d(Tensor3(2, 16, 9), l).shape(), (Shape3{3, 8, 5}));
  EXPECT_THROW(conv2d(Tensor3(3, 16, 16), l), ShapeError);
  const LayerSpec big = RandomConvLayer(rng, LayerKind::kConv, 1, 1, 7, 7, 1, 0);
  EXPECT_THROW(conv2d(Tensor3(1, 4, 4), big), ShapeError);
}

TEST(Conv2dTest, MatchesNaiveOracleTwoToThreeChannels) {
  Rng rng(3);
  const LayerSpec l = RandomConvLayer(rng, LayerKind::kConv, 2, 3, 3, 3, 1, 1);
  const Tensor3 x = rng.normal_tensor({2, 8, 8});
  EXPECT_LE(MaxAbsDiff(conv2d(x, l), testing::NaiveConv2d(x, l)), 1e-12);
}

class ConvOracleTest : public ::testing::TestWithParam<std::uint64_t> {};

TEST_P(ConvOracleTest, ConvTConvMatchNaiveAndAreAdjoint) {
  Rng rng(GetParam());
  auto draw = [&rng](std::size_t lo, std::size_t hi) {
    return static_cast<std::size_t>(rng.integer(static_cast<std::int64_t>(lo), static_cast<std::int64_t>(hi)));
  };
  const std::size_t in = draw(1, 4), out = draw(1, 16);
  const std::size_t k = draw(1, 5), st = draw(1, 3);
  const std::size_t pad = draw(0, (k - 1) / 2);
  const std::size_t h = draw(k, 8);
  // Equal output padding on both axes keeps the adjoint well defined.
  const std::size_t w = h + st * draw(0, 2);
  const LayerSpec conv = RandomConvLayer(rng, LayerKind::kConv, in, out, k, k, st, pad);
  const Tensor3 x = rng.normal_tensor({in, h, w});
  const Tensor3 y = conv2d(x, conv);
  EXPECT_LE(MaxAbsDiff(y, testing::NaiveConv2d(x, conv)), 1e-12);

  const std::size_t op = (h + 2 * pad - k) % st;
  const LayerSpec tconv = RandomConvLayer(rng, LayerKind::kTConv, out, in, k, k, st, pad, op);
  const Tensor3 u = rng.normal_tensor(y.shape());
  const Tensor3 v = tconv2d(u, tconv);
  EXPECT_LE(MaxAbsDiff(v, testing::NaiveTConv2d(u, tconv)), 1e-12);

  // Adjoint: same weights, no bias.
  LayerSpec c0 = conv;
  c0.bias = {};
  LayerSpec t0 = tconv;
  t0.weight = conv.weight;
  t0.weight.shape = {out, in, k, k};
  t0.bias = {};
  t0.output_padding = op;
  const Tensor3 ty = tconv2d(u, t0);
  ASSERT_EQ(ty.shape(), x.shape());
  EXPECT_NEAR(Dot(conv2d(x, c0), u), Dot(x, ty), 1e-10);
}

INSTANTIATE_TEST_SUITE_P(RandomCases, ConvOracleTest, ::testing::Range<std::uint64_t>(0, 50));

TEST(TConv2dTest, ImpulseResponseIsKernelCentre) {
  Rng rng(4);
  LayerSpec l = RandomConvLayer(rng, LayerKind::kTConv, 1, 1, 4, 4, 2, 1, 0, false);
  Tensor3 x(1, 1, 1);
  x(0, 0, 0) = 1.0;
  const Tensor3 y = tconv2d(x, l);
  ASSERT_EQ(y.shape(), (Shape3{1, 2, 2}));
  for (std::size_t r = 0; r < 2; ++r) {
    for (std::size_t c = 0; c < 2; ++c) EXPECT_EQ(y(0, r, c), l.weight.values[(r + 1) * 4 + c + 1]);
  }
}

TEST(TConv2dTest, NegativeOutputSizeIsError) {
  Rng rng(5);
  const LayerSpec l = RandomConvLayer(rng, LayerKind::kTConv, 1, 1, 1, 1, 1, 2);
  EXPECT_THROW(tconv2d(Tensor3(1, 1, 1), l), ShapeError);
}

TEST(GdnTest, ClosedForms) {
  Tensor3 x(2, 1, 1);
  x(0, 0, 0) = 1.0;
  const LayerSpec l = testing::GdnLayer(LayerKind::kGdn, {1, 1}, {1, 0, 0, 1});
  const Tensor3 y = gdn(x, l);
  EXPECT_NEAR(y(0, 0, 0), 1.0 / std::numbers::sqrt2, 1e-15);
  EXPECT_EQ(y(1, 0, 0), 0.0);

  Rng rng(6);
  const Tensor3 z = rng.normal_tensor({2, 3, 3});
  const LayerSpec ident = testing::GdnLayer(LayerKind::kGdn, {1, 1}, {0, 0, 0, 0});
  EXPECT_EQ(gdn(z, ident), z);
  const LayerSpec scaled = testing::GdnLayer(LayerKind::kGdn, {2.5, 0.7}, {0, 0, 0, 0});
  LayerSpec inv = scaled;
  inv.kind = LayerKind::kIgdn;
  EXPECT_LE(MaxAbsDiff(igdn(gdn(z, scaled), inv), z), 1e-12);
}

TEST(GdnTest, PreservesSignAndIsBounded) {
  Rng rng(7);
  const std::size_t c = 4;
  std::vector<double> beta(c), gamma(c * c);
  for (double& b : beta) b = rng.uniform(0.2, 2.0);
  for (double& g : gamma) g = rng.uniform(0.0, 0.5);
  const LayerSpec l = testing::GdnLayer(LayerKind::kGdn, beta, gamma);
  const Tensor3 x = rng.normal_tensor({c, 6, 6}, 3.0);
  const Tensor3 y = gdn(x, l);
  for (std::size_t i = 0; i < c; ++i) {
    for (std::size_t p = 0; p < 36; ++p) {
      const double xi = x.channel(i)[p], yi = y.channel(i)[p];
      EXPECT_EQ(std::signbit(xi), std::signbit(yi));
      EXPECT_LE(std::abs(yi), std::abs(xi) / std::sqrt(beta[i]) + 1e-15);
    }
  }
}

TEST(GdnTest, RejectsInvalidParameters) {
  LayerSpec l = testing::GdnLayer(LayerKind::kGdn, {1.0, 0.0}, {0, 0, 0, 0});
  EXPECT_THROW(l.Validate(), ValueError);
  l = testing::GdnLayer(LayerKind::kGdn, {1.0, 1.0}, {0, -1, 0, 0});
  EXPECT_THROW(l.Validate(), ValueError);
  l = testing::GdnLayer(LayerKind::kGdn, {1.0, 1.0}, {0, 0, 0});
  EXPECT_THROW(l.Validate(), ShapeError);
}

TEST(ActivationTest, ReluAndLeakyRelu) {
  const Tensor3 x(Shape3{1, 1, 3}, std::vector<double>{-2.0, 0.0, 3.0});
  EXPECT_EQ(relu(x).data()[0], 0.0);
  EXPECT_EQ(relu(x).data()[2], 3.0);
  EXPECT_DOUBLE_EQ(leaky_relu(x, 0.1).data()[0], -0.2);
  EXPECT_EQ(leaky_relu(x, 0.1).data()[2], 3.0);
}

TEST(QuantizeTest, TiesToEven) {
  const Tensor3 x(Shape3{1, 1, 6}, std::vector<double>{0.5, 1.5, 2.5, -0.5, -1.5, 3.0});
  const Tensor3 q = quantize(x);
  EXPECT_EQ(q.data()[0], 0.0);
  EXPECT_EQ(q.data()[1], 2.0);
  EXPECT_EQ(q.data()[2], 2.0);
  EXPECT_EQ(q.data()[3], 0.0);
  EXPECT_EQ(q.data()[4], -2.0);
  EXPECT_EQ(q.data()[5], 3.0);
  Rng rng(8);
  const Tensor3 z = rng.normal_tensor({2, 4, 4}, 5.0);
  EXPECT_EQ(quantize(quantize(z)), quantize(z));
}

TEST(NetworkTest, ValidatesChannelChaining) {
  Rng rng(9);
  std::vector<LayerSpec> layers{RandomConvLayer(rng, LayerKind::kTConv, 4, 3, 3, 3, 2, 1, 1),
                                RandomConvLayer(rng, LayerKind::kTConv, 4, 3, 3, 3, 2, 1, 1)};
  EXPECT_THROW(Network(NetKind::kSynthesis, layers), ShapeError);
  layers.pop_back();
  EXPECT_EQ(Network(NetKind::kSynthesis, layers).scale_factor(), 2u);
  EXPECT_THROW(Network(NetKind::kSynthesis, {}), ShapeError);
}

TEST(NetworkTest, SingleLayerPassthrough) {
  Rng rng(10);
  const Tensor3 z = rng.normal_tensor({3, 4, 5});
  const SynthesisNet syn(Network(NetKind::kSynthesis, {testing::IdentityLayer(LayerKind::kTConv, 3)}));
  EXPECT_EQ(run_synthesis(syn, z), z);
  const AnalysisNet ana(Network(NetKind::kAnalysis, {testing::IdentityLayer(LayerKind::kConv, 3)}));
  EXPECT_EQ(run_analysis(ana, z), z);
  EXPECT_THROW(run_synthesis(syn, Tensor3(2, 4, 4)), ShapeError);
  EXPECT_THROW(SynthesisNet(Network(NetKind::kAnalysis, {testing::IdentityLayer(LayerKind::kConv, 3)})),
               ValueError);
}

TEST(NetworkTest, OneByOneDecoderImpulseIsMatrixColumn) {
  const auto t = dct_matrix(4);
  LayerSpec l;
  l.kind = LayerKind::kTConv;
  l.in_channels = l.out_channels = 4;
  // tconv weight [in, out]: w[i][o] = H[i][o], so output = H^T z.
  l.weight = {{4, 4, 1, 1}, std::vector<double>(t.matrix().begin(), t.matrix().end())};
  const SynthesisNet syn(Network(NetKind::kSynthesis, {l}));
  for (std::size_t i = 0; i < 4; ++i) {
    Tensor3 delta(4, 1, 1);
    delta(i, 0, 0) = 1.0;
    const Tensor3 out = run_synthesis(syn, delta);
    const auto basis = linear_basis(t, i);
    for (std::size_t o = 0; o < 4; ++o) EXPECT_EQ(out(o, 0, 0), basis[o]);
  }
}

TEST(NetworkTest, ZeroLatentThroughZeroBiasGdnNetIsZero) {
  ToyOptions opts;
  opts.zero_bias = true;
  const ToyCoder toy = make_toy_coder(11, opts);
  const Tensor3 out = run_synthesis(toy.synthesis, Tensor3(8, 3, 3));
  for (double v : out.data()) EXPECT_EQ(v, 0.0);
}

TEST(NetworkTest, ShapeContract) {
  const ToyCoder toy = make_toy_coder(12);
  ASSERT_EQ(toy.analysis.scale_factor(), 4u);
  ASSERT_EQ(toy.synthesis.scale_factor(), 4u);
  Rng rng(12);
  const Tensor3 x = rng.uniform_tensor({3, 16, 24}, 0.0, 1.0);
  const Tensor3 z = run_analysis(toy.analysis, x);
  EXPECT_EQ(z.shape(), (Shape3{8, 4, 6}));
  EXPECT_EQ(run_synthesis(toy.synthesis, z).shape(), x.shape());
}

TEST(NetworkTest, ConvOnlyZeroBiasNetIsLinear) {
  ToyOptions opts;
  const ToyCoder toy = make_toy_coder(13, opts);
  const Network lin = linear_part(toy.synthesis.network());
  for (const auto& l : lin.layers()) {
    EXPECT_TRUE(l.kind == LayerKind::kConv || l.kind == LayerKind::kTConv);
    for (double b : l.bias.values) EXPECT_EQ(b, 0.0);
  }
  Rng rng(13);
  const Tensor3 a = rng.normal_tensor({8, 3, 4}), b = rng.normal_tensor({8, 3, 4});
  const Tensor3 lhs = lin.forward(add(scale(a, 1.7), scale(b, -0.4)));
  const Tensor3 rhs = add(scale(lin.forward(a), 1.7), scale(lin.forward(b), -0.4));
  EXPECT_LE(MaxAbsDiff(lhs, rhs), 1e-9);
}

TEST(NetworkTest, ShiftByOneLatentStepShiftsOutputByStride) {
  const ToyCoder toy = make_toy_coder(14);
  const Network lin = linear_part(toy.synthesis.network());
  const std::size_t s = lin.scale_factor();
  Tensor3 z0(8, 8, 8), z1(8, 8, 8);
  z0(2, 3, 3) = 1.0;
  z1(2, 3, 4) = 1.0;
  const Tensor3 y0 = lin.forward(z0), y1 = lin.forward(z1);
  const std::size_t margin = 12;
  for (std::size_t c = 0; c < y0.channels(); ++c) {
    for (std::size_t y = margin; y + margin < y0.height(); ++y) {
      for (std::size_t x = margin; x + margin + s < y0.width(); ++x) {
        EXPECT_NEAR(y1(c, y, x + s), y0(c, y, x), 1e-9);
      }
    }
  }
}

}  // namespace
}  // namespace codec_lens
