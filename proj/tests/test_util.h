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

#ifndef CODEC_LENS_TESTS_TEST_UTIL_H_
#define CODEC_LENS_TESTS_TEST_UTIL_H_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "codec_lens/nn.h"
#include "codec_lens/random.h"
#include "codec_lens/tensor.h"

namespace codec_lens::testing {

inline double MaxAbsDiff(const Tensor3& a, const Tensor3& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    worst = std::max(worst, std::abs(a.data()[i] - b.data()[i]));
  }
  return worst;
}

inline double Dot(const Tensor3& a, const Tensor3& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a.data()[i] * b.data()[i];
  return s;
}

// Direct six-loop cross-correlation, independent of the production kernel's
// range arithmetic.
inline Tensor3 NaiveConv2d(const Tensor3& in, const LayerSpec& l) {
  const long h = static_cast<long>(in.height()), w = static_cast<long>(in.width());
  const long kh = static_cast<long>(l.kernel_h), kw = static_cast<long>(l.kernel_w);
  const long st = static_cast<long>(l.stride), p = static_cast<long>(l.padding);
  const long oh = (h + 2 * p - kh) / st + 1, ow = (w + 2 * p - kw) / st + 1;
  Tensor3 out(l.out_channels, static_cast<std::size_t>(oh), static_cast<std::size_t>(ow));
  for (std::size_t co = 0; co < l.out_channels; ++co) {
    for (long oy = 0; oy < oh; ++oy) {
      for (long ox = 0; ox < ow; ++ox) {
        double acc = l.bias.empty() ? 0.0 : l.bias.values[co];
        for (std::size_t ci = 0; ci < l.in_channels; ++ci) {
          for (long ky = 0; ky < kh; ++ky) {
            for (long kx = 0; kx < kw; ++kx) {
              const long iy = oy * st - p + ky, ix = ox * st - p + kx;
              if (iy < 0 || iy >= h || ix < 0 || ix >= w) continue;
              acc += l.weight.values[((co * l.in_channels + ci) * kh + ky) * kw + kx] *
                     in(ci, iy, ix);
            }
          }
        }
        out(co, oy, ox) = acc;
      }
    }
  }
  return out;
}

// Transposed convolution as a gather over the output grid.
inline Tensor3 NaiveTConv2d(const Tensor3& in, const LayerSpec& l) {
  const long h = static_cast<long>(in.height()), w = static_cast<long>(in.width());
  const long kh = static_cast<long>(l.kernel_h), kw = static_cast<long>(l.kernel_w);
  const long st = static_cast<long>(l.stride), p = static_cast<long>(l.padding);
  const long op = static_cast<long>(l.output_padding);
  const long oh = (h - 1) * st - 2 * p + kh + op, ow = (w - 1) * st - 2 * p + kw + op;
  Tensor3 out(l.out_channels, static_cast<std::size_t>(oh), static_cast<std::size_t>(ow));
  for (std::size_t co = 0; co < l.out_channels; ++co) {
    for (long oy = 0; oy < oh; ++oy) {
      for (long ox = 0; ox < ow; ++ox) {
        double acc = l.bias.empty() ? 0.0 : l.bias.values[co];
        for (std::size_t ci = 0; ci < l.in_channels; ++ci) {
          for (long ky = 0; ky < kh; ++ky) {
            for (long kx = 0; kx < kw; ++kx) {
              const long ny = oy + p - ky, nx = ox + p - kx;
              if (ny < 0 || nx < 0 || ny % st != 0 || nx % st != 0) continue;
              const long iy = ny / st, ix = nx / st;
              if (iy >= h || ix >= w) continue;
              acc += l.weight.values[((ci * l.out_channels + co) * kh + ky) * kw + kx] *
                     in(ci, iy, ix);
            }
          }
        }
        out(co, oy, ox) = acc;
      }
    }
  }
  return out;
}

inline LayerSpec RandomConvLayer(Rng& rng, LayerKind kind, std::size_t in, std::size_t out,
                                 std::size_t kh, std::size_t kw, std::size_t stride,
                                 std::size_t padding, std::size_t output_padding = 0,
                                 bool with_bias = true) {
  LayerSpec l;
  l.kind = kind;
  l.in_channels = in;
  l.out_channels = out;
  l.kernel_h = kh;
  l.kernel_w = kw;
  l.stride = stride;
  l.padding = padding;
  l.output_padding = output_padding;
  l.weight.shape = kind == LayerKind::kConv ? std::vector<std::size_t>{out, in, kh, kw}
                                            : std::vector<std::size_t>{in, out, kh, kw};
  l.weight.values.resize(in * out * kh * kw);
  for (double& v : l.weight.values) v = rng.normal();
  if (with_bias) {
    l.bias.shape = {out};
    l.bias.values.resize(out);
    for (double& v : l.bias.values) v = rng.normal();
  }
  return l;
}

// 1x1 layer whose weight is the identity (in == out).
inline LayerSpec IdentityLayer(LayerKind kind, std::size_t channels) {
  LayerSpec l;
  l.kind = kind;
  l.in_channels = l.out_channels = channels;
  l.weight.shape = {channels, channels, 1, 1};
  l.weight.values.assign(channels * channels, 0.0);
  for (std::size_t i = 0; i < channels; ++i) l.weight.values[i * channels + i] = 1.0;
  return l;
}

inline LayerSpec GdnLayer(LayerKind kind, std::vector<double> beta, std::vector<double> gamma) {
  LayerSpec l;
  l.kind = kind;
  l.in_channels = l.out_channels = beta.size();
  l.beta.shape = {beta.size()};
  l.beta.values = std::move(beta);
  l.gamma.shape = {l.in_channels, l.in_channels};
  l.gamma.values = std::move(gamma);
  return l;
}

// Smooth gradients, edges and texture: a stand-in natural image.
inline ImagePlane SyntheticPhoto(std::size_t height, std::size_t width, std::size_t channels,
                                 std::uint64_t seed) {
  Rng rng(seed);
  Tensor3 t(channels, height, width);
  for (std::size_t c = 0; c < channels; ++c) {
    for (std::size_t y = 0; y < height; ++y) {
      for (std::size_t x = 0; x < width; ++x) {
        const double fy = static_cast<double>(y) / static_cast<double>(height);
        const double fx = static_cast<double>(x) / static_cast<double>(width);
        double v = 0.35 + 0.25 * fx + 0.15 * std::sin(6.0 * fy + c);
        if (x > width / 3 && y < 2 * height / 3) v += 0.2;
        v += 0.05 * std::sin(0.9 * x) * std::cos(0.7 * y);
        v += 0.02 * rng.normal();
        t(c, y, x) = std::clamp(v, 0.0, 1.0);
      }
    }
  }
  return ImagePlane(std::move(t));
}

}  // namespace codec_lens::testing

#endif  // CODEC_LENS_TESTS_TEST_UTIL_H_
