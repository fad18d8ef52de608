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

#include "codec_lens/toy.h"

#include <cmath>

#include "codec_lens/random.h"

namespace codec_lens {
namespace {

LayerSpec Resampling(Rng& rng, LayerKind kind, std::size_t in, std::size_t out,
                     bool zero_bias) {
  LayerSpec l;
  l.kind = kind;
  l.in_channels = in;
  l.out_channels = out;
  l.kernel_h = l.kernel_w = 5;
  l.stride = 2;
  l.padding = 2;
  l.output_padding = kind == LayerKind::kTConv ? 1 : 0;
  l.weight.shape = kind == LayerKind::kConv
                       ? std::vector<std::size_t>{out, in, 5, 5}
                       : std::vector<std::size_t>{in, out, 5, 5};
  const double stddev = 1.0 / std::sqrt(static_cast<double>(in * 25));
  l.weight.values.resize(in * out * 25);
  for (double& v : l.weight.values) v = stddev * rng.normal();
  l.bias.shape = {out};
  l.bias.values.resize(out);
  for (double& v : l.bias.values) v = zero_bias ? 0.0 : 0.1 * rng.normal();
  return l;
}

LayerSpec Normalization(Rng& rng, LayerKind kind, std::size_t channels, bool nonlinear) {
  LayerSpec l;
  l.kind = kind;
  l.in_channels = l.out_channels = channels;
  l.beta.shape = {channels};
  l.gamma.shape = {channels, channels};
  l.beta.values.assign(channels, 1.0);
  l.gamma.values.assign(channels * channels, 0.0);
  if (nonlinear) {
    for (double& b : l.beta.values) b = rng.uniform(0.5, 1.5);
    for (std::size_t i = 0; i < channels; ++i) {
      for (std::size_t j = 0; j < channels; ++j) {
        l.gamma.values[i * channels + j] =
            (i == j ? 0.1 : 0.0) + rng.uniform(0.0, 0.05);
      }
    }
  }
  return l;
}

}  // namespace

ToyCoder make_toy_coder(std::uint64_t seed, const ToyOptions& options) {
  Rng rng(seed);
  const std::size_t c = options.latent_channels;
  const std::size_t img = options.image_channels;
  std::vector<LayerSpec> enc{
      Resampling(rng, LayerKind::kConv, img, c, options.zero_bias),
      Normalization(rng, LayerKind::kGdn, c, options.nonlinear),
      Resampling(rng, LayerKind::kConv, c, c, options.zero_bias),
  };
  std::vector<LayerSpec> dec{
      Resampling(rng, LayerKind::kTConv, c, c, options.zero_bias),
      Normalization(rng, LayerKind::kIgdn, c, options.nonlinear),
      Resampling(rng, LayerKind::kTConv, c, img, options.zero_bias),
  };
  return ToyCoder{AnalysisNet(Network(NetKind::kAnalysis, std::move(enc))),
                  SynthesisNet(Network(NetKind::kSynthesis, std::move(dec)))};
}

}  // namespace codec_lens
