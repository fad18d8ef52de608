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

#include <benchmark/benchmark.h>

#include "codec_lens/analysis.h"
#include "codec_lens/nn.h"
#include "codec_lens/random.h"
#include "codec_lens/toy.h"

namespace codec_lens {
namespace {

LayerSpec ConvLayer(Rng& rng, LayerKind kind, std::size_t in, std::size_t out) {
  LayerSpec l;
  l.kind = kind;
  l.in_channels = in;
  l.out_channels = out;
  l.kernel_h = l.kernel_w = 5;
  l.stride = 2;
  l.padding = 2;
  l.output_padding = kind == LayerKind::kTConv ? 1 : 0;
  l.weight.shape = kind == LayerKind::kConv ? std::vector<std::size_t>{out, in, 5, 5}
                                            : std::vector<std::size_t>{in, out, 5, 5};
  for (std::size_t i = 0; i < in * out * 25; ++i) l.weight.values.push_back(rng.normal());
  return l;
}

// Args: channels, spatial size of the input.
void BM_Conv2d(benchmark::State& state) {
  Rng rng(1);
  const auto c = static_cast<std::size_t>(state.range(0));
  const auto n = static_cast<std::size_t>(state.range(1));
  const LayerSpec l = ConvLayer(rng, LayerKind::kConv, c, c);
  const Tensor3 x = rng.normal_tensor({c, n, n});
  for (auto _ : state) benchmark::DoNotOptimize(conv2d(x, l));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(c * c * 25 * n * n / 4));
}
BENCHMARK(BM_Conv2d)->Args({8, 64})->Args({32, 64})->Args({64, 128})->Unit(benchmark::kMillisecond);

void BM_TConv2d(benchmark::State& state) {
  Rng rng(2);
  const auto c = static_cast<std::size_t>(state.range(0));
  const auto n = static_cast<std::size_t>(state.range(1));
  const LayerSpec l = ConvLayer(rng, LayerKind::kTConv, c, c);
  const Tensor3 x = rng.normal_tensor({c, n, n});
  for (auto _ : state) benchmark::DoNotOptimize(tconv2d(x, l));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(c * c * 25 * n * n));
}
BENCHMARK(BM_TConv2d)->Args({8, 32})->Args({32, 32})->Args({64, 64})->Unit(benchmark::kMillisecond);

void BM_SeparabilityLinear(benchmark::State& state) {
  const auto dec = make_builtin_decoder("dct:8");
  Rng rng(3);
  const auto h = static_cast<std::size_t>(state.range(0));
  const std::vector<Tensor3> latents{rng.normal_tensor({64, h, h})};
  SeparabilityOptions options;
  options.spatial_subset = 0;
  for (auto _ : state) benchmark::DoNotOptimize(separability(*dec, latents, options));
}
BENCHMARK(BM_SeparabilityLinear)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_SeparabilityToy(benchmark::State& state) {
  const NetworkDecoder dec(make_toy_coder(4).synthesis, "toy");
  Rng rng(4);
  const auto h = static_cast<std::size_t>(state.range(0));
  const std::vector<Tensor3> latents{rng.normal_tensor({8, h, h})};
  for (auto _ : state) benchmark::DoNotOptimize(separability(dec, latents));
}
BENCHMARK(BM_SeparabilityToy)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_ExtractBasisToy(benchmark::State& state) {
  const NetworkDecoder dec(make_toy_coder(5).synthesis, "toy");
  const std::vector<double> k(8, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(extract_basis(dec, k));
}
BENCHMARK(BM_ExtractBasisToy)->Unit(benchmark::kMicrosecond);

}  // namespace
}  // namespace codec_lens

BENCHMARK_MAIN();
