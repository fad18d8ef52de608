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

#ifndef CODEC_LENS_ENTROPY_H_
#define CODEC_LENS_ENTROPY_H_

#include <cstddef>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "codec_lens/nn.h"
#include "codec_lens/tensor.h"

namespace codec_lens {

// Empirical per-channel rates of quantized latents.
struct ChannelRateReport {
  // Plug-in Shannon entropy of each channel's quantized symbols, in bits.
  std::vector<double> entropy_bits;
  // entropy_bits[i] / scale^2.
  std::vector<double> bpp;
  double total_bpp = 0.0;
  // Channel indices by descending entropy, ties by ascending index.
  std::vector<std::size_t> ranking;
  std::size_t scale_factor = 1;
  std::size_t symbol_count = 0;

  std::size_t channels() const { return entropy_bits.size(); }
  // Position of `channel` in the ranking.
  std::size_t rank_of(std::size_t channel) const;
};

// Entropy in bits of the empirical distribution of `symbols`.
double empirical_entropy(const std::vector<double>& symbols);

// Pools quantize(latent)[i] across all latents for each channel i.
ChannelRateReport estimate_rates_from_latents(const std::vector<Tensor3>& latents,
                                              std::size_t scale_factor);
// Encodes each image (edge-padded to a multiple of the net's stride) and
// estimates rates on the quantized latents.
ChannelRateReport estimate_rates(const AnalysisNet& net,
                                 const std::vector<ImagePlane>& images);

// Descending-rate permutation with ties broken by ascending channel index.
std::vector<std::size_t> rank_by_rate(const std::vector<double>& rates);
std::vector<std::size_t> rank_channels(const ChannelRateReport& report);

nlohmann::json to_json(const ChannelRateReport& report);

}  // namespace codec_lens

#endif  // CODEC_LENS_ENTROPY_H_
