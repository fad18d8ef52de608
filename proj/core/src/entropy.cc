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

#include "codec_lens/entropy.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "codec_lens/error.h"

namespace codec_lens {

std::size_t ChannelRateReport::rank_of(std::size_t channel) const {
  const auto it = std::find(ranking.begin(), ranking.end(), channel);
  if (it == ranking.end()) throw IndexError("channel not in ranking");
  return static_cast<std::size_t>(it - ranking.begin());
}

double empirical_entropy(const std::vector<double>& symbols) {
  if (symbols.empty()) return 0.0;
  std::map<double, std::size_t> histogram;
  for (double s : symbols) ++histogram[s];
  const double total = static_cast<double>(symbols.size());
  double h = 0.0;
  for (const auto& [symbol, count] : histogram) {
    const double p = static_cast<double>(count) / total;
    h -= p * std::log2(p);
  }
  // A single-symbol histogram gives -1 * log2(1) = -0.0.
  return h == 0.0 ? 0.0 : h;
}

std::vector<std::size_t> rank_by_rate(const std::vector<double>& rates) {
  std::vector<std::size_t> order(rates.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return rates[a] > rates[b]; });
  return order;
}

ChannelRateReport estimate_rates_from_latents(const std::vector<Tensor3>& latents,
                                              std::size_t scale_factor) {
  if (latents.empty()) throw ValueError("estimate_rates: no images");
  if (scale_factor == 0) throw ValueError("estimate_rates: scale factor must be positive");
  const std::size_t channels = latents.front().channels();
  std::vector<std::vector<double>> pooled(channels);
  for (const Tensor3& z : latents) {
    if (z.channels() != channels) {
      throw ShapeError("estimate_rates: latents disagree on channel count");
    }
    const Tensor3 q = quantize(z);
    for (std::size_t c = 0; c < channels; ++c) {
      auto ch = q.channel(c);
      pooled[c].insert(pooled[c].end(), ch.begin(), ch.end());
    }
  }
  ChannelRateReport report;
  report.scale_factor = scale_factor;
  report.symbol_count = pooled.empty() ? 0 : pooled.front().size();
  const double area = static_cast<double>(scale_factor * scale_factor);
  for (std::size_t c = 0; c < channels; ++c) {
    const double h = empirical_entropy(pooled[c]);
    report.entropy_bits.push_back(h);
    report.bpp.push_back(h / area);
  }
  report.total_bpp = std::accumulate(report.bpp.begin(), report.bpp.end(), 0.0);
  report.ranking = rank_by_rate(report.entropy_bits);
  return report;
}

ChannelRateReport estimate_rates(const AnalysisNet& net,
                                 const std::vector<ImagePlane>& images) {
  if (images.empty()) throw ValueError("estimate_rates: no images");
  std::vector<Tensor3> latents;
  latents.reserve(images.size());
  for (const ImagePlane& img : images) {
    latents.push_back(
        run_analysis(net, pad_to_multiple(img.pixels(), net.scale_factor())));
  }
  return estimate_rates_from_latents(latents, net.scale_factor());
}

std::vector<std::size_t> rank_channels(const ChannelRateReport& report) {
  return report.ranking;
}

nlohmann::json to_json(const ChannelRateReport& report) {
  nlohmann::json channels = nlohmann::json::array();
  for (std::size_t c = 0; c < report.channels(); ++c) {
    channels.push_back({{"channel", c},
                        {"entropy_bits", report.entropy_bits[c]},
                        {"bpp", report.bpp[c]},
                        {"rank", report.rank_of(c)}});
  }
  return {{"channels", channels},
          {"total_bpp", report.total_bpp},
          {"ranking", report.ranking},
          {"scale_factor", report.scale_factor},
          {"symbols_per_channel", report.symbol_count}};
}

}  // namespace codec_lens
