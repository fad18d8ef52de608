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

#include "codec_lens/analysis.h"

#include <algorithm>
#include <cmath>
#include <functional>

#include "codec_lens/error.h"
#include "codec_lens/parallel.h"

namespace codec_lens {
namespace {

// Pairwise sum of n tensors produced on demand. Merges follow a binary
// counter over the component index, so the summation tree depends only on n.
class PairwiseSum {
 public:
  void Push(Tensor3 t) {
    stack_.push_back({0, std::move(t)});
    while (stack_.size() >= 2 &&
           stack_[stack_.size() - 1].level == stack_[stack_.size() - 2].level) {
      Node right = std::move(stack_.back());
      stack_.pop_back();
      Node& left = stack_.back();
      accumulate(left.sum, right.sum);
      ++left.level;
    }
  }

  Tensor3 Finish(Shape3 empty_shape) && {
    if (stack_.empty()) return Tensor3(empty_shape);
    Tensor3 acc = std::move(stack_.back().sum);
    for (std::size_t j = stack_.size() - 1; j-- > 0;) {
      Tensor3 left = std::move(stack_[j].sum);
      accumulate(left, acc);
      acc = std::move(left);
    }
    return acc;
  }

 private:
  struct Node {
    std::size_t level;
    Tensor3 sum;
  };
  std::vector<Node> stack_;
};

// Decodes components [0, n) in parallel batches and sums them pairwise.
// `produce(i)` returns nullopt for components known to decode to zero.
Tensor3 SumDecoded(std::size_t n, Shape3 out_shape,
                   const std::function<std::optional<Tensor3>(std::size_t)>& produce) {
  PairwiseSum sum;
  const std::size_t batch = std::max<std::size_t>(1, 2 * max_threads());
  std::vector<std::optional<Tensor3>> decoded(batch);
  for (std::size_t start = 0; start < n; start += batch) {
    const std::size_t count = std::min(batch, n - start);
    parallel_for(count, [&](std::size_t k) { decoded[k] = produce(start + k); });
    for (std::size_t k = 0; k < count; ++k) {
      if (decoded[k]) sum.Push(std::move(*decoded[k]));
      decoded[k].reset();
    }
  }
  return std::move(sum).Finish(out_shape);
}

Shape3 ExpectedOutput(const Decoder& d, const Shape3& latent) {
  return {d.output_channels(), latent.height * d.scale_factor(),
          latent.width * d.scale_factor()};
}

void RequireLatentChannels(const Decoder& d, const Tensor3& z) {
  if (z.channels() != d.latent_channels()) {
    throw ShapeError(d.name() + ": latent has " + std::to_string(z.channels()) +
                     " channels, decoder expects " + std::to_string(d.latent_channels()));
  }
}

struct PooledMoments {
  std::size_t count = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void Merge(const MseStats& s) {
    if (s.count == 0) return;
    const double n_b = static_cast<double>(s.count);
    const double m2_b = s.std_dev * s.std_dev * n_b;
    const double n_a = static_cast<double>(count);
    const double delta = s.mse - mean;
    const double n = n_a + n_b;
    mean += delta * n_b / n;
    m2 += m2_b + delta * delta * n_a * n_b / n;
    count += s.count;
  }
  double StdDev() const {
    return count == 0 ? 0.0 : std::sqrt(m2 / static_cast<double>(count));
  }
};

}  // namespace

NetworkDecoder::NetworkDecoder(SynthesisNet net, std::string name)
    : net_(std::move(net)), name_(std::move(name)) {}

Tensor3 NetworkDecoder::decode(const Tensor3& z) const {
  Tensor3 out = run_synthesis(net_, z);
  const Shape3 expected = ExpectedOutput(*this, z.shape());
  if (out.shape() != expected) {
    throw ShapeError(name_ + ": decoded shape " + out.shape().ToString() +
                     " is not latent size x " + std::to_string(scale_factor()) + " " +
                     expected.ToString());
  }
  return out;
}

LinearBlockDecoder::LinearBlockDecoder(OrthogonalTransform transform)
    : transform_(std::move(transform)), block_(0) {
  const std::size_t d = transform_.dim();
  block_ = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(d))));
  if (block_ * block_ != d) {
    throw ValueError("LinearBlockDecoder: dimension " + std::to_string(d) +
                     " is not a perfect square");
  }
}

Tensor3 LinearBlockDecoder::decode(const Tensor3& z) const {
  RequireLatentChannels(*this, z);
  const std::size_t d = transform_.dim();
  Tensor3 out(1, z.height() * block_, z.width() * block_);
  std::vector<double> column(d);
  for (std::size_t m = 0; m < z.height(); ++m) {
    for (std::size_t n = 0; n < z.width(); ++n) {
      bool any = false;
      for (std::size_t c = 0; c < d; ++c) {
        column[c] = z(c, m, n);
        any = any || column[c] != 0.0;
      }
      // H^T 0 = 0 exactly; skipping keeps impulse decodes cheap.
      if (!any) continue;
      const std::vector<double> block = inverse(transform_, column);
      for (std::size_t y = 0; y < block_; ++y) {
        for (std::size_t x = 0; x < block_; ++x) {
          out(0, m * block_ + y, n * block_ + x) = block[y * block_ + x];
        }
      }
    }
  }
  return out;
}

Tensor3 LinearBlockDecoder::encode(const Tensor3& image) const {
  Tensor3 gray = image.channels() == 1 ? image : channel_mean(image);
  gray = pad_to_multiple(gray, block_);
  const std::size_t h = gray.height() / block_;
  const std::size_t w = gray.width() / block_;
  Tensor3 z(transform_.dim(), h, w);
  std::vector<double> patch(transform_.dim());
  for (std::size_t m = 0; m < h; ++m) {
    for (std::size_t n = 0; n < w; ++n) {
      for (std::size_t y = 0; y < block_; ++y) {
        for (std::size_t x = 0; x < block_; ++x) {
          patch[y * block_ + x] = gray(0, m * block_ + y, n * block_ + x);
        }
      }
      const std::vector<double> coeffs = forward(transform_, patch);
      for (std::size_t c = 0; c < coeffs.size(); ++c) z(c, m, n) = coeffs[c];
    }
  }
  return z;
}

std::unique_ptr<LinearBlockDecoder> make_builtin_decoder(const std::string& spec) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos) {
    throw ValueError("decoder spec '" + spec + "' must look like dct:N, wht:N or haar:N");
  }
  const std::string family = spec.substr(0, colon);
  std::size_t n = 0;
  try {
    std::size_t used = 0;
    n = std::stoul(spec.substr(colon + 1), &used);
    if (used != spec.size() - colon - 1) throw std::invalid_argument(spec);
  } catch (const std::exception&) {
    throw ValueError("decoder spec '" + spec + "' has an invalid block size");
  }
  if (n == 0 || n > 64) throw ValueError("decoder block size must be in [1, 64]");
  OrthogonalTransform t = family == "dct"    ? dct_matrix(n)
                          : family == "wht"  ? wht_matrix(n)
                          : family == "haar" ? haar_matrix(n)
                                             : throw ValueError("unknown decoder family '" +
                                                                family + "'");
  return std::make_unique<LinearBlockDecoder>(kronecker(t, t));
}

const Tensor3& OffsetFreeDecoder::zero_response(const Shape3& shape) const {
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = cache_.find(shape);
    if (it != cache_.end()) return it->second;
  }
  Tensor3 response = decoder_.decode(Tensor3(shape));
  std::lock_guard<std::mutex> lock(mu_);
  return cache_.try_emplace(shape, std::move(response)).first->second;
}

Tensor3 OffsetFreeDecoder::decode(const Tensor3& z) const {
  return sub(decoder_.decode(z), zero_response(z.shape()));
}

Tensor3 offset_free_decode(const Decoder& decoder, const Tensor3& z) {
  return OffsetFreeDecoder(decoder).decode(z);
}

Tensor3 spatial_component(const Tensor3& z, std::size_t m, std::size_t n) {
  if (m >= z.height() || n >= z.width()) {
    throw IndexError("spatial index out of range for " + z.shape().ToString());
  }
  Tensor3 out(z.shape());
  for (std::size_t c = 0; c < z.channels(); ++c) out(c, m, n) = z(c, m, n);
  return out;
}

std::vector<Tensor3> spatial_components(const Tensor3& z) {
  std::vector<Tensor3> out;
  out.reserve(z.shape().plane());
  for (std::size_t m = 0; m < z.height(); ++m) {
    for (std::size_t n = 0; n < z.width(); ++n) out.push_back(spatial_component(z, m, n));
  }
  return out;
}

Tensor3 channel_component(const Tensor3& z, std::size_t i) {
  if (i >= z.channels()) {
    throw IndexError("channel index out of range for " + z.shape().ToString());
  }
  Tensor3 out(z.shape());
  std::copy(z.channel(i).begin(), z.channel(i).end(), out.channel(i).begin());
  return out;
}

std::vector<Tensor3> channel_components(const Tensor3& z) {
  std::vector<Tensor3> out;
  out.reserve(z.channels());
  for (std::size_t i = 0; i < z.channels(); ++i) out.push_back(channel_component(z, i));
  return out;
}

Tensor3 aggregate_spatial(const OffsetFreeDecoder& decoder, const Tensor3& z) {
  RequireLatentChannels(decoder.base(), z);
  const Shape3 out_shape = ExpectedOutput(decoder.base(), z.shape());
  decoder.zero_response(z.shape());
  return SumDecoded(z.shape().plane(), out_shape,
                    [&](std::size_t k) -> std::optional<Tensor3> {
                      const std::size_t m = k / z.width();
                      const std::size_t n = k % z.width();
                      bool any = false;
                      for (std::size_t c = 0; c < z.channels() && !any; ++c) {
                        any = z(c, m, n) != 0.0;
                      }
                      // g'_s(0) = 0 exactly.
                      if (!any) return std::nullopt;
                      return decoder.decode(spatial_component(z, m, n));
                    });
}

Tensor3 aggregate_channel(const OffsetFreeDecoder& decoder, const Tensor3& z) {
  RequireLatentChannels(decoder.base(), z);
  const Shape3 out_shape = ExpectedOutput(decoder.base(), z.shape());
  decoder.zero_response(z.shape());
  return SumDecoded(z.channels(), out_shape, [&](std::size_t i) -> std::optional<Tensor3> {
    auto ch = z.channel(i);
    if (std::all_of(ch.begin(), ch.end(), [](double v) { return v == 0.0; })) {
      return std::nullopt;
    }
    return decoder.decode(channel_component(z, i));
  });
}

Tensor3 aggregate_spatial(const Decoder& decoder, const Tensor3& z) {
  return aggregate_spatial(OffsetFreeDecoder(decoder), z);
}

Tensor3 aggregate_channel(const Decoder& decoder, const Tensor3& z) {
  return aggregate_channel(OffsetFreeDecoder(decoder), z);
}

Tensor3 channel_impulse(std::size_t channels, std::size_t i, double amplitude,
                        std::size_t extent) {
  if (i >= channels) {
    throw IndexError("impulse channel " + std::to_string(i) + " out of range for " +
                     std::to_string(channels) + " channels");
  }
  if (!std::isfinite(amplitude) || amplitude == 0.0) {
    throw ValueError("impulse amplitude must be finite and nonzero");
  }
  if (extent % 2 == 0) throw ValueError("impulse extent must be odd");
  Tensor3 delta(channels, extent, extent);
  delta(i, extent / 2, extent / 2) = amplitude;
  return delta;
}

Amplitudes amplitudes_from_latents(const std::vector<Tensor3>& latents,
                                   AmplitudeMode mode) {
  if (latents.empty()) throw ValueError("amplitudes: no images");
  const std::size_t channels = latents.front().channels();
  Amplitudes result;
  result.values.assign(channels, 1.0);
  if (mode == AmplitudeMode::kUnit) return result;
  for (std::size_t c = 0; c < channels; ++c) {
    double best = 0.0;
    bool first = true;
    for (const Tensor3& z : latents) {
      if (z.channels() != channels) {
        throw ShapeError("amplitudes: latents disagree on channel count");
      }
      const double v =
          mode == AmplitudeMode::kSignedMax ? channel_max(z, c) : channel_abs_max(z, c);
      best = first ? v : std::max(best, v);
      first = false;
    }
    if (best == 0.0) {
      result.fallback_channels.push_back(c);
      result.warnings.push_back("channel " + std::to_string(c) +
                                " has maximum 0; using amplitude 1");
    } else {
      result.values[c] = best;
    }
  }
  return result;
}

Amplitudes amplitudes_from_images(const AnalysisNet& net,
                                  const std::vector<ImagePlane>& images,
                                  AmplitudeMode mode) {
  if (images.empty()) throw ValueError("amplitudes: no images");
  std::vector<Tensor3> latents;
  latents.reserve(images.size());
  for (const ImagePlane& img : images) {
    latents.push_back(run_analysis(net, pad_to_multiple(img.pixels(), net.scale_factor())));
  }
  return amplitudes_from_latents(latents, mode);
}

std::vector<const BasisEntry*> BasisSet::ordered() const {
  std::vector<const BasisEntry*> out;
  out.reserve(entries.size());
  for (const BasisEntry& e : entries) out.push_back(&e);
  const bool ranked = std::all_of(entries.begin(), entries.end(),
                                  [](const BasisEntry& e) { return e.rank.has_value(); });
  std::stable_sort(out.begin(), out.end(), [&](const BasisEntry* a, const BasisEntry* b) {
    return ranked ? *a->rank < *b->rank : a->channel < b->channel;
  });
  return out;
}

BasisSet extract_basis(const Decoder& decoder, const std::vector<double>& amplitudes,
                       const ExtractOptions& options) {
  const std::size_t channels = decoder.latent_channels();
  if (amplitudes.size() != channels) {
    throw ShapeError("extract_basis: " + std::to_string(amplitudes.size()) +
                     " amplitudes for " + std::to_string(channels) + " channels");
  }
  BasisSet basis;
  basis.offset_free = options.offset_free;
  basis.impulse_extent = options.impulse_extent;
  basis.decoder_name = decoder.name();
  basis.entries.resize(channels);
  OffsetFreeDecoder offset_free(decoder);
  parallel_for(channels, [&](std::size_t i) {
    try {
      const Tensor3 delta =
          channel_impulse(channels, i, amplitudes[i], options.impulse_extent);
      basis.entries[i] = BasisEntry{
          i, amplitudes[i],
          options.offset_free ? offset_free.decode(delta) : decoder.decode(delta),
          std::nullopt};
    } catch (const Error& e) {
      throw Error("extract_basis: channel " + std::to_string(i) + ": " + e.what());
    }
  });
  return basis;
}

void attach_ranks(BasisSet& basis, const ChannelRateReport& rates) {
  if (rates.channels() != basis.size()) {
    throw ShapeError("attach_ranks: rate report covers " + std::to_string(rates.channels()) +
                     " channels, basis has " + std::to_string(basis.size()));
  }
  for (BasisEntry& e : basis.entries) e.rank = rates.rank_of(e.channel);
}

SeparabilityReport separability(const Decoder& decoder, const std::vector<Tensor3>& latents,
                                const SeparabilityOptions& options) {
  if (latents.empty()) throw ValueError("separability: no latents");
  SeparabilityReport report;
  report.quantized = options.quantize;
  const std::size_t spatial_count =
      options.spatial_subset == 0 ? latents.size()
                                  : std::min(options.spatial_subset, latents.size());
  OffsetFreeDecoder offset_free(decoder);
  PooledMoments channel_moments;
  PooledMoments spatial_moments;
  double channel_sum = 0.0;
  double spatial_sum = 0.0;
  for (std::size_t k = 0; k < latents.size(); ++k) {
    const Tensor3 z = options.quantize ? quantize(latents[k]) : latents[k];
    const Tensor3 joint = offset_free.decode(z);
    ImageSeparability row;
    row.index = k;
    const MseStats ch = mse_stats(joint, aggregate_channel(offset_free, z));
    row.mse_channel = ch.mse;
    row.std_channel = ch.std_dev;
    channel_sum += ch.mse;
    channel_moments.Merge(ch);
    if (k < spatial_count) {
      const MseStats sp = mse_stats(joint, aggregate_spatial(offset_free, z));
      row.mse_spatial = sp.mse;
      row.std_spatial = sp.std_dev;
      spatial_sum += sp.mse;
      spatial_moments.Merge(sp);
    }
    report.per_image.push_back(row);
  }
  report.channel_images = latents.size();
  report.spatial_images = spatial_count;
  report.mse_channel = channel_sum / static_cast<double>(latents.size());
  report.std_channel = channel_moments.StdDev();
  report.mse_spatial = spatial_count ? spatial_sum / static_cast<double>(spatial_count) : 0.0;
  report.std_spatial = spatial_moments.StdDev();
  return report;
}

nlohmann::json to_json(const SeparabilityReport& report) {
  nlohmann::json images = nlohmann::json::array();
  for (const ImageSeparability& r : report.per_image) {
    nlohmann::json row = {{"index", r.index},
                          {"mse_channel", r.mse_channel},
                          {"std_channel", r.std_channel}};
    if (r.mse_spatial) {
      row["mse_spatial"] = *r.mse_spatial;
      row["std_spatial"] = *r.std_spatial;
    }
    images.push_back(row);
  }
  return {{"mse_channel", report.mse_channel},
          {"std_channel", report.std_channel},
          {"mse_spatial", report.mse_spatial},
          {"std_spatial", report.std_spatial},
          {"channel_images", report.channel_images},
          {"spatial_images", report.spatial_images},
          {"quantized", report.quantized},
          {"decoder_mode", "offset-free"},
          {"std_estimand", "population std of per-pixel squared error, pooled"},
          {"per_image", images}};
}

}  // namespace codec_lens
