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

#ifndef CODEC_LENS_ANALYSIS_H_
#define CODEC_LENS_ANALYSIS_H_

#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "codec_lens/entropy.h"
#include "codec_lens/linear_transforms.h"
#include "codec_lens/nn.h"
#include "codec_lens/tensor.h"

namespace codec_lens {

// A synthesis transform viewed as a black box: latent (C x h x w) ->
// output (c_out x h*s x w*s).
class Decoder {
 public:
  virtual ~Decoder() = default;

  virtual Tensor3 decode(const Tensor3& z) const = 0;
  virtual std::size_t latent_channels() const = 0;
  virtual std::size_t scale_factor() const = 0;
  virtual std::size_t output_channels() const = 0;
  virtual std::string name() const = 0;
};

class NetworkDecoder : public Decoder {
 public:
  explicit NetworkDecoder(SynthesisNet net, std::string name = "synthesis");

  Tensor3 decode(const Tensor3& z) const override;
  std::size_t latent_channels() const override { return net_.latent_channels(); }
  std::size_t scale_factor() const override { return net_.scale_factor(); }
  std::size_t output_channels() const override { return net_.output_channels(); }
  std::string name() const override { return name_; }

  const SynthesisNet& net() const { return net_; }

 private:
  SynthesisNet net_;
  std::string name_;
};

// Block decoder built from a d x d orthogonal transform with d = s^2: each
// latent column z[:, m, n] maps through H^T to the s x s block at (m, n) of a
// single-channel image.
class LinearBlockDecoder : public Decoder {
 public:
  explicit LinearBlockDecoder(OrthogonalTransform transform);

  Tensor3 decode(const Tensor3& z) const override;
  std::size_t latent_channels() const override { return transform_.dim(); }
  std::size_t scale_factor() const override { return block_; }
  std::size_t output_channels() const override { return 1; }
  std::string name() const override { return transform_.name(); }

  // Forward block transform of a 1-channel image (3-channel images are
  // reduced to their channel mean); dims are edge-padded to multiples of s.
  Tensor3 encode(const Tensor3& image) const;
  const OrthogonalTransform& transform() const { return transform_; }

 private:
  OrthogonalTransform transform_;
  std::size_t block_;
};

// Parses "dct:N", "wht:N" or "haar:N" into the separable N x N block decoder
// (latent channels = N^2).
std::unique_ptr<LinearBlockDecoder> make_builtin_decoder(const std::string& spec);

// g'_s(z) = g_s(z) - g_s(0). The zero response is cached per latent shape.
class OffsetFreeDecoder {
 public:
  explicit OffsetFreeDecoder(const Decoder& decoder) : decoder_(decoder) {}

  Tensor3 decode(const Tensor3& z) const;
  const Tensor3& zero_response(const Shape3& shape) const;
  const Decoder& base() const { return decoder_; }

 private:
  const Decoder& decoder_;
  mutable std::mutex mu_;
  mutable std::map<Shape3, Tensor3> cache_;
};

Tensor3 offset_free_decode(const Decoder& decoder, const Tensor3& z);

// z_hat_{m,n}: zero except column (m, n), copied from z.
Tensor3 spatial_component(const Tensor3& z, std::size_t m, std::size_t n);
// All h*w spatial components in row-major (m, n) order.
std::vector<Tensor3> spatial_components(const Tensor3& z);
// z_tilde_i: zero except channel i, copied from z.
Tensor3 channel_component(const Tensor3& z, std::size_t i);
std::vector<Tensor3> channel_components(const Tensor3& z);

// sum_{m,n} g'_s(z_hat_{m,n}) and sum_i g'_s(z_tilde_i). Components are
// decoded in parallel and summed with a pairwise tree fixed by component
// index, so results do not depend on the thread count.
Tensor3 aggregate_spatial(const OffsetFreeDecoder& decoder, const Tensor3& z);
Tensor3 aggregate_channel(const OffsetFreeDecoder& decoder, const Tensor3& z);
Tensor3 aggregate_spatial(const Decoder& decoder, const Tensor3& z);
Tensor3 aggregate_channel(const Decoder& decoder, const Tensor3& z);

// Channel impulse delta_i: C x extent x extent, amplitude at the center of
// channel i and zero elsewhere. extent must be odd.
Tensor3 channel_impulse(std::size_t channels, std::size_t i, double amplitude,
                        std::size_t extent = 1);

enum class AmplitudeMode { kSignedMax, kAbsMax, kUnit };

struct Amplitudes {
  std::vector<double> values;
  // Channels whose maximum was zero and fell back to amplitude 1.
  std::vector<std::size_t> fallback_channels;
  std::vector<std::string> warnings;
};

// k_i = max over all latents and positions of channel i (signed by default).
Amplitudes amplitudes_from_latents(const std::vector<Tensor3>& latents,
                                   AmplitudeMode mode = AmplitudeMode::kSignedMax);
Amplitudes amplitudes_from_images(const AnalysisNet& net,
                                  const std::vector<ImagePlane>& images,
                                  AmplitudeMode mode = AmplitudeMode::kSignedMax);

struct BasisEntry {
  std::size_t channel = 0;
  double amplitude = 1.0;
  Tensor3 image;
  std::optional<std::size_t> rank;
};

struct BasisSet {
  std::vector<BasisEntry> entries;
  // True when images are g'_s(delta_i) rather than g_s(delta_i).
  bool offset_free = false;
  std::size_t impulse_extent = 1;
  std::string decoder_name;

  std::size_t size() const { return entries.size(); }
  // Entries ordered by rank when every entry has one, else by channel.
  std::vector<const BasisEntry*> ordered() const;
};

struct ExtractOptions {
  bool offset_free = false;
  std::size_t impulse_extent = 1;
};

// b_i = g_s(delta_i) for every channel i.
BasisSet extract_basis(const Decoder& decoder, const std::vector<double>& amplitudes,
                       const ExtractOptions& options = {});
void attach_ranks(BasisSet& basis, const ChannelRateReport& rates);

struct ImageSeparability {
  std::size_t index = 0;
  double mse_channel = 0.0;
  double std_channel = 0.0;
  std::optional<double> mse_spatial;
  std::optional<double> std_spatial;
};

struct SeparabilityReport {
  double mse_spatial = 0.0;
  double std_spatial = 0.0;
  double mse_channel = 0.0;
  double std_channel = 0.0;
  std::size_t channel_images = 0;
  std::size_t spatial_images = 0;
  bool quantized = false;
  std::vector<ImageSeparability> per_image;
};

struct SeparabilityOptions {
  // Number of leading latents used for the spatial metric; 0 means all.
  std::size_t spatial_subset = 1;
  bool quantize = false;
};

// mse_* are means of the per-latent MSEs; std_* are population standard
// deviations of the per-pixel squared errors pooled over every evaluated
// pixel.
SeparabilityReport separability(const Decoder& decoder,
                                const std::vector<Tensor3>& latents,
                                const SeparabilityOptions& options = {});

nlohmann::json to_json(const SeparabilityReport& report);

}  // namespace codec_lens

#endif  // CODEC_LENS_ANALYSIS_H_
