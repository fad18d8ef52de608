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

#ifndef CODEC_LENS_NN_H_
#define CODEC_LENS_NN_H_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "codec_lens/tensor.h"

namespace codec_lens {

enum class LayerKind { kConv, kTConv, kGdn, kIgdn, kRelu, kLeakyRelu };

std::string_view to_string(LayerKind kind);
LayerKind parse_layer_kind(std::string_view name);

struct ParamTensor {
  std::vector<std::size_t> shape;
  std::vector<double> values;

  bool empty() const { return values.empty(); }
  bool operator==(const ParamTensor&) const = default;
};

// One layer of a convolutional transform.
//
// Tensor layouts: conv weight [out, in, kh, kw]; tconv weight
// [in, out, kh, kw]; bias and beta [C]; gamma [C, C]. A missing bias is zero.
// GDN parameters are stored post-reparameterization (beta > 0, gamma >= 0).
struct LayerSpec {
  LayerKind kind = LayerKind::kConv;
  std::size_t in_channels = 0;
  std::size_t out_channels = 0;
  std::size_t kernel_h = 1;
  std::size_t kernel_w = 1;
  std::size_t stride = 1;
  std::size_t padding = 0;
  std::size_t output_padding = 0;
  double slope = 0.01;
  ParamTensor weight;
  ParamTensor bias;
  ParamTensor beta;
  ParamTensor gamma;

  // Throws ShapeError / ValueError when the payload disagrees with the
  // declared hyperparameters.
  void Validate() const;
  bool operator==(const LayerSpec&) const = default;
};

// Cross-correlation (no kernel flip) with zero padding.
// Output H' = floor((H + 2p - kh) / stride) + 1.
Tensor3 conv2d(const Tensor3& input, const LayerSpec& layer);
// Adjoint of conv2d with the same parameters, plus bias.
// Output H' = (H - 1) * stride - 2p + kh + output_padding.
Tensor3 tconv2d(const Tensor3& input, const LayerSpec& layer);
// y_i = x_i / sqrt(beta_i + sum_j gamma_ij x_j^2), per pixel.
Tensor3 gdn(const Tensor3& input, const LayerSpec& layer);
// y_i = x_i * sqrt(beta_i + sum_j gamma_ij x_j^2), per pixel.
Tensor3 igdn(const Tensor3& input, const LayerSpec& layer);
Tensor3 relu(const Tensor3& input);
Tensor3 leaky_relu(const Tensor3& input, double slope);
Tensor3 apply_layer(const Tensor3& input, const LayerSpec& layer);

// Elementwise round-half-to-even.
Tensor3 quantize(const Tensor3& z);

enum class NetKind { kAnalysis, kSynthesis };
std::string_view to_string(NetKind kind);

// Ordered stack of layers with consistent channel counts.
class Network {
 public:
  Network(NetKind kind, std::vector<LayerSpec> layers);

  NetKind kind() const { return kind_; }
  const std::vector<LayerSpec>& layers() const { return layers_; }
  std::size_t input_channels() const { return layers_.front().in_channels; }
  std::size_t output_channels() const { return layers_.back().out_channels; }
  // Product of the resampling strides: tconv strides for synthesis, conv
  // strides for analysis.
  std::size_t scale_factor() const { return scale_; }

  Tensor3 forward(const Tensor3& input) const;

  bool operator==(const Network&) const = default;

 private:
  NetKind kind_;
  std::vector<LayerSpec> layers_;
  std::size_t scale_ = 1;
};

// Decoder g_s: latent (C x h x w) -> image.
class SynthesisNet {
 public:
  explicit SynthesisNet(Network net);

  const Network& network() const { return net_; }
  std::size_t latent_channels() const { return net_.input_channels(); }
  std::size_t output_channels() const { return net_.output_channels(); }
  std::size_t scale_factor() const { return net_.scale_factor(); }

 private:
  Network net_;
};

// Encoder g_a: image -> latent (C x h/s x w/s).
class AnalysisNet {
 public:
  explicit AnalysisNet(Network net);

  const Network& network() const { return net_; }
  std::size_t input_channels() const { return net_.input_channels(); }
  std::size_t latent_channels() const { return net_.output_channels(); }
  std::size_t scale_factor() const { return net_.scale_factor(); }

 private:
  Network net_;
};

// Copy of `net` with every normalization/activation layer removed and all
// biases zeroed: the purely linear part of the transform.
Network linear_part(const Network& net);

// No output clamping: decoded values may be negative or exceed 1.
Tensor3 run_synthesis(const SynthesisNet& net, const Tensor3& z);
Tensor3 run_analysis(const AnalysisNet& net, const Tensor3& x);

}  // namespace codec_lens

#endif  // CODEC_LENS_NN_H_
