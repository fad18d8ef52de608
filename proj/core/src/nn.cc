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

#include <algorithm>
#include <cmath>

#include "codec_lens/error.h"
#include "codec_lens/parallel.h"

namespace codec_lens {
namespace {

// Below this many multiply-adds a layer runs on the calling thread.
constexpr std::size_t kParallelWorkThreshold = std::size_t{1} << 18;

using Index = std::ptrdiff_t;

std::string ShapeString(const std::vector<std::size_t>& shape) {
  std::string s = "[";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) s += ", ";
    s += std::to_string(shape[i]);
  }
  return s + "]";
}

void RequireParam(const ParamTensor& p, const std::vector<std::size_t>& shape,
                  const char* what) {
  if (p.shape != shape) {
    throw ShapeError(std::string(what) + " shape " + ShapeString(p.shape) +
                     " does not match expected " + ShapeString(shape));
  }
  std::size_t n = 1;
  for (std::size_t d : shape) n *= d;
  if (p.values.size() != n) {
    throw ShapeError(std::string(what) + " has " + std::to_string(p.values.size()) +
                     " values, expected " + std::to_string(n));
  }
}

void RequireInputChannels(const Tensor3& input, const LayerSpec& layer) {
  if (input.channels() != layer.in_channels) {
    throw ShapeError(std::string(to_string(layer.kind)) + ": input has " +
                     std::to_string(input.channels()) + " channels, layer expects " +
                     std::to_string(layer.in_channels));
  }
}

double Bias(const LayerSpec& layer, std::size_t c) {
  return layer.bias.empty() ? 0.0 : layer.bias.values[c];
}

// Smallest o with o * stride >= lo (lo may be negative).
Index CeilDiv(Index lo, Index stride) {
  if (lo <= 0) return -((-lo) / stride);
  return (lo + stride - 1) / stride;
}

Index FloorDiv(Index hi, Index stride) {
  if (hi >= 0) return hi / stride;
  return -((-hi + stride - 1) / stride);
}

Tensor3 GdnCommon(const Tensor3& input, const LayerSpec& layer, bool inverse) {
  RequireInputChannels(input, layer);
  const std::size_t channels = input.channels();
  const std::size_t plane = input.shape().plane();
  Tensor3 out(input.shape());
  std::vector<double> squares(channels);
  for (std::size_t p = 0; p < plane; ++p) {
    for (std::size_t j = 0; j < channels; ++j) {
      const double x = input.data()[j * plane + p];
      squares[j] = x * x;
    }
    for (std::size_t i = 0; i < channels; ++i) {
      double norm = layer.beta.values[i];
      for (std::size_t j = 0; j < channels; ++j) {
        norm += layer.gamma.values[i * channels + j] * squares[j];
      }
      if (!(norm > 0.0)) {
        throw ValueError(std::string(to_string(layer.kind)) +
                         ": non-positive normalization pool");
      }
      const double x = input.data()[i * plane + p];
      out.data()[i * plane + p] = inverse ? x * std::sqrt(norm) : x / std::sqrt(norm);
    }
  }
  out.CheckFinite();
  return out;
}

}  // namespace

std::string_view to_string(LayerKind kind) {
  switch (kind) {
    case LayerKind::kConv: return "conv";
    case LayerKind::kTConv: return "tconv";
    case LayerKind::kGdn: return "gdn";
    case LayerKind::kIgdn: return "igdn";
    case LayerKind::kRelu: return "relu";
    case LayerKind::kLeakyRelu: return "leaky_relu";
  }
  return "unknown";
}

LayerKind parse_layer_kind(std::string_view name) {
  for (LayerKind k : {LayerKind::kConv, LayerKind::kTConv, LayerKind::kGdn,
                      LayerKind::kIgdn, LayerKind::kRelu, LayerKind::kLeakyRelu}) {
    if (to_string(k) == name) return k;
  }
  throw ValueError("unsupported layer kind: " + std::string(name));
}

std::string_view to_string(NetKind kind) {
  return kind == NetKind::kAnalysis ? "analysis" : "synthesis";
}

void LayerSpec::Validate() const {
  if (in_channels == 0 || out_channels == 0) {
    throw ShapeError(std::string(to_string(kind)) + ": channel counts must be positive");
  }
  switch (kind) {
    case LayerKind::kConv:
    case LayerKind::kTConv: {
      if (kernel_h == 0 || kernel_w == 0 || stride == 0) {
        throw ShapeError("kernel and stride must be positive");
      }
      if (kind == LayerKind::kConv && output_padding != 0) {
        throw ShapeError("conv layers take no output_padding");
      }
      const std::vector<std::size_t> shape =
          kind == LayerKind::kConv
              ? std::vector<std::size_t>{out_channels, in_channels, kernel_h, kernel_w}
              : std::vector<std::size_t>{in_channels, out_channels, kernel_h, kernel_w};
      RequireParam(weight, shape, "weight");
      if (!bias.empty()) RequireParam(bias, {out_channels}, "bias");
      break;
    }
    case LayerKind::kGdn:
    case LayerKind::kIgdn: {
      if (in_channels != out_channels) throw ShapeError("gdn must preserve channels");
      RequireParam(beta, {in_channels}, "beta");
      RequireParam(gamma, {in_channels, in_channels}, "gamma");
      for (double b : beta.values) {
        if (!(b > 0.0)) throw ValueError("gdn beta must be positive");
      }
      for (double g : gamma.values) {
        if (!(g >= 0.0)) throw ValueError("gdn gamma must be nonnegative");
      }
      break;
    }
    case LayerKind::kRelu:
    case LayerKind::kLeakyRelu:
      if (in_channels != out_channels) throw ShapeError("activation must preserve channels");
      if (!std::isfinite(slope)) throw ValueError("leaky_relu slope must be finite");
      break;
  }
  for (const ParamTensor* p : {&weight, &bias, &beta, &gamma}) {
    for (double v : p->values) {
      if (!std::isfinite(v)) throw ValueError("layer parameters must be finite");
    }
  }
}

Tensor3 conv2d(const Tensor3& input, const LayerSpec& layer) {
  RequireInputChannels(input, layer);
  const Index h = static_cast<Index>(input.height());
  const Index w = static_cast<Index>(input.width());
  const Index kh = static_cast<Index>(layer.kernel_h);
  const Index kw = static_cast<Index>(layer.kernel_w);
  const Index st = static_cast<Index>(layer.stride);
  const Index pad = static_cast<Index>(layer.padding);
  if (h + 2 * pad < kh || w + 2 * pad < kw) {
    throw ShapeError("conv: kernel " + std::to_string(kh) + "x" + std::to_string(kw) +
                     " larger than padded input " + input.shape().ToString());
  }
  const Index oh = (h + 2 * pad - kh) / st + 1;
  const Index ow = (w + 2 * pad - kw) / st + 1;
  const std::size_t cin = layer.in_channels;
  const std::size_t cout = layer.out_channels;
  Tensor3 out(cout, static_cast<std::size_t>(oh), static_cast<std::size_t>(ow));

  auto compute_channel = [&](std::size_t co) {
    auto dst = out.channel(co);
    std::fill(dst.begin(), dst.end(), Bias(layer, co));
    for (std::size_t ci = 0; ci < cin; ++ci) {
      auto src = input.channel(ci);
      for (Index ky = 0; ky < kh; ++ky) {
        const Index oy0 = std::max<Index>(0, CeilDiv(pad - ky, st));
        const Index oy1 = std::min<Index>(oh - 1, FloorDiv(h - 1 + pad - ky, st));
        for (Index kx = 0; kx < kw; ++kx) {
          const double wv =
              layer.weight.values[((co * cin + ci) * layer.kernel_h + ky) * layer.kernel_w + kx];
          if (wv == 0.0) continue;
          const Index ox0 = std::max<Index>(0, CeilDiv(pad - kx, st));
          const Index ox1 = std::min<Index>(ow - 1, FloorDiv(w - 1 + pad - kx, st));
          for (Index oy = oy0; oy <= oy1; ++oy) {
            const Index iy = oy * st - pad + ky;
            double* drow = dst.data() + oy * ow;
            const double* srow = src.data() + iy * w;
            for (Index ox = ox0; ox <= ox1; ++ox) {
              drow[ox] += wv * srow[ox * st - pad + kx];
            }
          }
        }
      }
    }
  };
  const std::size_t work = cout * cin * layer.kernel_h * layer.kernel_w * out.shape().plane();
  if (work >= kParallelWorkThreshold) {
    parallel_for(cout, compute_channel);
  } else {
    for (std::size_t co = 0; co < cout; ++co) compute_channel(co);
  }
  out.CheckFinite();
  return out;
}

Tensor3 tconv2d(const Tensor3& input, const LayerSpec& layer) {
  RequireInputChannels(input, layer);
  const Index h = static_cast<Index>(input.height());
  const Index w = static_cast<Index>(input.width());
  const Index kh = static_cast<Index>(layer.kernel_h);
  const Index kw = static_cast<Index>(layer.kernel_w);
  const Index st = static_cast<Index>(layer.stride);
  const Index pad = static_cast<Index>(layer.padding);
  const Index op = static_cast<Index>(layer.output_padding);
  const Index oh = (h - 1) * st - 2 * pad + kh + op;
  const Index ow = (w - 1) * st - 2 * pad + kw + op;
  if (h == 0 || w == 0 || oh <= 0 || ow <= 0) {
    throw ShapeError("tconv: non-positive output size for input " +
                     input.shape().ToString());
  }
  const std::size_t cin = layer.in_channels;
  const std::size_t cout = layer.out_channels;
  Tensor3 out(cout, static_cast<std::size_t>(oh), static_cast<std::size_t>(ow));

  auto compute_channel = [&](std::size_t co) {
    auto dst = out.channel(co);
    std::fill(dst.begin(), dst.end(), Bias(layer, co));
    for (std::size_t ci = 0; ci < cin; ++ci) {
      auto src = input.channel(ci);
      for (Index ky = 0; ky < kh; ++ky) {
        // Output row iy * st - pad + ky must lie in [0, oh).
        const Index iy0 = std::max<Index>(0, CeilDiv(pad - ky, st));
        const Index iy1 = std::min<Index>(h - 1, FloorDiv(oh - 1 + pad - ky, st));
        for (Index kx = 0; kx < kw; ++kx) {
          const double wv =
              layer.weight.values[((ci * cout + co) * layer.kernel_h + ky) * layer.kernel_w + kx];
          if (wv == 0.0) continue;
          const Index ix0 = std::max<Index>(0, CeilDiv(pad - kx, st));
          const Index ix1 = std::min<Index>(w - 1, FloorDiv(ow - 1 + pad - kx, st));
          for (Index iy = iy0; iy <= iy1; ++iy) {
            double* drow = dst.data() + (iy * st - pad + ky) * ow;
            const double* srow = src.data() + iy * w;
            for (Index ix = ix0; ix <= ix1; ++ix) {
              drow[ix * st - pad + kx] += wv * srow[ix];
            }
          }
        }
      }
    }
  };
  const std::size_t work = cout * cin * layer.kernel_h * layer.kernel_w * input.shape().plane();
  if (work >= kParallelWorkThreshold) {
    parallel_for(cout, compute_channel);
  } else {
    for (std::size_t co = 0; co < cout; ++co) compute_channel(co);
  }
  out.CheckFinite();
  return out;
}

Tensor3 gdn(const Tensor3& input, const LayerSpec& layer) {
  return GdnCommon(input, layer, /*inverse=*/false);
}

Tensor3 igdn(const Tensor3& input, const LayerSpec& layer) {
  return GdnCommon(input, layer, /*inverse=*/true);
}

Tensor3 relu(const Tensor3& input) {
  Tensor3 out = input;
  for (double& v : out.data()) v = std::max(v, 0.0);
  return out;
}

Tensor3 leaky_relu(const Tensor3& input, double slope) {
  Tensor3 out = input;
  for (double& v : out.data()) v = v < 0.0 ? v * slope : v;
  out.CheckFinite();
  return out;
}

Tensor3 apply_layer(const Tensor3& input, const LayerSpec& layer) {
  switch (layer.kind) {
    case LayerKind::kConv: return conv2d(input, layer);
    case LayerKind::kTConv: return tconv2d(input, layer);
    case LayerKind::kGdn: return gdn(input, layer);
    case LayerKind::kIgdn: return igdn(input, layer);
    case LayerKind::kRelu:
      RequireInputChannels(input, layer);
      return relu(input);
    case LayerKind::kLeakyRelu:
      RequireInputChannels(input, layer);
      return leaky_relu(input, layer.slope);
  }
  throw ValueError("unknown layer kind");
}

Tensor3 quantize(const Tensor3& z) {
  Tensor3 out = z;
  // std::nearbyint under the default FE_TONEAREST mode rounds ties to even.
  for (double& v : out.data()) v = std::nearbyint(v);
  return out;
}

Network::Network(NetKind kind, std::vector<LayerSpec> layers)
    : kind_(kind), layers_(std::move(layers)) {
  if (layers_.empty()) throw ShapeError("network has no layers");
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    const LayerSpec& layer = layers_[i];
    try {
      layer.Validate();
    } catch (const Error& e) {
      throw ShapeError("layer " + std::to_string(i) + ": " + e.what());
    }
    if (i > 0 && layers_[i - 1].out_channels != layer.in_channels) {
      throw ShapeError("layer " + std::to_string(i) + " expects " +
                       std::to_string(layer.in_channels) + " channels but layer " +
                       std::to_string(i - 1) + " produces " +
                       std::to_string(layers_[i - 1].out_channels));
    }
    const LayerKind resampling =
        kind_ == NetKind::kSynthesis ? LayerKind::kTConv : LayerKind::kConv;
    const LayerKind other =
        kind_ == NetKind::kSynthesis ? LayerKind::kConv : LayerKind::kTConv;
    if (layer.kind == resampling) {
      scale_ *= layer.stride;
    } else if (layer.kind == other && layer.stride != 1) {
      throw ShapeError("layer " + std::to_string(i) + ": " +
                       std::string(to_string(layer.kind)) + " in a " +
                       std::string(to_string(kind_)) + " network must have stride 1");
    }
  }
}

Tensor3 Network::forward(const Tensor3& input) const {
  Tensor3 x = input;
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    try {
      x = apply_layer(x, layers_[i]);
    } catch (const Error& e) {
      throw ShapeError("layer " + std::to_string(i) + " (" +
                       std::string(to_string(layers_[i].kind)) + "): " + e.what());
    }
  }
  return x;
}

Network linear_part(const Network& net) {
  std::vector<LayerSpec> layers;
  for (const LayerSpec& l : net.layers()) {
    if (l.kind != LayerKind::kConv && l.kind != LayerKind::kTConv) continue;
    LayerSpec copy = l;
    std::fill(copy.bias.values.begin(), copy.bias.values.end(), 0.0);
    layers.push_back(std::move(copy));
  }
  return Network(net.kind(), std::move(layers));
}

SynthesisNet::SynthesisNet(Network net) : net_(std::move(net)) {
  if (net_.kind() != NetKind::kSynthesis) {
    throw ValueError("expected a synthesis network, got analysis");
  }
}

AnalysisNet::AnalysisNet(Network net) : net_(std::move(net)) {
  if (net_.kind() != NetKind::kAnalysis) {
    throw ValueError("expected an analysis network, got synthesis");
  }
}

Tensor3 run_synthesis(const SynthesisNet& net, const Tensor3& z) {
  if (z.channels() != net.latent_channels()) {
    throw ShapeError("run_synthesis: latent has " + std::to_string(z.channels()) +
                     " channels, decoder expects " +
                     std::to_string(net.latent_channels()));
  }
  return net.network().forward(z);
}

Tensor3 run_analysis(const AnalysisNet& net, const Tensor3& x) {
  if (x.channels() != net.input_channels()) {
    throw ShapeError("run_analysis: input has " + std::to_string(x.channels()) +
                     " channels, encoder expects " + std::to_string(net.input_channels()));
  }
  return net.network().forward(x);
}

}  // namespace codec_lens
