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

#include "codec_lens/weights.h"

#include <bit>
#include <cstring>
#include <nlohmann/json.hpp>

#include "codec_lens/image_io.h"

namespace codec_lens {
namespace {

using nlohmann::json;

constexpr char kMagic[4] = {'L', 'I', 'C', 'W'};
constexpr std::size_t kPreambleSize = 16;

const char* KindPrefix(WeightErrorKind kind) {
  switch (kind) {
    case WeightErrorKind::kBadMagic: return "bad magic";
    case WeightErrorKind::kVersionMismatch: return "version mismatch";
    case WeightErrorKind::kPayloadLength: return "payload length";
    case WeightErrorKind::kShapeInconsistency: return "shape inconsistency";
    case WeightErrorKind::kMalformedHeader: return "malformed header";
  }
  return "weights";
}

template <typename T>
void PutLittleEndian(std::vector<std::uint8_t>& out, T value) {
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    out.push_back(static_cast<std::uint8_t>(value >> (8 * i)));
  }
}

template <typename T>
T GetLittleEndian(std::span<const std::uint8_t> bytes, std::size_t offset) {
  T value = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    value |= static_cast<T>(bytes[offset + i]) << (8 * i);
  }
  return value;
}

struct NamedTensor {
  std::string name;
  const ParamTensor* tensor;
};

std::vector<NamedTensor> CollectTensors(const Network& net) {
  std::vector<NamedTensor> out;
  for (std::size_t i = 0; i < net.layers().size(); ++i) {
    const LayerSpec& l = net.layers()[i];
    const std::string prefix = "layers." + std::to_string(i) + ".";
    if (!l.weight.empty()) out.push_back({prefix + "weight", &l.weight});
    if (!l.bias.empty()) out.push_back({prefix + "bias", &l.bias});
    if (!l.beta.empty()) out.push_back({prefix + "beta", &l.beta});
    if (!l.gamma.empty()) out.push_back({prefix + "gamma", &l.gamma});
  }
  return out;
}

std::size_t Product(const std::vector<std::size_t>& shape) {
  std::size_t n = 1;
  for (std::size_t d : shape) n *= d;
  return n;
}

}  // namespace

WeightFormatError::WeightFormatError(WeightErrorKind kind, const std::string& detail)
    : Error(std::string(KindPrefix(kind)) + ": " + detail), kind_(kind) {}

std::vector<std::uint8_t> save_weights(const Network& net) {
  json header;
  header["kind"] = std::string(to_string(net.kind()));
  header["layers"] = json::array();
  for (const LayerSpec& l : net.layers()) {
    header["layers"].push_back({
        {"kind", std::string(to_string(l.kind))},
        {"in_channels", l.in_channels},
        {"out_channels", l.out_channels},
        {"kernel", {l.kernel_h, l.kernel_w}},
        {"stride", l.stride},
        {"padding", l.padding},
        {"output_padding", l.output_padding},
        {"slope", l.slope},
    });
  }
  header["tensors"] = json::array();
  std::vector<std::uint8_t> payload;
  for (const NamedTensor& t : CollectTensors(net)) {
    header["tensors"].push_back(
        {{"name", t.name}, {"shape", t.tensor->shape}, {"offset", payload.size()}});
    for (double v : t.tensor->values) {
      PutLittleEndian(payload, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
    }
  }
  const std::string text = header.dump();
  std::vector<std::uint8_t> out(std::begin(kMagic), std::end(kMagic));
  PutLittleEndian(out, kLicwVersion);
  PutLittleEndian(out, static_cast<std::uint64_t>(text.size()));
  out.insert(out.end(), text.begin(), text.end());
  out.insert(out.end(), payload.begin(), payload.end());
  return out;
}

Network load_weights(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 4 || std::memcmp(bytes.data(), kMagic, 4) != 0) {
    throw WeightFormatError(WeightErrorKind::kBadMagic, "file does not start with LICW");
  }
  if (bytes.size() < kPreambleSize) {
    throw WeightFormatError(WeightErrorKind::kPayloadLength, "file shorter than preamble");
  }
  const auto version = GetLittleEndian<std::uint32_t>(bytes, 4);
  if (version != kLicwVersion) {
    throw WeightFormatError(WeightErrorKind::kVersionMismatch,
                            "file version " + std::to_string(version) +
                                ", supported " + std::to_string(kLicwVersion));
  }
  const auto header_len = GetLittleEndian<std::uint64_t>(bytes, 8);
  if (header_len > bytes.size() - kPreambleSize) {
    throw WeightFormatError(WeightErrorKind::kPayloadLength,
                            "header length " + std::to_string(header_len) +
                                " exceeds file size");
  }
  json header;
  try {
    header = json::parse(bytes.begin() + kPreambleSize,
                         bytes.begin() + kPreambleSize + static_cast<std::ptrdiff_t>(header_len));
  } catch (const json::exception& e) {
    throw WeightFormatError(WeightErrorKind::kMalformedHeader, e.what());
  }
  const std::span<const std::uint8_t> payload =
      bytes.subspan(kPreambleSize + static_cast<std::size_t>(header_len));

  NetKind kind;
  std::vector<LayerSpec> layers;
  struct TensorEntry {
    std::vector<std::size_t> shape;
    std::size_t offset;
  };
  std::vector<std::pair<std::string, TensorEntry>> tensors;
  try {
    const std::string kind_name = header.at("kind").get<std::string>();
    if (kind_name == "analysis") {
      kind = NetKind::kAnalysis;
    } else if (kind_name == "synthesis") {
      kind = NetKind::kSynthesis;
    } else {
      throw WeightFormatError(WeightErrorKind::kMalformedHeader,
                              "unknown net kind '" + kind_name + "'");
    }
    for (const json& jl : header.at("layers")) {
      LayerSpec l;
      try {
        l.kind = parse_layer_kind(jl.at("kind").get<std::string>());
      } catch (const ValueError& e) {
        throw WeightFormatError(WeightErrorKind::kMalformedHeader, e.what());
      }
      l.in_channels = jl.at("in_channels").get<std::size_t>();
      l.out_channels = jl.at("out_channels").get<std::size_t>();
      const auto kernel = jl.value("kernel", std::vector<std::size_t>{1, 1});
      if (kernel.size() != 2) {
        throw WeightFormatError(WeightErrorKind::kMalformedHeader, "kernel must be [kh, kw]");
      }
      l.kernel_h = kernel[0];
      l.kernel_w = kernel[1];
      l.stride = jl.value("stride", std::size_t{1});
      l.padding = jl.value("padding", std::size_t{0});
      l.output_padding = jl.value("output_padding", std::size_t{0});
      l.slope = jl.value("slope", 0.01);
      layers.push_back(std::move(l));
    }
    for (const json& jt : header.at("tensors")) {
      tensors.emplace_back(jt.at("name").get<std::string>(),
                           TensorEntry{jt.at("shape").get<std::vector<std::size_t>>(),
                                       jt.at("offset").get<std::size_t>()});
    }
  } catch (const json::exception& e) {
    throw WeightFormatError(WeightErrorKind::kMalformedHeader, e.what());
  }

  std::size_t expected = 0;
  for (const auto& [name, entry] : tensors) {
    if (entry.offset != expected) {
      throw WeightFormatError(WeightErrorKind::kShapeInconsistency,
                              "tensor " + name + " offset " + std::to_string(entry.offset) +
                                  " is not contiguous (expected " +
                                  std::to_string(expected) + ")");
    }
    expected += Product(entry.shape) * sizeof(float);
  }
  if (payload.size() != expected) {
    throw WeightFormatError(WeightErrorKind::kPayloadLength,
                            "payload has " + std::to_string(payload.size()) +
                                " bytes, header declares " + std::to_string(expected));
  }

  for (const auto& [name, entry] : tensors) {
    const std::string prefix = "layers.";
    const auto dot = name.find('.', prefix.size());
    std::size_t index = 0;
    std::string field;
    try {
      if (name.rfind(prefix, 0) != 0 || dot == std::string::npos) throw std::invalid_argument(name);
      index = std::stoul(name.substr(prefix.size(), dot - prefix.size()));
      field = name.substr(dot + 1);
    } catch (const std::exception&) {
      throw WeightFormatError(WeightErrorKind::kMalformedHeader, "bad tensor name " + name);
    }
    if (index >= layers.size()) {
      throw WeightFormatError(WeightErrorKind::kShapeInconsistency,
                              "tensor " + name + " refers to a missing layer");
    }
    LayerSpec& l = layers[index];
    ParamTensor* target = field == "weight" ? &l.weight
                          : field == "bias" ? &l.bias
                          : field == "beta" ? &l.beta
                          : field == "gamma" ? &l.gamma
                                             : nullptr;
    if (target == nullptr) {
      throw WeightFormatError(WeightErrorKind::kMalformedHeader, "unknown tensor field " + name);
    }
    if (!target->values.empty()) {
      throw WeightFormatError(WeightErrorKind::kMalformedHeader, "duplicate tensor " + name);
    }
    target->shape = entry.shape;
    const std::size_t n = Product(entry.shape);
    target->values.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      target->values[i] = static_cast<double>(std::bit_cast<float>(
          GetLittleEndian<std::uint32_t>(payload, entry.offset + i * sizeof(float))));
    }
  }

  try {
    return Network(kind, std::move(layers));
  } catch (const Error& e) {
    throw WeightFormatError(WeightErrorKind::kShapeInconsistency, e.what());
  }
}

Network load_weights_file(const std::filesystem::path& path) {
  const auto bytes = read_file(path);
  try {
    return load_weights(bytes);
  } catch (const WeightFormatError& e) {
    throw WeightFormatError(e.kind(), path.string() + ": " +
                                          (std::string(e.what()).substr(
                                              std::string(KindPrefix(e.kind())).size() + 2)));
  }
}

void save_weights_file(const std::filesystem::path& path, const Network& net) {
  write_file_atomic(path, save_weights(net));
}

}  // namespace codec_lens
